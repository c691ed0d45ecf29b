use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{a} is not coprime to {q} (gcd {gcd})")]
    NotCoprime { a: String, q: String, gcd: String },

    /// An enumeration would exceed the configured guard.
    #[error("range too large: {what} needs {requested}, limit is {limit}")]
    RangeTooLarge {
        what: &'static str,
        requested: String,
        limit: String,
    },

    #[error("range too small: {0}")]
    RangeTooSmall(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("character {0} is the principal character")]
    PrincipalCharacter(usize),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },
}

impl Error {
    pub(crate) fn not_coprime(a: impl ToString, q: impl ToString, gcd: impl ToString) -> Self {
        Error::NotCoprime {
            a: a.to_string(),
            q: q.to_string(),
            gcd: gcd.to_string(),
        }
    }

    pub(crate) fn too_large(what: &'static str, requested: impl ToString, limit: impl ToString) -> Self {
        Error::RangeTooLarge {
            what,
            requested: requested.to_string(),
            limit: limit.to_string(),
        }
    }

    /// Short machine-readable tag, used by structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotCoprime { .. } => "NotCoprime",
            Error::RangeTooLarge { .. } => "RangeTooLarge",
            Error::RangeTooSmall(_) => "RangeTooSmall",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::PrincipalCharacter(_) => "PrincipalCharacter",
            Error::Parse { .. } => "Parse",
        }
    }
}
