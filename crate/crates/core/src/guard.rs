//! Enumeration limits.
//!
//! Brute-force routines refuse requests that would run away instead of
//! silently truncating. The limits can be overridden process-wide through the
//! `DUORAT_GUARD` environment variable: a positive integer replaces the
//! per-axis span limit (the total work limit scales with it), and `off`
//! disables every guard.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_SPAN: u64 = 10_000_000;
pub const DEFAULT_WORK: u64 = 1_000_000_000;
/// Largest `N` accepted by the exhaustive two-rational oracle.
pub const DEFAULT_ORACLE_N: u64 = 300;
/// Largest modulus accepted by the full-residue conjecture sweep.
pub const DEFAULT_SWEEP_Q: u64 = 5000;
/// Largest modulus for which a full character table is built.
pub const DEFAULT_CHAR_Q: u64 = 1_000_000;
/// Largest modulus for the quadratic orthogonality double loop.
pub const DEFAULT_ORTHO_Q: u64 = 10_000;

pub const ENV_VAR: &str = "DUORAT_GUARD";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub span: u64,
    pub work: u64,
    pub oracle_n: u64,
    pub sweep_q: u64,
    pub char_q: u64,
    pub ortho_q: u64,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            span: DEFAULT_SPAN,
            work: DEFAULT_WORK,
            oracle_n: DEFAULT_ORACLE_N,
            sweep_q: DEFAULT_SWEEP_Q,
            char_q: DEFAULT_CHAR_Q,
            ortho_q: DEFAULT_ORTHO_Q,
        }
    }
}

impl Guard {
    pub fn unlimited() -> Self {
        Guard {
            span: u64::MAX,
            work: u64::MAX,
            oracle_n: u64::MAX,
            sweep_q: u64::MAX,
            char_q: u64::MAX,
            ortho_q: u64::MAX,
        }
    }

    /// Parses a `DUORAT_GUARD` value. Unparseable values fall back to the defaults.
    pub fn from_setting(value: Option<&str>) -> Self {
        match value.map(str::trim) {
            Some(v) if v.eq_ignore_ascii_case("off") => Guard::unlimited(),
            Some(v) => match v.parse::<u64>() {
                Ok(span) if span > 0 => Guard {
                    span,
                    work: span.saturating_mul(DEFAULT_WORK / DEFAULT_SPAN),
                    ..Guard::default()
                },
                _ => Guard::default(),
            },
            None => Guard::default(),
        }
    }
}

/// The process-wide guard, read once from the environment.
pub fn current() -> Guard {
    static GUARD: OnceLock<Guard> = OnceLock::new();
    *GUARD.get_or_init(|| Guard::from_setting(std::env::var(ENV_VAR).ok().as_deref()))
}

pub(crate) fn check_span(what: &'static str, span: u64) -> Result<()> {
    let limit = current().span;
    if span > limit {
        return Err(Error::too_large(what, span, limit));
    }
    Ok(())
}

pub(crate) fn check_work(what: &'static str, work: u128) -> Result<()> {
    let limit = current().work;
    if work > limit as u128 {
        return Err(Error::too_large(what, work, limit));
    }
    Ok(())
}

pub(crate) fn check_limit(what: &'static str, value: u64, limit: u64) -> Result<()> {
    if value > limit {
        return Err(Error::too_large(what, value, limit));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn settings() {
        assert_eq!(Guard::from_setting(None), Guard::default());
        assert_eq!(Guard::from_setting(Some("off")), Guard::unlimited());
        let g = Guard::from_setting(Some("500"));
        assert_eq!(g.span, 500);
        assert_eq!(g.work, 50_000);
        assert_eq!(Guard::from_setting(Some("junk")), Guard::default());
    }
}
