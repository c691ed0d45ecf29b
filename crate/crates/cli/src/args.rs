use clap::{Args, Parser, Subcommand, ValueEnum};
use duorat_core::hyperbola::Box as SearchBox;
use duorat_core::Rational;

#[derive(Parser, Debug)]
#[command(name = "duorat", version, about = "Two-rational approximation and related number-theory measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub jobs: Option<u64>,

    /// Seed for sampled sweeps.
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Single and two-rational approximation.
    #[command(subcommand)]
    Approx(ApproxCmd),
    /// The congruence xy ≡ c (mod q).
    #[command(subcommand)]
    Hyperbola(HyperbolaCmd),
    /// Exponential sums.
    #[command(subcommand)]
    Sums(SumsCmd),
    /// Dirichlet characters.
    #[command(subcommand)]
    Chars(CharsCmd),
    /// Conjecture sweeps.
    #[command(subcommand)]
    Lab(LabCmd),
}

pub fn parse_alpha(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

pub fn parse_box(s: &str) -> Result<SearchBox, String> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [xl, xh, yl, yh] = parts[..] else {
        return Err("expected xlo,xhi,ylo,yhi".into());
    };
    SearchBox::new(xl, xh, yl, yh).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum ApproxCmd {
    /// Best a/q with q <= N (last convergent, or exhaustive with --best).
    Single {
        #[arg(long, value_parser = parse_alpha)]
        alpha: Rational,
        #[arg(long)]
        n: u64,
        /// Exhaustive minimum instead of the Dirichlet convergent.
        #[arg(long)]
        best: bool,
        /// Include the full convergent list.
        #[arg(long)]
        convergents: bool,
    },
    /// a1/q1 + a2/q2 with q1, q2 <= N.
    Duo {
        #[arg(long, value_parser = parse_alpha)]
        alpha: Rational,
        #[arg(long)]
        n: u64,
        /// Largest r scanned by the reduction.
        #[arg(long)]
        r_max: Option<u64>,
        /// Restrict the reduction to distinct primes q1 < q2 (N >= 12).
        #[arg(long)]
        distinct_primes: bool,
        /// Also report the exhaustive optimum.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Instance {
    #[arg(long)]
    pub q: u64,
    #[arg(long, allow_negative_numbers = true)]
    pub c: i128,
}

#[derive(Subcommand, Debug)]
pub enum HyperbolaCmd {
    /// All solutions in a box.
    Solve {
        #[command(flatten)]
        inst: Instance,
        /// xlo,xhi,ylo,yhi
        #[arg(long = "box", value_parser = parse_box)]
        bx: SearchBox,
        #[arg(long)]
        coprime: bool,
    },
    /// The solution in [1, q-1]^2 with the smallest max(x, y).
    Min {
        #[command(flatten)]
        inst: Instance,
    },
    /// Factor the lifts c + kq looking for divisor pairs inside the box.
    Lift {
        #[command(flatten)]
        inst: Instance,
        #[arg(long = "box", value_parser = parse_box)]
        bx: SearchBox,
        #[arg(long)]
        k_max: u64,
        /// List every hit instead of the first.
        #[arg(long)]
        all: bool,
        /// With --all, keep only gcd(x, y) = 1.
        #[arg(long)]
        coprime: bool,
    },
    /// Distinct residues xy mod q over a box.
    Coverage {
        /// Modulus.
        #[arg(long)]
        q: u64,
        #[arg(long = "box", value_parser = parse_box)]
        bx: SearchBox,
        #[arg(long)]
        coprime: bool,
    },
    /// Good/bad status of the interval around a/q at level N.
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        a: i128,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct LChoice {
    /// Summation length; defaults to ⌊q N^(phi-2-eps)⌋ + 1.
    #[arg(long)]
    pub l: Option<u64>,
    #[arg(long, default_value_t = 2.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
}

#[derive(Subcommand, Debug)]
pub enum SumsCmd {
    /// Erdős–Turán check for explicit points, or for a·p/q over primes p in [N/2, N].
    Et {
        /// Comma-separated rationals; reduced mod 1.
        #[arg(long, value_delimiter = ',', value_parser = parse_alpha)]
        points: Vec<Rational>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<i128>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        l: u64,
    },
    /// Pair and diagonal sums S1, S2 with the Cauchy–Schwarz and Parseval checks.
    S1s2 {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_negative_numbers = true)]
        a: i128,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        l: LChoice,
    },
    /// Multiplicities d_r of r = l p, l <= L, p prime in [N/2, N].
    Drprofile {
        #[arg(long)]
        n: u64,
        /// Defaults to N^2.
        #[arg(long)]
        l: Option<u64>,
        /// Emit every nonzero d_r instead of the histogram.
        #[arg(long)]
        full: bool,
    },
    /// The gcd-summed pair bound T and its d(q) log q trend line.
    Thm7 {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CharsCmd {
    /// Generators and every character as an exponent vector.
    Table {
        #[arg(long)]
        q: u64,
        /// Include χ(n) for n = 0..q as exact phases "k/λ" (null when χ(n) = 0).
        #[arg(long)]
        values: bool,
    },
    /// Largest deviation from the orthogonality relations.
    Ortho {
        #[arg(long)]
        q: u64,
    },
    /// Solutions of a q1 q2 ≡ b counted directly and through characters.
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_negative_numbers = true)]
        a: i128,
        /// P = primes in [N/2, N] coprime to q.
        #[arg(long)]
        n: u64,
        #[arg(long)]
        b: u64,
    },
    /// Largest partial sum of a character against √q ln q.
    Pv {
        #[arg(long)]
        q: u64,
        /// Character index; all non-principal characters when omitted.
        #[arg(long)]
        chi: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LabCmd {
    /// Oracle quality against (q1 q2)^β N^(2-β): one α, or a seeded random sweep.
    Conj0 {
        #[arg(long, value_parser = parse_alpha)]
        alpha: Option<Rational>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Smallest-max solutions over every unit c, q in [q_lo, q_hi].
    Conj2 {
        #[arg(long)]
        q_lo: u64,
        #[arg(long)]
        q_hi: u64,
        /// One row per (q, c) instead of the per-q worst case.
        #[arg(long)]
        per_pair: bool,
    },
    /// Coprime solutions in [CN, 2CN]^2: one (q, c, N), or a sweep over q.
    Conj3 {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, allow_negative_numbers = true)]
        c: Option<i128>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        q_lo: Option<u64>,
        #[arg(long)]
        q_hi: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long = "C", default_value_t = 1.0)]
        c_const: f64,
    },
    /// Total length of the bad intervals for N < q <= q_cap.
    Thm4 {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long)]
        q_cap: u64,
        /// Include the per-q counts.
        #[arg(long)]
        per_q: bool,
    },
}
