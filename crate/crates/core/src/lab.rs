//! Desk-scale sweeps over the conjectures and the bad-interval measure.
//!
//! Rows are computed in parallel but collected in input order, and every
//! aggregate is accumulated sequentially afterwards, so a report does not
//! depend on the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::arith::gcd;
use crate::duo::{brute_best_duo, duo_from_reduction, DuoApprox, ReductionOptions};
use crate::error::{Error, Result};
use crate::guard;
use crate::hyperbola::{self, Box, HyperbolaInstance, HyperbolaSolution, MinMaxSolution};
use crate::rational::Rational;
use crate::report::{real, SweepReport};

/// Largest denominator used when sampling random rationals.
pub const SAMPLE_MAX_DEN: u64 = 1_000_000;

/// Uniform rationals `a/d` in `[0, 1)` with `d` uniform in `[1, max_den]`.
pub fn sample_alphas(seed: u64, count: usize, max_den: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=max_den.max(1));
            let a = rng.gen_range(0..d);
            Rational::new(a, d)
        })
        .collect()
}

fn check_q_range(q_lo: u64, q_hi: u64) -> Result<()> {
    if q_lo < 2 || q_lo > q_hi {
        return Err(Error::PreconditionViolated(format!(
            "need 2 <= q_lo <= q_hi, got [{q_lo}, {q_hi}]"
        )));
    }
    guard::check_limit("sweep q_hi", q_hi, guard::current().sweep_q)
}

/// Least-squares slope of `ys` against `xs`; zero with fewer than two points.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Smallest-max solutions for every unit `c` mod `q`, in increasing `c`.
pub fn conj2_rows(q: u64) -> Result<Vec<(u64, MinMaxSolution)>> {
    let table = hyperbola::smallest_max_table(q)?;
    Ok(table
        .into_iter()
        .enumerate()
        .filter_map(|(c, m)| m.map(|m| (c as u64, m)))
        .collect())
}

const CONJ2_COLUMNS: [&str; 6] = ["q", "c", "x", "y", "max", "exponent"];

/// Per-`q` worst exponent `ln max(x, y) / ln q` over all units `c` (ties to
/// the smallest `c`). With `per_pair` every `(q, c)` row is emitted instead.
/// The parameter `trend_slope` is the fitted slope of the worst exponent
/// against `ln q`.
pub fn conj2_sweep(q_lo: u64, q_hi: u64, per_pair: bool) -> Result<SweepReport> {
    check_q_range(q_lo, q_hi)?;
    let per_q: Vec<Vec<(u64, MinMaxSolution)>> = (q_lo..=q_hi)
        .into_par_iter()
        .map(conj2_rows)
        .collect::<Result<_>>()?;

    let mut report = SweepReport::new(if per_pair { "conj2_pairs" } else { "conj2" }, &CONJ2_COLUMNS)
        .param("q_lo", q_lo)
        .param("q_hi", q_hi);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (q, rows) in (q_lo..).zip(&per_q) {
        let row = |c: u64, m: &MinMaxSolution| {
            vec![q.into(), c.into(), m.sol.x.into(), m.sol.y.into(), m.max.into(), real(m.exponent)]
        };
        let worst = rows
            .iter()
            .fold(None::<&(u64, MinMaxSolution)>, |acc, r| match acc {
                Some(a) if a.1.max >= r.1.max => Some(a),
                _ => Some(r),
            })
            .expect("every modulus >= 2 has the unit 1");
        xs.push((q as f64).ln());
        ys.push(worst.1.exponent);
        if per_pair {
            for (c, m) in rows {
                report.push(row(*c, m));
            }
        } else {
            report.push(row(worst.0, &worst.1));
        }
    }
    report = report.param("trend_slope", real(slope(&xs, &ys)));
    report.summarize(&["exponent"]);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Conj3Result {
    pub holds: bool,
    pub witness: Option<HyperbolaSolution>,
    pub box_lo: u64,
    pub box_hi: u64,
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.5 && theta <= 1.0) {
        return Err(Error::PreconditionViolated(format!("need 1/2 < θ <= 1, got {theta}")));
    }
    Ok(())
}

fn conj3_box(c_const: f64, n: u64) -> Result<(u64, u64)> {
    if !(c_const > 0.0 && c_const.is_finite()) {
        return Err(Error::PreconditionViolated(format!("need C > 0, got {c_const}")));
    }
    let lo = (c_const * n as f64).ceil().max(1.0);
    let hi = (2.0 * c_const * n as f64).floor();
    if hi < lo || hi >= u64::MAX as f64 {
        return Err(Error::RangeTooSmall(format!("box [{lo}, {hi}] is empty or unrepresentable")));
    }
    Ok((lo as u64, hi as u64))
}

/// Looks for coprime `x, y ∈ [⌈CN⌉, ⌊2CN⌋]` with `xy ≡ c (mod q)`; the
/// witness is the first by `(x, y)`.
pub fn conj3_check(q: u64, c: i128, theta: f64, c_const: f64, n: u64) -> Result<Conj3Result> {
    check_theta(theta)?;
    let inst = HyperbolaInstance::new(q, c)?;
    let need = (q as f64).powf(theta);
    if (n as f64) < need * (1.0 - 1e-12) {
        return Err(Error::PreconditionViolated(format!("N = {n} is below q^θ = {need}")));
    }
    let (lo, hi) = conj3_box(c_const, n)?;
    let witness = hyperbola::box_solutions(inst, Box::square(lo, hi)?, true)?.next();
    Ok(Conj3Result {
        holds: witness.is_some(),
        witness,
        box_lo: lo,
        box_hi: hi,
    })
}

/// [`conj3_check`] for every unit `c` mod `q`, `q` in `[q_lo, q_hi]`, with
/// `N = ⌈q^θ⌉`. One row per `q`; `worst_ratio` is the largest
/// `max(x, y) / N` among the witnesses.
pub fn conj3_sweep(q_lo: u64, q_hi: u64, theta: f64, c_const: f64) -> Result<SweepReport> {
    check_q_range(q_lo, q_hi)?;
    check_theta(theta)?;
    conj3_box(c_const, 1)?;
    let rows: Vec<Vec<Value>> = (q_lo..=q_hi)
        .into_par_iter()
        .map(|q| -> Result<Vec<Value>> {
            let mut n = (q as f64).powf(theta).ceil() as u64;
            while (n as f64) < (q as f64).powf(theta) {
                n += 1;
            }
            let (mut units, mut failures, mut first_fail) = (0u64, 0u64, Value::Null);
            let mut worst = 0.0f64;
            for c in 1..q {
                if gcd(c, q) != 1 {
                    continue;
                }
                units += 1;
                let r = conj3_check(q, c as i128, theta, c_const, n)?;
                match r.witness {
                    Some(w) => worst = worst.max(w.height() as f64 / n as f64),
                    None => {
                        failures += 1;
                        if first_fail.is_null() {
                            first_fail = c.into();
                        }
                    }
                }
            }
            Ok(vec![
                q.into(),
                n.into(),
                units.into(),
                (failures == 0).into(),
                failures.into(),
                first_fail,
                real(worst),
            ])
        })
        .collect::<Result<_>>()?;
    let mut report = SweepReport::new(
        "conj3",
        &["q", "n", "units", "holds", "failures", "first_failure_c", "worst_ratio"],
    )
    .param("theta", real(theta))
    .param("C", real(c_const))
    .param("q_lo", q_lo)
    .param("q_hi", q_hi);
    for r in rows {
        report.push(r);
    }
    report.summarize(&["worst_ratio"]);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conj0Quality {
    pub best: DuoApprox,
    /// `error · (q1 q2)^β · N^{2-β}`.
    pub ratio: f64,
}

fn conj0_ratio(err: &Rational, q1: u64, q2: u64, n: u64, beta: f64) -> f64 {
    err.to_f64() * ((q1 as f64) * (q2 as f64)).powf(beta) * (n as f64).powf(2.0 - beta)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::PreconditionViolated(format!("need 0 <= β <= 1, got {beta}")));
    }
    Ok(())
}

pub fn conj0_quality(alpha: &Rational, n: u64, beta: f64) -> Result<Conj0Quality> {
    check_beta(beta)?;
    let best = brute_best_duo(alpha, n)?;
    let ratio = conj0_ratio(&best.error, best.q1, best.q2, n, beta);
    Ok(Conj0Quality { best, ratio })
}

/// Random-α sweep. Per `(α, N)`: the oracle witness with its conjecture-0
/// ratio, and the reduction construction with `error · q · N^{2-ε}` (`q` the
/// denominator of α).
pub fn conj0_sweep(ns: &[u64], beta: f64, epsilon: f64, samples: usize, seed: u64) -> Result<SweepReport> {
    check_beta(beta)?;
    if ns.is_empty() || samples == 0 {
        return Err(Error::PreconditionViolated("need at least one N and one sample".into()));
    }
    let oracle_n = guard::current().oracle_n;
    for &n in ns {
        if n == 0 {
            return Err(Error::PreconditionViolated("N must be positive".into()));
        }
        guard::check_limit("oracle N", n, oracle_n)?;
    }
    let alphas = sample_alphas(seed, samples, SAMPLE_MAX_DEN);
    let jobs: Vec<(usize, &Rational, u64)> = alphas
        .iter()
        .enumerate()
        .flat_map(|(i, a)| ns.iter().map(move |&n| (i, a, n)))
        .collect();
    let rows: Vec<Vec<Value>> = jobs
        .par_iter()
        .map(|&(i, alpha, n)| -> Result<Vec<Value>> {
            let q = conj0_quality(alpha, n, beta)?;
            let red = duo_from_reduction(alpha, n, ReductionOptions::default())?;
            let den = alpha.denom().to_string().parse::<f64>().unwrap_or(f64::INFINITY);
            let conj1 = red.result.error.to_f64() * den * (n as f64).powf(2.0 - epsilon);
            Ok(vec![
                i.into(),
                alpha.to_string().into(),
                n.into(),
                q.best.q1.into(),
                q.best.q2.into(),
                q.best.error.to_string().into(),
                real(q.ratio),
                red.result.error.to_string().into(),
                real(conj1),
            ])
        })
        .collect::<Result<_>>()?;
    let mut report = SweepReport::new(
        "conj0",
        &[
            "sample",
            "alpha",
            "n",
            "q1",
            "q2",
            "oracle_error",
            "ratio",
            "reduction_error",
            "conj1_ratio",
        ],
    )
    .param("beta", real(beta))
    .param("epsilon", real(epsilon))
    .param("samples", samples)
    .param("seed", seed)
    .param("n", ns.to_vec());
    for r in rows {
        report.push(r);
    }
    report.summarize(&["ratio", "conj1_ratio"]);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Thm4Row {
    pub q: u64,
    pub units: u64,
    pub bad: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm4Report {
    pub n: u64,
    pub epsilon: f64,
    pub q_cap: u64,
    pub bad_pairs: u64,
    pub total_pairs: u64,
    /// `Σ 2/q` over bad pairs; the measure is this over `N^{2-ε}`.
    pub bad_weight: Rational,
    pub bad_measure: f64,
    /// `1/√(ln N)`, for trend comparison only.
    pub reference: f64,
    pub per_q: Vec<Thm4Row>,
}

/// Total length of the bad intervals `I_{a,q}` (half-width `1/(q N^{2-ε})`)
/// over `N < q <= q_cap`, `gcd(a, q) = 1`, overlaps counted with multiplicity.
pub fn thm4_bad_measure(n: u64, epsilon: f64, q_cap: u64) -> Result<Thm4Report> {
    if n == 0 {
        return Err(Error::PreconditionViolated("N must be positive".into()));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::PreconditionViolated(format!("need 0 <= ε <= 1, got {epsilon}")));
    }
    let scale = (n as f64).powf(2.0 - epsilon);
    if q_cap as f64 > scale * (1.0 + 1e-12) {
        return Err(Error::PreconditionViolated(format!(
            "q_cap = {q_cap} exceeds N^(2-ε) = {scale}"
        )));
    }
    guard::check_limit("thm4 q_cap", q_cap, guard::current().sweep_q)?;
    let per_q: Vec<Thm4Row> = (n + 1..=q_cap.max(n))
        .into_par_iter()
        .map(|q| -> Result<Thm4Row> {
            let (mut units, mut bad) = (0, 0);
            for a in 1..q {
                if gcd(a, q) != 1 {
                    continue;
                }
                units += 1;
                if !hyperbola::classify_interval(a as i128, q, n)?.is_good() {
                    bad += 1;
                }
            }
            Ok(Thm4Row { q, units, bad })
        })
        .collect::<Result<_>>()?;
    let mut bad_weight = Rational::zero();
    for r in &per_q {
        if r.bad > 0 {
            bad_weight = bad_weight + Rational::new(2 * r.bad, r.q);
        }
    }
    Ok(Thm4Report {
        n,
        epsilon,
        q_cap,
        bad_pairs: per_q.iter().map(|r| r.bad).sum(),
        total_pairs: per_q.iter().map(|r| r.units).sum(),
        bad_measure: bad_weight.to_f64() / scale,
        bad_weight,
        reference: if n >= 2 { 1.0 / (n as f64).ln().sqrt() } else { f64::INFINITY },
        per_q,
    })
}
