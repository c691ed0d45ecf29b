//! Approximation of α by `a1/q1 + a2/q2` with `q1, q2 <= N`.
//!
//! The main construction takes the Dirichlet pair `a/q` at level `N^2` and
//! looks for `q1 q2 ≡ r a⁻¹ (mod q)` with a small positive `r`, so that
//! `a q1 q2 - b q = r` and `|a/q - b/(q1 q2)| = r / (q q1 q2)`. Two simple
//! constructions (a single Dirichlet fraction plus `0/1`, and a grid of
//! fractions over two primes near `N`) are always computed as fallbacks, and
//! an exhaustive oracle gives the true optimum for small `N`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{self, gcd, lcm, mod_inverse_big, split_fraction};
use crate::error::{Error, Result};
use crate::guard;
use crate::hyperbola::{self, Box, HyperbolaInstance};
use crate::rational::Rational;
use crate::sieve;
use crate::single::{dirichlet_approx, nearest_multiple, SingleApprox};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Reduction,
    PrimeGrid,
    Trivial,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DuoApprox {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub a1: BigInt,
    pub q1: u64,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub a2: BigInt,
    pub q2: u64,
    /// Exact `|α - a1/q1 - a2/q2|`.
    pub error: Rational,
    pub method: Method,
}

impl DuoApprox {
    pub fn new(alpha: &Rational, a1: BigInt, q1: u64, a2: BigInt, q2: u64, method: Method) -> Self {
        let mut d = DuoApprox {
            a1,
            q1,
            a2,
            q2,
            error: Rational::zero(),
            method,
        };
        d.error = (alpha - &d.value()).abs();
        d
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.a1.clone(), self.q1) + Rational::new(self.a2.clone(), self.q2)
    }

    /// `lcm(q1, q2)`: every reachable value is a multiple of its reciprocal.
    pub fn combined_denominator(&self) -> u64 {
        lcm(self.q1, self.q2)
    }

    /// The numerator `k` of `value = k / lcm(q1, q2)`.
    pub fn combined_numerator(&self) -> BigInt {
        (self.value() * Rational::from(self.combined_denominator())).floor()
    }

    /// Ordering used to pick among candidates: error, then combined
    /// denominator, then numerator, then construction.
    pub fn preference(&self, other: &DuoApprox) -> Ordering {
        self.error
            .cmp(&other.error)
            .then_with(|| self.combined_denominator().cmp(&other.combined_denominator()))
            .then_with(|| self.combined_numerator().cmp(&other.combined_numerator()))
            .then_with(|| self.method.cmp(&other.method))
    }
}

fn keep_best(best: &mut Option<DuoApprox>, cand: DuoApprox) {
    if best.as_ref().map_or(true, |b| cand.preference(b) == Ordering::Less) {
        *best = Some(cand);
    }
}

/// `a q1 q2 - b q = r` with `q1 q2 ≡ r a⁻¹ (mod q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub single: SingleApprox,
    pub r: u64,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub b: BigInt,
    pub q1: u64,
    pub q2: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionOutcome {
    pub result: DuoApprox,
    /// The best reduction candidate, if the scan produced any.
    pub trace: Option<ReductionTrace>,
    /// The Dirichlet pair at level `N^2` the scan started from.
    pub single: SingleApprox,
    pub r_max: u64,
    /// True when `q <= N` made the scan unnecessary.
    pub short_circuit: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ReductionOptions {
    /// Defaults to [`default_r_max`].
    pub r_max: Option<u64>,
    /// Only distinct primes `q1 < q2`; requires `N >= 12`.
    pub distinct_primes: bool,
}

/// `max(1, ⌈⌈q/N²⌉ · N^{1/10}⌉)`.
pub fn default_r_max(q: u64, n: u64) -> u64 {
    let n2 = (n as u128 * n as u128).max(1);
    let blocks = (q as u128).div_ceil(n2) as f64;
    ((blocks * (n as f64).powf(0.1)).ceil() as u64).max(1)
}

fn level_n_squared(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::PreconditionViolated("N must be positive".into()));
    }
    n.checked_mul(n)
        .ok_or_else(|| Error::too_large("N^2", format!("{n}^2"), u64::MAX))
}

pub fn duo_from_reduction(alpha: &Rational, n: u64, opts: ReductionOptions) -> Result<ReductionOutcome> {
    let n2 = level_n_squared(n)?;
    if opts.distinct_primes && n < 12 {
        return Err(Error::PreconditionViolated(format!(
            "distinct-primes mode needs N >= 12, got {n}"
        )));
    }
    let single = dirichlet_approx(alpha, n2);
    let q = single.q.to_u64().expect("q <= N^2");
    let r_max = opts.r_max.unwrap_or_else(|| default_r_max(q, n)).max(1);

    let mut best: Option<DuoApprox> = None;
    if !opts.distinct_primes {
        keep_best(&mut best, trivial_duo(alpha, n)?);
    }
    if n >= 12 {
        keep_best(&mut best, prime_grid_approx(alpha, n)?);
    }

    let short_circuit = q <= n;
    let mut trace: Option<(DuoApprox, ReductionTrace)> = None;
    if !short_circuit {
        let a_inv = mod_inverse_big(&single.a, q)?;
        let bx = Box::square(1, n)?;
        let primes = if opts.distinct_primes {
            sieve::primes_between(2, n)?
        } else {
            Vec::new()
        };
        for r in 1..=r_max {
            if gcd(r % q, q) != 1 {
                continue;
            }
            let c = arith::mul_mod(r % q, a_inv, q);
            if c > n2 {
                continue;
            }
            let inst = HyperbolaInstance::new(q, c as i128)?;
            let k_max = (n2 - c) / q;
            for hit in hyperbola::lift_solutions(inst, bx, k_max, true)? {
                let (q1, q2) = (hit.sol.x, hit.sol.y);
                if opts.distinct_primes
                    && !(q1 < q2 && primes.binary_search(&q1).is_ok() && primes.binary_search(&q2).is_ok())
                {
                    continue;
                }
                let prod = BigInt::from(q1) * BigInt::from(q2);
                let (b, rem) = (&single.a * &prod - BigInt::from(r)).div_rem(&BigInt::from(q));
                debug_assert!(rem.is_zero());
                let (a1, a2) = split_fraction(&b, q1, q2)?;
                let cand = DuoApprox::new(alpha, a1, q1, a2, q2, Method::Reduction);
                if trace.as_ref().map_or(true, |(t, _)| cand.preference(t) == Ordering::Less) {
                    let tr = ReductionTrace {
                        single: single.clone(),
                        r,
                        b,
                        q1,
                        q2,
                    };
                    trace = Some((cand, tr));
                }
            }
        }
    }
    if let Some((cand, _)) = &trace {
        keep_best(&mut best, cand.clone());
    }
    let result = best.ok_or_else(|| Error::RangeTooSmall(format!("no construction available at N = {n}")))?;
    Ok(ReductionOutcome {
        result,
        trace: trace.map(|(_, t)| t),
        single,
        r_max,
        short_circuit,
    })
}

/// `L -> (q1, q2)` for every `L = lcm(q1, q2)` with `1 <= q1 <= q2 <= n`,
/// keeping the pair with the smallest product, then smallest `q1`.
fn lcm_witnesses(n: u64) -> Arc<Vec<(u64, u64, u64)>> {
    static CACHE: RwLock<Option<HashMap<u64, Arc<Vec<(u64, u64, u64)>>>>> = RwLock::new(None);
    if let Some(v) = CACHE.read().unwrap_or_else(|e| e.into_inner()).as_ref().and_then(|m| m.get(&n)) {
        return Arc::clone(v);
    }
    let mut map: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for q1 in 1..=n {
        for q2 in q1..=n {
            let l = lcm(q1, q2);
            map.entry(l)
                .and_modify(|w| {
                    if (q1 * q2, q1) < (w.0 * w.1, w.0) {
                        *w = (q1, q2);
                    }
                })
                .or_insert((q1, q2));
        }
    }
    let v: Arc<Vec<_>> = Arc::new(map.into_iter().map(|(l, (a, b))| (l, a, b)).collect());
    let mut guard = CACHE.write().unwrap_or_else(|e| e.into_inner());
    guard.get_or_insert_with(HashMap::new).insert(n, Arc::clone(&v));
    v
}

/// Smallest residual `|p L - k d|` over the lcm list: returns (L, k) with
/// ties to the smaller `L`, then the smaller `k`.
fn nearest_over<T>(p: &T, d: &T, lcms: &[(u64, u64, u64)], from: impl Fn(u64) -> T) -> (u64, T)
where
    T: Integer + Clone,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Sub<&'a T, Output = T>,
{
    let mut best: Option<(T, u64, T)> = None; // (residual, L, k)
    for &(l, _, _) in lcms {
        let lt = from(l);
        let (k, res) = nearest_multiple(&(p * &lt), d);
        let better = match &best {
            None => true,
            Some((r0, l0, _)) => &res * &from(*l0) < r0 * &lt,
        };
        if better {
            let done = res.is_zero();
            best = Some((res, l, k));
            if done {
                break;
            }
        }
    }
    let (_, l, k) = best.expect("lcm list is non-empty");
    (l, k)
}

/// Exhaustive optimum over all `a1/q1 + a2/q2` with `q1, q2 <= n`, using that
/// the reachable values are exactly the multiples of `1/lcm(q1, q2)`.
pub fn brute_best_duo(alpha: &Rational, n: u64) -> Result<DuoApprox> {
    if n == 0 {
        return Err(Error::PreconditionViolated("N must be positive".into()));
    }
    guard::check_limit("oracle N", n, guard::current().oracle_n)?;
    let lcms = lcm_witnesses(n);
    let (p, d) = (alpha.numer(), alpha.denom());
    let (l, k) = match (p.to_i64(), d.to_i64()) {
        (Some(p), Some(d)) => {
            let (l, k) = nearest_over(&(p as i128), &(d as i128), &lcms, |x| x as i128);
            (l, BigInt::from(k))
        }
        _ => nearest_over(p, d, &lcms, BigInt::from),
    };
    let &(_, q1, q2) = lcms.iter().find(|w| w.0 == l).expect("L from list");
    let g = gcd(q1, q2);
    let (a1, a2) = split_fraction(&k, q1 / g, q2 / g)?;
    let out = DuoApprox::new(alpha, a1, q1, a2, q2, Method::Oracle);
    debug_assert_eq!(out.value(), Rational::new(k, l));
    Ok(out)
}

/// Best `k/(q1 q2)` over the two largest primes `q1 < q2` in `[⌈N/4⌉, N]`,
/// with `gcd(k, q1 q2) = 1` (integer values also admitted). The error is at
/// most `3/(q1 q2)`.
pub fn prime_grid_approx(alpha: &Rational, n: u64) -> Result<DuoApprox> {
    if n < 12 {
        return Err(Error::PreconditionViolated(format!("prime grid needs N >= 12, got {n}")));
    }
    let primes = sieve::primes_between(n.div_ceil(4), n)?;
    let [.., q1, q2] = primes[..] else {
        return Err(Error::RangeTooSmall(format!(
            "fewer than two primes in [{}, {n}]",
            n.div_ceil(4)
        )));
    };
    let l = q1 * q2;
    let lb = BigInt::from(l);
    let t = alpha.numer() * &lb;
    let d = alpha.denom();
    let k0 = t.div_floor(d);
    let mut best: Option<(BigInt, BigInt)> = None; // (residual, k)
    for off in -2i64..=3 {
        let k = &k0 + off;
        let kr = arith::reduce_big(&k, l);
        if kr != 0 && gcd(kr, l) != 1 {
            continue;
        }
        let res = (&t - &k * d).abs();
        if best.as_ref().map_or(true, |(r0, _)| res < *r0) {
            best = Some((res, k));
        }
    }
    let (_, k) = best.expect("one of three consecutive integers is admissible");
    let (a1, a2) = split_fraction(&k, q1, q2)?;
    let out = DuoApprox::new(alpha, a1, q1, a2, q2, Method::PrimeGrid);
    debug_assert!(out.error <= Rational::new(3, l));
    Ok(out)
}

/// The Dirichlet pair at level `N` plus `0/1`; error at most `1/(q1 N)`.
pub fn trivial_duo(alpha: &Rational, n: u64) -> Result<DuoApprox> {
    if n == 0 {
        return Err(Error::PreconditionViolated("N must be positive".into()));
    }
    let s = dirichlet_approx(alpha, n);
    let q1 = s.q.to_u64().expect("q <= N");
    Ok(DuoApprox::new(alpha, s.a, q1, BigInt::zero(), 1, Method::Trivial))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundCheck {
    pub min_error: Rational,
    pub bound: Rational,
    pub holds: bool,
    pub witness: DuoApprox,
}

/// For prime `N < p <= 2N` and `gcd(a, p) = 1`, the best two-rational error
/// for `a/p` is at least `1/(p N^2)`.
pub fn verify_lower_bound(a: &BigInt, p: u64, n: u64) -> Result<LowerBoundCheck> {
    if p <= n || p > 2 * n {
        return Err(Error::PreconditionViolated(format!("need N < p <= 2N, got p = {p}, N = {n}")));
    }
    if !sieve::is_prime(p) {
        return Err(Error::PreconditionViolated(format!("{p} is not prime")));
    }
    if arith::reduce_big(a, p) == 0 {
        return Err(Error::not_coprime(a, p, p));
    }
    let alpha = Rational::new(a.clone(), p);
    let witness = brute_best_duo(&alpha, n)?;
    let bound = Rational::new(BigInt::one(), BigInt::from(p) * BigInt::from(n) * BigInt::from(n));
    Ok(LowerBoundCheck {
        min_error: witness.error.clone(),
        holds: witness.error >= bound,
        bound,
        witness,
    })
}
