//! Approximation of a rational by a single fraction: continued-fraction
//! convergents, the Dirichlet pair, and an exhaustive best-fraction oracle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingleApprox {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub q: BigInt,
    /// Exact `|α - a/q|`.
    pub error: Rational,
}

impl SingleApprox {
    pub fn new(alpha: &Rational, a: BigInt, q: BigInt) -> Self {
        let error = (alpha - &Rational::new(a.clone(), q.clone())).abs();
        SingleApprox { a, q, error }
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.a.clone(), self.q.clone())
    }
}

/// Every convergent of `alpha`, ending with `alpha` itself.
pub fn convergents(alpha: &Rational) -> Vec<SingleApprox> {
    let mut num = alpha.numer().clone();
    let mut den = alpha.denom().clone();
    // p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    while !den.is_zero() {
        let (quot, rem) = num.div_mod_floor(&den);
        let p_next = &quot * &p + &p_prev;
        let q_next = &quot * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(SingleApprox::new(alpha, p.clone(), q.clone()));
        num = std::mem::replace(&mut den, rem);
    }
    out
}

/// The last convergent with denominator at most `n`; satisfies
/// `|α - a/q| <= 1/(q n)`.
pub fn dirichlet_approx(alpha: &Rational, n: u64) -> SingleApprox {
    assert!(n >= 1, "N must be positive");
    let bound = BigInt::from(n);
    let best = convergents(alpha)
        .into_iter()
        .take_while(|c| c.q <= bound)
        .last()
        .expect("the first convergent has q = 1");
    let limit = Rational::new(1, &best.q * &bound);
    assert!(
        best.error <= limit,
        "Dirichlet bound violated for {alpha} at N = {n}"
    );
    best
}

/// Exhaustive minimum of `|α - a/q|` over `1 <= q <= n`.
/// Ties go to the smaller `q`, then the smaller `a`.
pub fn best_single(alpha: &Rational, n: u64) -> SingleApprox {
    assert!(n >= 1, "N must be positive");
    let (p, d) = (alpha.numer(), alpha.denom());
    let mut best: Option<(BigInt, u64, BigInt)> = None; // (residual, q, a); error = residual/(d q)
    for q in 1..=n {
        let qb = BigInt::from(q);
        let (a, residual) = nearest_multiple(&(p * &qb), d);
        let better = match &best {
            None => true,
            Some((r0, q0, _)) => &residual * BigInt::from(*q0) < r0 * &qb,
        };
        if better {
            best = Some((residual, q, a));
        }
    }
    let (_, q, a) = best.expect("n >= 1");
    SingleApprox::new(alpha, a, BigInt::from(q))
}

/// The integer `k` nearest to `t/d` (halves round down) and `|t - k d|`.
pub(crate) fn nearest_multiple<T>(t: &T, d: &T) -> (T, T)
where
    T: Integer + Clone,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Sub<&'a T, Output = T>,
{
    let (k0, rem) = t.div_mod_floor(d);
    let up = d - &rem;
    if up < rem {
        (k0 + T::one(), up)
    } else {
        (k0, rem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn fracs(v: &[SingleApprox]) -> Vec<String> {
        v.iter().map(|c| format!("{}/{}", c.a, c.q)).collect()
    }

    #[test]
    fn convergent_examples() {
        assert_eq!(fracs(&convergents(&r("3/7"))), ["0/1", "1/2", "3/7"]);
        assert_eq!(fracs(&convergents(&r("1/2"))), ["0/1", "1/2"]);
        assert_eq!(fracs(&convergents(&r("22/7"))), ["3/1", "22/7"]);
        assert_eq!(fracs(&convergents(&r("-7/3"))), ["-3/1", "-2/1", "-7/3"]);
        assert_eq!(fracs(&convergents(&r("4"))), ["4/1"]);
        assert_eq!(fracs(&convergents(&r("5/7"))), ["0/1", "1/1", "2/3", "5/7"]);
    }

    #[test]
    fn dirichlet_examples() {
        let d = dirichlet_approx(&r("3/7"), 5);
        assert_eq!((d.a.clone(), d.q.clone()), (1.into(), 2.into()));
        assert_eq!(d.error, r("1/14"));
        assert!(dirichlet_approx(&r("1/2"), 5).error.is_zero());
        let d = dirichlet_approx(&r("314159265/100000000"), 10);
        assert_eq!(d.value(), r("22/7"));
        assert_eq!(dirichlet_approx(&r("5/7"), 3).value(), r("2/3"));
    }

    #[test]
    fn best_single_examples() {
        let b = best_single(&r("3/7"), 5);
        assert_eq!(b.value(), r("2/5"));
        assert_eq!(b.error, r("1/35"));
        assert!(best_single(&r("5/7"), 7).error.is_zero());
        assert_eq!(best_single(&r("318310/1000000"), 10).value(), r("1/3"));
        // halfway: 1/2 sits between 0/1 and 1/1 at q = 1; smaller a wins
        let b = best_single(&r("1/2"), 1);
        assert_eq!(b.a, BigInt::zero());
    }

    #[test]
    fn nearest() {
        assert_eq!(nearest_multiple(&77i64, &2), (38, 1));
        assert_eq!(nearest_multiple(&79i64, &2), (39, 1));
        assert_eq!(nearest_multiple(&-5i64, &3), (-2, 1));
        assert_eq!(nearest_multiple(&10i64, &5), (2, 0));
    }
}
