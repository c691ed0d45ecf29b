//! Modular inverses, Bezout splitting of fractions and the classical
//! arithmetic functions.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sieve;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// `a mod q` in `[0, q)` for a signed input.
pub fn reduce(a: i128, q: u64) -> u64 {
    a.rem_euclid(q as i128) as u64
}

pub fn reduce_big(a: &BigInt, q: u64) -> u64 {
    a.mod_floor(&BigInt::from(q))
        .to_u64()
        .expect("residue below a u64 modulus")
}

/// The inverse of `a` modulo `q`, in `[1, q-1]`.
pub fn mod_inverse(a: i128, q: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::PreconditionViolated(format!(
            "modulus must be at least 2, got {q}"
        )));
    }
    let a_red = reduce(a, q);
    let (mut old_r, mut r) = (a_red as i128, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return Err(Error::not_coprime(a, q, old_r));
    }
    Ok(reduce(old_s, q))
}

pub fn mod_inverse_big(a: &BigInt, q: u64) -> Result<u64> {
    if q >= 2 && gcd(reduce_big(a, q), q) != 1 {
        return Err(Error::not_coprime(a, q, gcd(reduce_big(a, q), q)));
    }
    mod_inverse(reduce_big(a, q) as i128, q)
}

/// Writes `b / (q1 q2)` as `a1/q1 + a2/q2`, i.e. `a1*q2 + a2*q1 = b`, with
/// `0 <= a1 < q1`.
pub fn split_fraction(b: &BigInt, q1: u64, q2: u64) -> Result<(BigInt, BigInt)> {
    if q1 == 0 || q2 == 0 {
        return Err(Error::PreconditionViolated(
            "denominators must be positive".into(),
        ));
    }
    let g = gcd(q1, q2);
    if g != 1 {
        return Err(Error::not_coprime(q1, q2, g));
    }
    let a1 = if q1 == 1 {
        0
    } else {
        let inv = mod_inverse(q2 as i128, q1)?;
        mul_mod(reduce_big(b, q1), inv, q1)
    };
    let a1 = BigInt::from(a1);
    let rest = b - &a1 * BigInt::from(q2);
    let (a2, rem) = rest.div_rem(&BigInt::from(q1));
    debug_assert!(rem.is_zero());
    Ok((a1, a2))
}

/// Prime factorization, primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorMap(Vec<(u64, u32)>);

impl FactorMap {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn product(&self) -> u128 {
        self.0
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    /// All divisors, sorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.0 {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Squarefree divisors paired with their Möbius value.
    pub fn squarefree_divisors(&self) -> Vec<(u64, i8)> {
        let mut out = vec![(1u64, 1i8)];
        for p in self.primes() {
            let len = out.len();
            for i in 0..len {
                let (d, mu) = out[i];
                out.push((d * p, -mu));
            }
        }
        out
    }
}

const CACHED_TRIAL_LIMIT: u64 = 10_000_000;

/// Trial division by cached primes, continuing with a mod-30 wheel past
/// `10^7`. Fast for `n <= 10^12`.
pub fn factorize(n: u64) -> FactorMap {
    assert!(n >= 1, "factorize(0)");
    let mut m = n;
    let mut out = Vec::new();
    let mut take = |m: &mut u64, p: u64| {
        if *m % p == 0 {
            let mut e = 0;
            while *m % p == 0 {
                *m /= p;
                e += 1;
            }
            out.push((p, e));
        }
    };
    let root = m.sqrt();
    let base = sieve::base_primes(root.min(CACHED_TRIAL_LIMIT));
    for &p in base.iter() {
        if p * p > m {
            break;
        }
        take(&mut m, p);
    }
    if m > 1 && root > CACHED_TRIAL_LIMIT {
        const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
        // 10^7 + 1 ≡ 11 (mod 30), the first wheel residue at or above it
        let mut p = CACHED_TRIAL_LIMIT + 1;
        let mut i = 1;
        while p.saturating_mul(p) <= m {
            take(&mut m, p);
            p += STEPS[i];
            i = (i + 1) % 8;
        }
    }
    if m > 1 {
        out.push((m, 1));
    }
    FactorMap(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArithmeticFunctions {
    pub n: u64,
    pub phi: u64,
    pub mobius: i8,
    pub d: u64,
    pub omega: u32,
    pub factors: FactorMap,
}

pub fn arithmetic_functions(n: u64) -> ArithmeticFunctions {
    let factors = factorize(n);
    let mut phi = 1u64;
    let mut d = 1u64;
    let mut squarefree = true;
    for &(p, e) in factors.factors() {
        phi *= (p - 1) * p.pow(e - 1);
        d *= e as u64 + 1;
        squarefree &= e == 1;
    }
    let omega = factors.factors().len() as u32;
    let mobius = match (squarefree, omega % 2) {
        (false, _) => 0,
        (true, 0) => 1,
        (true, _) => -1,
    };
    ArithmeticFunctions {
        n,
        phi,
        mobius,
        d,
        omega,
        factors,
    }
}

pub fn phi(n: u64) -> u64 {
    arithmetic_functions(n).phi
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoprimeCount {
    pub count: u64,
    pub main_term: Rational,
    pub error_bound: u64,
}

/// `#{1 <= n <= B : gcd(n, q) = 1}` by Möbius inclusion–exclusion, with the
/// main term `B φ(q)/q` and the bound `2 d(q)` on the difference.
///
/// The difference is `-Σ_{d|q} μ(d) {B/d}`, so it is actually below
/// `2^ω(q) <= d(q)`; the reported bound keeps the factor 2 headroom.
pub fn coprime_count(q: u64, b: &Rational) -> Result<CoprimeCount> {
    if q == 0 {
        return Err(Error::PreconditionViolated("q must be positive".into()));
    }
    if *b < Rational::one() {
        return Err(Error::PreconditionViolated(format!("B = {b} < 1")));
    }
    let af = arithmetic_functions(q);
    let floor_b = b.floor();
    let mut count = BigInt::zero();
    for (d, mu) in af.factors.squarefree_divisors() {
        let term = &floor_b / BigInt::from(d);
        if mu > 0 {
            count += term;
        } else {
            count -= term;
        }
    }
    debug_assert!(!count.is_negative());
    Ok(CoprimeCount {
        count: count.to_u64().expect("count fits u64"),
        main_term: b * &Rational::new(af.phi, q),
        error_bound: 2 * af.d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(mod_inverse(1, 9).unwrap(), 1);
        assert!(matches!(mod_inverse(6, 9), Err(Error::NotCoprime { .. })));
        assert_eq!(mod_inverse(-3, 7).unwrap(), 2);
        assert!(mod_inverse(1, 1).is_err());
        let q = 1_000_000_000_039u64; // prime > 10^12
        let x = mod_inverse(123_456_789_012, q).unwrap();
        assert_eq!(mul_mod(123_456_789_012, x, q), 1);
    }

    #[test]
    fn split_examples() {
        let s = |b: i64, q1, q2| {
            let (a1, a2) = split_fraction(&BigInt::from(b), q1, q2).unwrap();
            (a1.to_i64().unwrap(), a2.to_i64().unwrap())
        };
        assert_eq!(s(7, 3, 5), (2, -1));
        assert_eq!(s(0, 4, 9), (0, 0));
        assert_eq!(s(7, 2, 5), (1, 1));
        assert_eq!(s(5, 1, 7), (0, 5));
        assert_eq!(s(-3, 7, 1), (4, -1));
        assert!(matches!(
            split_fraction(&BigInt::from(1), 4, 6),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn arithmetic_function_examples() {
        let f = arithmetic_functions(12);
        assert_eq!((f.phi, f.mobius, f.d, f.omega), (4, 0, 6, 2));
        assert_eq!(f.factors.factors(), &[(2, 2), (3, 1)]);
        let f = arithmetic_functions(1);
        assert_eq!((f.phi, f.mobius, f.d, f.omega), (1, 1, 1, 0));
        let f = arithmetic_functions(13);
        assert_eq!((f.phi, f.mobius, f.d, f.omega), (12, -1, 2, 1));
        let f = arithmetic_functions(30);
        assert_eq!((f.phi, f.mobius, f.d), (8, -1, 8));
        assert_eq!(factorize(360).divisors().len(), 24);
    }

    #[test]
    fn factorize_large() {
        let n = 999_999_000_001u64; // 10^12 - 10^6 + 1
        let f = factorize(n);
        assert_eq!(f.product(), n as u128);
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factorize(big).factors(), &[(998_244_353, 1), (1_000_000_007, 1)]);
    }

    #[test]
    fn coprime_count_examples() {
        let c = coprime_count(6, &Rational::from(10i64)).unwrap();
        assert_eq!(c.count, 3);
        assert_eq!(c.main_term, Rational::new(10, 3));
        assert_eq!(c.error_bound, 8);
        assert_eq!(coprime_count(1, &"7.5".parse().unwrap()).unwrap().count, 7);
        assert_eq!(coprime_count(12, &Rational::from(12i64)).unwrap().count, 4);
        assert!(coprime_count(5, &Rational::new(1, 2)).is_err());
    }
}
