//! Exponential sums `e(x) = exp(2πix)` over rational angles.
//!
//! Angles are reduced modulo 1 exactly (integer residues over an integer
//! denominator) and only then turned into floating-point values; sums use
//! Neumaier compensation and a fixed summation order.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{self, gcd, mul_mod};
use crate::error::{Error, Result};
use crate::guard;
use crate::rational::Rational;
use crate::sieve;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn sum(xs: impl IntoIterator<Item = f64>) -> f64 {
        let mut s = CompensatedSum::default();
        xs.into_iter().for_each(|x| s.add(x));
        s.value()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `e(num/den)` for a reduced residue `0 <= num < den`.
pub fn e_frac(num: u64, den: u64) -> Complex64 {
    debug_assert!(num < den);
    Complex64::from_polar(1.0, TAU * (num as f64 / den as f64))
}

/// `e(r/q)` for `r = 0..q`, one exponential per residue.
pub fn unit_roots(q: u64) -> Vec<Complex64> {
    (0..q).map(|r| e_frac(r, q)).collect()
}

/// A point of the unit interval, stored as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct UnitPoint {
    num: u64,
    den: u64,
}

impl UnitPoint {
    /// Reduces `x` modulo 1. The denominator must fit in 64 bits.
    pub fn new(x: &Rational) -> Result<Self> {
        let f = x.fract();
        let den = f
            .denom()
            .to_u64()
            .ok_or_else(|| Error::too_large("point denominator", f.denom(), u64::MAX))?;
        let num = f.numer().to_u64().expect("0 <= num < den");
        Ok(UnitPoint { num, den })
    }

    pub fn from_parts(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::PreconditionViolated("zero denominator".into()));
        }
        UnitPoint::new(&Rational::new(num, den))
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.num, self.den)
    }

    /// `‖x‖`, exactly.
    pub fn norm(&self) -> Rational {
        Rational::new(self.num.min(self.den - self.num), self.den)
    }

    /// `e(l x)`.
    pub fn e_mul(&self, l: u64) -> Complex64 {
        e_frac(mul_mod(l, self.num, self.den), self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EtReport {
    pub hypothesis_ok: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs > rhs`; guaranteed when the hypothesis holds.
    pub holds: bool,
}

/// `Σ_{l=1..L} |Σ_j e(l x_j)|` against `J/6`, together with the hypothesis
/// `‖x_j‖ >= 1/L` for all `j`.
pub fn et_inequality(points: &[UnitPoint], l_max: u64) -> Result<EtReport> {
    if points.is_empty() {
        return Err(Error::PreconditionViolated("no points".into()));
    }
    if l_max == 0 {
        return Err(Error::PreconditionViolated("L must be positive".into()));
    }
    guard::check_work("exponential sum terms", l_max as u128 * points.len() as u128)?;
    let hypothesis_ok = points
        .iter()
        .all(|p| p.num.min(p.den - p.num) as u128 * l_max as u128 >= p.den as u128);
    let mut lhs = CompensatedSum::default();
    for l in 1..=l_max {
        let mut inner = ComplexSum::default();
        for p in points {
            inner.add(p.e_mul(l));
        }
        lhs.add(inner.value().norm());
    }
    let lhs = lhs.value();
    let rhs = points.len() as f64 / 6.0;
    Ok(EtReport {
        hypothesis_ok,
        lhs,
        rhs,
        holds: lhs > rhs,
    })
}

/// `L = ⌊q N^{φ-2-ε}⌋ + 1`, the summation length used with the pair sums.
pub fn default_l(q: u64, n: u64, phi: f64, eps: f64) -> u64 {
    ((q as f64) * (n as f64).powf(phi - 2.0 - eps)).floor() as u64 + 1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpSumReport {
    pub s1: f64,
    pub s2: f64,
    pub l: u64,
    pub p_size: usize,
    /// `|P|^2 / 7`.
    pub threshold: f64,
    /// `s1 + s2 <= threshold`.
    pub passes: bool,
}

fn check_modulus(q: u64, a: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::PreconditionViolated("modulus must be positive".into()));
    }
    let g = gcd(a % q, q);
    if q > 1 && g != 1 {
        return Err(Error::not_coprime(a, q, g));
    }
    guard::check_work("root table", q as u128)
}

/// `Σ_l |Σ_{j} e(l·res_j/q)|` for `l = 1..=L`, with each `res_j` already
/// reduced modulo `q`.
fn l_sum(roots: &[Complex64], q: u64, residues: &[u64], l_max: u64) -> f64 {
    let mut total = CompensatedSum::default();
    for l in 1..=l_max {
        let lr = l % q;
        let mut inner = ComplexSum::default();
        for &r in residues {
            inner.add(roots[mul_mod(lr, r, q) as usize]);
        }
        total.add(inner.value().norm());
    }
    total.value()
}

/// The pair sum `S1 = Σ_l |Σ_{q1,q2∈P} e(l q1 q2 a/q)|` and the diagonal sum
/// `S2 = Σ_l |Σ_{q1∈P} e(l q1² a/q)|` over the primes `P` in `[N/2, N]`.
pub fn s_sums_thm6(q: u64, a: i128, n: u64, l_max: u64) -> Result<ExpSumReport> {
    let a = arith::reduce(a, q.max(1));
    check_modulus(q, a)?;
    let primes = sieve::primes_in_upper_half(n)?;
    let k = primes.len();
    guard::check_work("pair sum terms", l_max as u128 * (k * k) as u128)?;
    let roots = unit_roots(q);
    let res: Vec<u64> = primes.iter().map(|&p| p % q).collect();
    let pairs: Vec<u64> = res
        .iter()
        .flat_map(|&x| res.iter().map(move |&y| mul_mod(mul_mod(x, y, q), a, q)))
        .collect();
    let squares: Vec<u64> = res.iter().map(|&x| mul_mod(mul_mod(x, x, q), a, q)).collect();
    let s1 = l_sum(&roots, q, &pairs, l_max);
    let s2 = l_sum(&roots, q, &squares, l_max);
    let threshold = (k * k) as f64 / 7.0;
    Ok(ExpSumReport {
        s1,
        s2,
        l: l_max,
        p_size: k,
        threshold,
        passes: s1 + s2 <= threshold,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CauchySchwarzCheck {
    pub s2: f64,
    pub s2_squared: f64,
    /// `#{(q1, q2) ∈ P² : q1² ≡ q2² (mod q)}`.
    pub congruent_square_pairs: u64,
    /// `L q · congruent_square_pairs`.
    pub bound: f64,
}

/// The chain `S2² <= L Σ_{l<=q} |…|² = L q #{q1² ≡ q2²}` (valid for `L <= q`).
pub fn s2_cauchy_schwarz(q: u64, a: i128, n: u64, l_max: u64) -> Result<CauchySchwarzCheck> {
    let rep = s_sums_thm6(q, a, n, l_max)?;
    let primes = sieve::primes_in_upper_half(n)?;
    let sq: Vec<u64> = primes.iter().map(|&p| mul_mod(p % q, p % q, q)).collect();
    let pairs = sq
        .iter()
        .map(|x| sq.iter().filter(|&y| y == x).count() as u64)
        .sum::<u64>();
    Ok(CauchySchwarzCheck {
        s2: rep.s2,
        s2_squared: rep.s2 * rep.s2,
        congruent_square_pairs: pairs,
        bound: l_max as f64 * q as f64 * pairs as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParsevalCheck {
    /// `Σ_{l=1..q} |Σ_{p∈P} e(l p a/q)|²`.
    pub lhs: f64,
    /// `q · #{(p, p') ∈ P² : p ≡ p' (mod q)}`.
    pub rhs: f64,
}

pub fn parseval_check(q: u64, a: i128, primes: &[u64]) -> Result<ParsevalCheck> {
    let a = arith::reduce(a, q.max(1));
    check_modulus(q, a)?;
    guard::check_work("parseval terms", q as u128 * primes.len() as u128)?;
    let roots = unit_roots(q);
    let res: Vec<u64> = primes.iter().map(|&p| mul_mod(p % q, a, q)).collect();
    let mut lhs = CompensatedSum::default();
    for l in 1..=q {
        let mut inner = ComplexSum::default();
        for &r in &res {
            inner.add(roots[mul_mod(l % q, r, q) as usize]);
        }
        lhs.add(inner.value().norm_sqr());
    }
    let congruent = primes
        .iter()
        .map(|p| primes.iter().filter(|&p2| p2 % q == p % q).count() as u64)
        .sum::<u64>();
    Ok(ParsevalCheck {
        lhs: lhs.value(),
        rhs: q as f64 * congruent as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DrProfile {
    /// Nonzero `d_r` only.
    pub counts: BTreeMap<u64, u32>,
    pub max_d: u32,
    /// Smallest `r` attaining `max_d`.
    pub argmax: Option<u64>,
}

impl DrProfile {
    pub fn get(&self, r: u64) -> u32 {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    /// `histogram[d]` = number of `r` with `d_r = d`, for `d >= 1`.
    pub fn histogram(&self) -> BTreeMap<u32, u64> {
        let mut h = BTreeMap::new();
        for &d in self.counts.values() {
            *h.entry(d).or_insert(0) += 1;
        }
        h
    }
}

/// `d_r = #{(l, p) : 1 <= l <= L, p ∈ P, l p = r}`.
pub fn d_r_profile(l_max: u64, primes: &[u64]) -> Result<DrProfile> {
    if l_max == 0 {
        return Err(Error::PreconditionViolated("L must be positive".into()));
    }
    let mut ps: Vec<u64> = primes.to_vec();
    ps.sort_unstable();
    ps.dedup();
    guard::check_work("d_r terms", l_max as u128 * ps.len() as u128)?;
    let mut counts = BTreeMap::new();
    for &p in &ps {
        for l in 1..=l_max {
            *counts.entry(l * p).or_insert(0u32) += 1;
        }
    }
    let max_d = counts.values().copied().max().unwrap_or(0);
    let argmax = counts.iter().find(|(_, &d)| d == max_d).map(|(&r, _)| r);
    Ok(DrProfile { counts, max_d, argmax })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thm7Report {
    /// `(L N / q) Σ_{r=1..q} |Σ_{N/2 <= m <= N} e(r m / q)|`.
    pub t_exact: f64,
    /// `L N d(q) ln q`, a trend line only.
    pub cap: f64,
}

pub fn s1_bound_thm7(q: u64, n: u64, l_max: u64) -> Result<Thm7Report> {
    if q == 0 {
        return Err(Error::PreconditionViolated("modulus must be positive".into()));
    }
    let lo = n.div_ceil(2);
    let width = if n >= lo { n - lo + 1 } else { 0 };
    guard::check_work("thm7 terms", q as u128 * width as u128)?;
    let roots = unit_roots(q);
    let mut total = CompensatedSum::default();
    for r in 1..=q {
        let rr = r % q;
        let mut inner = ComplexSum::default();
        for m in lo..=n {
            inner.add(roots[mul_mod(rr, m % q, q) as usize]);
        }
        total.add(inner.value().norm());
    }
    let scale = l_max as f64 * n as f64 / q as f64;
    let d = arith::arithmetic_functions(q).d as f64;
    Ok(Thm7Report {
        t_exact: scale * total.value(),
        cap: l_max as f64 * n as f64 * d * (q as f64).ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: u64, d: u64) -> UnitPoint {
        UnitPoint::from_parts(n, d).unwrap()
    }

    /// Unreduced angles straight through `exp`, as an independent route.
    fn direct(terms: impl Iterator<Item = f64>) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for x in terms {
            re += (TAU * x).cos();
            im += (TAU * x).sin();
        }
        (re * re + im * im).sqrt()
    }

    #[test]
    fn unit_point_norm() {
        let p = UnitPoint::new(&"-1/4".parse().unwrap()).unwrap();
        assert_eq!(p.value(), "3/4".parse().unwrap());
        assert_eq!(p.norm(), "1/4".parse().unwrap());
        assert_eq!(pt(0, 5).norm(), Rational::zero());
    }

    #[test]
    fn et_examples() {
        let r = et_inequality(&[pt(1, 2)], 2).unwrap();
        assert!(r.hypothesis_ok);
        assert!((r.lhs - 2.0).abs() < 1e-12);
        assert!((r.rhs - 1.0 / 6.0).abs() < 1e-15);
        assert!(r.holds);
        let r = et_inequality(&[pt(1, 4), pt(3, 4)], 4).unwrap();
        assert!(r.hypothesis_ok);
        assert!((r.lhs - 4.0).abs() < 1e-12);
        assert!((r.rhs - 2.0 / 6.0).abs() < 1e-15);
        let r = et_inequality(&[pt(0, 1)], 3).unwrap();
        assert!(!r.hypothesis_ok);
        // boundary: ‖1/3‖ = 1/3 >= 1/3
        assert!(et_inequality(&[pt(1, 3)], 3).unwrap().hypothesis_ok);
        assert!(!et_inequality(&[pt(1, 4)], 3).unwrap().hypothesis_ok);
        assert!(et_inequality(&[], 3).is_err());
    }

    #[test]
    fn s_sum_examples() {
        let r = s_sums_thm6(7, 1, 6, 1).unwrap();
        let s2 = direct([2.0 / 7.0, 4.0 / 7.0].into_iter());
        let s1 = direct([2.0 / 7.0, 1.0 / 7.0, 1.0 / 7.0, 4.0 / 7.0].into_iter());
        assert!((r.s2 - s2).abs() < 1e-12);
        assert!((r.s1 - s1).abs() < 1e-12);
        assert!((r.s2 - 1.2470).abs() < 1e-4);
        assert!((r.s1 - 2.108).abs() < 1e-3);
        assert_eq!(r.p_size, 2);
        assert!((r.threshold - 4.0 / 7.0).abs() < 1e-15);
        assert!(!r.passes);
        let r = s_sums_thm6(11, 3, 1, 5).unwrap();
        assert_eq!((r.s1, r.s2, r.p_size), (0.0, 0.0, 0));
        assert!(matches!(s_sums_thm6(6, 2, 10, 1), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn s_sums_against_unreduced_angles() {
        for (q, a, n, l) in [(31u64, 3i128, 20u64, 7u64), (97, 10, 40, 12), (60, 7, 30, 9)] {
            let r = s_sums_thm6(q, a, n, l).unwrap();
            let ps = sieve::primes_in_upper_half(n).unwrap();
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            for ll in 1..=l {
                let terms = ps.iter().flat_map(|&x| {
                    ps.iter().map(move |&y| (ll * x * y * a as u64) as f64 / q as f64)
                });
                s1 += direct(terms);
                s2 += direct(ps.iter().map(|&x| (ll * x * x * a as u64) as f64 / q as f64));
            }
            assert!((r.s1 - s1).abs() < 1e-9, "{q} {a} {n} {l}");
            assert!((r.s2 - s2).abs() < 1e-9);
        }
    }

    #[test]
    fn dr_examples() {
        let d = d_r_profile(15, &[3, 5]).unwrap();
        assert_eq!(d.get(15), 2);
        assert_eq!(d.get(9), 1);
        assert_eq!(d.get(7), 0);
        assert_eq!(d.max_d, 2);
        assert_eq!(d.argmax, Some(15));
        // r = 15, 30, 45
        assert_eq!(d.histogram()[&2], 3);
    }

    #[test]
    fn thm7_examples() {
        let t = s1_bound_thm7(7, 6, 1).unwrap();
        // r = 7 is the full-period term |4|
        let mut want = 4.0;
        for r in 1..7u64 {
            want += direct((3..=6u64).map(|m| (r * m) as f64 / 7.0));
        }
        assert!((t.t_exact - 6.0 / 7.0 * want).abs() < 1e-12);
        assert!(t.t_exact >= 6.0 / 7.0 * 4.0);
        assert_eq!(s1_bound_thm7(7, 6, 0).unwrap().t_exact, 0.0);
        assert!((t.cap - 12.0 * 7f64.ln()).abs() < 1e-12);
        assert!((t.cap - 23.35).abs() < 0.01);
    }

    #[test]
    fn parseval_small() {
        let ps = sieve::primes_between(2, 60).unwrap();
        for q in [1u64, 2, 7, 12, 30, 61] {
            let c = parseval_check(q, 1, &ps).unwrap();
            assert!((c.lhs - c.rhs).abs() <= 1e-6 * c.rhs.max(1.0), "q={q} {c:?}");
        }
    }

    #[test]
    fn default_l_formula() {
        assert_eq!(default_l(1000, 10, 1.25, 0.05), (1000.0 * 10f64.powf(-0.8)).floor() as u64 + 1);
        assert_eq!(default_l(5, 100, 1.0, 0.0), 1);
    }

    #[test]
    fn compensated() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(CompensatedSum::sum(v), 2.0);
    }
}
