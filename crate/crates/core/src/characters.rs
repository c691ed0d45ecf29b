//! Dirichlet characters modulo `q`.
//!
//! The unit group is split along the prime-power factors of `q`: each odd
//! `p^e` is cyclic on a primitive root, `4` is generated by `-1`, and `2^e`
//! (`e >= 3`) by `-1` and `5`. A character is an exponent vector over these
//! generators and its values are kept as exact phases in `Z/λ`, `λ` the group
//! exponent; complex numbers appear only when summing.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{self, gcd, lcm, mul_mod};
use crate::error::{Error, Result};
use crate::guard;
use crate::harmonic::{unit_roots, ComplexSum};

const NO_LOG: u32 = u32::MAX;

/// One prime-power factor of the unit group with its discrete-log table.
#[derive(Clone, Debug)]
struct Component {
    modulus: u64,
    /// Orders of the local generators (zero, one or two of them).
    orders: Vec<u64>,
    /// `logs[n mod modulus]`, `NO_LOG` for non-units.
    logs: Vec<[u32; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    /// The generator as a residue modulo `q` (≡ 1 on the other factors).
    pub residue: u64,
    pub order: u64,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    q: u64,
    phi: u64,
    exponent: u64,
    generators: Vec<Generator>,
    /// For each generator: (component index, slot within the component).
    slots: Vec<(usize, usize)>,
    components: Vec<Component>,
    roots: Vec<Complex64>,
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Smallest primitive root modulo an odd prime power.
fn primitive_root(p: u64, pe: u64) -> u64 {
    let order = pe / p * (p - 1);
    let order_primes: Vec<u64> = arith::factorize(order).primes().collect();
    (2..pe)
        .find(|&g| gcd(g, p) == 1 && order_primes.iter().all(|&r| pow_mod(g, order / r, pe) != 1))
        .expect("odd prime powers have primitive roots")
}

fn cyclic_component(p: u64, pe: u64) -> Component {
    let order = pe / p * (p - 1);
    let g = primitive_root(p, pe);
    let mut logs = vec![[NO_LOG; 2]; pe as usize];
    let mut x = 1u64;
    for k in 0..order {
        logs[x as usize][0] = k as u32;
        x = mul_mod(x, g, pe);
    }
    Component {
        modulus: pe,
        orders: vec![order],
        logs,
    }
}

fn two_power_component(e: u32) -> (Component, Vec<u64>) {
    let m = 1u64 << e;
    let mut logs = vec![[NO_LOG; 2]; m as usize];
    match e {
        1 => {
            logs[1] = [0, 0];
            (Component { modulus: 2, orders: vec![], logs }, vec![])
        }
        2 => {
            logs[1] = [0, 0];
            logs[3] = [1, 0];
            (Component { modulus: 4, orders: vec![2], logs }, vec![3])
        }
        _ => {
            let half = m >> 2;
            for eps in 0..2u32 {
                let mut x = if eps == 0 { 1 } else { m - 1 };
                for k in 0..half {
                    logs[x as usize] = [eps, k as u32];
                    x = mul_mod(x, 5, m);
                }
            }
            (Component { modulus: m, orders: vec![2, half], logs }, vec![m - 1, 5])
        }
    }
}

impl CharacterTable {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::PreconditionViolated("modulus must be positive".into()));
        }
        guard::check_limit("character modulus", q, guard::current().char_q)?;
        let af = arith::arithmetic_functions(q);
        let mut components = Vec::new();
        let mut generators = Vec::new();
        let mut slots = Vec::new();
        for &(p, e) in af.factors.factors() {
            let pe = p.pow(e);
            let (comp, local_gens) = if p == 2 {
                two_power_component(e)
            } else {
                let c = cyclic_component(p, pe);
                let g = primitive_root(p, pe);
                (c, vec![g])
            };
            // lift local generators to residues mod q by CRT
            let rest = q / pe;
            let rest_inv = if pe == 1 || rest == 1 {
                1
            } else {
                arith::mod_inverse(rest as i128, pe)?
            };
            for (slot, (&g, &order)) in local_gens.iter().zip(&comp.orders).enumerate() {
                let t = mul_mod((g + pe - 1) % pe, rest_inv, pe);
                let residue = (1 + t as u128 * rest as u128) as u64 % q;
                generators.push(Generator { residue, order });
                slots.push((components.len(), slot));
            }
            components.push(comp);
        }
        let exponent = generators.iter().fold(1, |acc, g| lcm(acc, g.order));
        let phi = generators.iter().map(|g| g.order).product::<u64>();
        debug_assert_eq!(phi, af.phi);
        Ok(CharacterTable {
            q,
            phi,
            exponent,
            generators,
            slots,
            components,
            roots: unit_roots(exponent),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Number of characters, `φ(q)`.
    pub fn len(&self) -> usize {
        self.phi as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Exponent `λ` of the unit group; all values are `λ`-th roots of unity.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Exponent vector of character `index` (mixed radix over the generator
    /// orders, first generator least significant). Index 0 is principal.
    pub fn exponents(&self, index: usize) -> Vec<u64> {
        assert!(index < self.len(), "character index out of range");
        let mut rest = index as u64;
        self.generators
            .iter()
            .map(|g| {
                let k = rest % g.order;
                rest /= g.order;
                k
            })
            .collect()
    }

    pub fn index_of(&self, exponents: &[u64]) -> usize {
        let mut idx = 0u64;
        let mut radix = 1u64;
        for (k, g) in exponents.iter().zip(&self.generators) {
            idx += (k % g.order) * radix;
            radix *= g.order;
        }
        idx as usize
    }

    /// Discrete logs of `n` w.r.t. the generators, `None` if `gcd(n, q) > 1`.
    pub fn logs(&self, n: u64) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(self.generators.len());
        for comp in &self.components {
            let entry = comp.logs[(n % comp.modulus) as usize];
            if entry[0] == NO_LOG {
                return None;
            }
            out.extend(entry.iter().take(comp.orders.len()).map(|&v| v as u64));
        }
        debug_assert_eq!(out.len(), self.slots.len());
        Some(out)
    }

    /// `χ(n) = e(phase/λ)` as an exact phase, `None` when `χ(n) = 0`.
    pub fn phase(&self, index: usize, n: u64) -> Option<u64> {
        let ks = self.exponents(index);
        self.phase_with(&ks, n)
    }

    fn phase_with(&self, ks: &[u64], n: u64) -> Option<u64> {
        let logs = self.logs(n)?;
        let lam = self.exponent;
        let mut acc = 0u64;
        for ((k, lg), g) in ks.iter().zip(&logs).zip(&self.generators) {
            let step = lam / g.order;
            acc = (acc + mul_mod(mul_mod(*k, *lg, g.order), step, lam)) % lam;
        }
        Some(acc)
    }

    pub fn value(&self, index: usize, n: u64) -> Complex64 {
        self.phase(index, n)
            .map_or(Complex64::new(0.0, 0.0), |p| self.roots[p as usize])
    }

    /// Phases of character `index` at `n = 0..q`.
    pub fn phases(&self, index: usize) -> Vec<Option<u64>> {
        let ks = self.exponents(index);
        (0..self.q).map(|n| self.phase_with(&ks, n)).collect()
    }

    pub fn root(&self, phase: u64) -> Complex64 {
        self.roots[(phase % self.exponent) as usize]
    }

    /// Order of character `index` in the dual group.
    pub fn order(&self, index: usize) -> u64 {
        self.exponents(index)
            .iter()
            .zip(&self.generators)
            .fold(1, |acc, (&k, g)| lcm(acc, g.order / gcd(k, g.order)))
    }

    pub fn conjugate_index(&self, index: usize) -> usize {
        let ks: Vec<u64> = self
            .exponents(index)
            .iter()
            .zip(&self.generators)
            .map(|(&k, g)| (g.order - k) % g.order)
            .collect();
        self.index_of(&ks)
    }
}

pub fn character_table(q: u64) -> Result<CharacterTable> {
    CharacterTable::new(q)
}

/// `max_{χ, χ'} |Σ_{n mod q} χ(n) conj(χ'(n)) - φ(q) [χ = χ']|`.
pub fn orthogonality_check(q: u64) -> Result<f64> {
    guard::check_limit("orthogonality modulus", q, guard::current().ortho_q)?;
    let table = CharacterTable::new(q)?;
    let lam = table.exponent;
    let phases: Vec<Vec<Option<u64>>> = (0..table.len()).map(|i| table.phases(i)).collect();
    let mut worst = 0.0f64;
    for (i, pi) in phases.iter().enumerate() {
        for (j, pj) in phases.iter().enumerate() {
            let mut s = ComplexSum::default();
            for (a, b) in pi.iter().zip(pj) {
                if let (Some(a), Some(b)) = (a, b) {
                    s.add(table.roots[((a + lam - b) % lam) as usize]);
                }
            }
            let expect = if i == j { table.phi as f64 } else { 0.0 };
            worst = worst.max((s.value() - Complex64::new(expect, 0.0)).norm());
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountComparison {
    /// `#{(q1, q2, b) : q1 ≠ q2 ∈ P, 1 <= b <= B, a q1 q2 ≡ b (mod q)}`.
    pub direct: u64,
    /// The same count through `φ(q)⁻¹ Σ_χ Σ Σ χ(a q1 q2) conj(χ(b))`.
    pub via_characters: f64,
    /// Principal-character part `|P|(|P|-1)|B_q| / φ(q)`.
    pub main_term: f64,
    pub discrepancy: f64,
}

pub fn solution_count_via_characters(q: u64, a: i128, primes: &[u64], b: u64) -> Result<CountComparison> {
    if q == 0 || b == 0 || b > q {
        return Err(Error::PreconditionViolated(format!("need 1 <= B <= q, got B = {b}, q = {q}")));
    }
    let a = arith::reduce(a, q);
    if q > 1 && gcd(a, q) != 1 {
        return Err(Error::not_coprime(a, q, gcd(a, q)));
    }
    if let Some(&p) = primes.iter().find(|&&p| gcd(p, q) != 1) {
        return Err(Error::not_coprime(p, q, gcd(p, q)));
    }
    let table = CharacterTable::new(q)?;
    guard::check_work(
        "character count terms",
        table.phi as u128 * (primes.len() * primes.len() + b as usize) as u128,
    )?;

    let mut direct = 0u64;
    for (i, &p1) in primes.iter().enumerate() {
        for (j, &p2) in primes.iter().enumerate() {
            if i == j {
                continue;
            }
            let r = mul_mod(mul_mod(a, p1 % q, q), p2 % q, q);
            let rep = if r == 0 { q } else { r };
            if rep <= b {
                direct += 1;
            }
        }
    }

    let mut total = ComplexSum::default();
    for idx in 0..table.len() {
        let ks = table.exponents(idx);
        let mut pair_sum = ComplexSum::default();
        for (i, &p1) in primes.iter().enumerate() {
            for (j, &p2) in primes.iter().enumerate() {
                if i != j {
                    let n = mul_mod(mul_mod(a, p1 % q, q), p2 % q, q);
                    if let Some(ph) = table.phase_with(&ks, n) {
                        pair_sum.add(table.roots[ph as usize]);
                    }
                }
            }
        }
        let mut b_sum = ComplexSum::default();
        for n in 1..=b {
            if let Some(ph) = table.phase_with(&ks, n) {
                b_sum.add(table.roots[ph as usize]);
            }
        }
        total.add(pair_sum.value() * b_sum.value().conj());
    }
    let via = total.value().re / table.phi as f64;
    let bq = arith::coprime_count(q, &crate::rational::Rational::from(b))?.count;
    let k = primes.len() as f64;
    Ok(CountComparison {
        direct,
        via_characters: via,
        main_term: k * (k - 1.0).max(0.0) * bq as f64 / table.phi as f64,
        discrepancy: (via - direct as f64).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CharSumReport {
    /// `max_{1<=M<=q} |Σ_{n<=M} χ(n)|`.
    pub max_partial: f64,
    pub argmax_m: u64,
    /// `√q ln q`.
    pub pv_bound: f64,
    /// `√q`.
    pub glh_shape: f64,
    /// `max_M |Σ_{n<=M} χ(n)| / √M`, for inspection only.
    pub glh_ratio: f64,
    pub pv_holds: bool,
}

pub fn char_sum_max(table: &CharacterTable, index: usize) -> Result<CharSumReport> {
    if index >= table.len() {
        return Err(Error::PreconditionViolated(format!(
            "character index {index} out of range (φ(q) = {})",
            table.len()
        )));
    }
    if index == 0 {
        return Err(Error::PrincipalCharacter(index));
    }
    let q = table.q;
    let ks = table.exponents(index);
    let mut s = ComplexSum::default();
    let (mut best, mut arg, mut ratio) = (0.0f64, 1u64, 0.0f64);
    for m in 1..=q {
        if let Some(ph) = table.phase_with(&ks, m) {
            s.add(table.roots[ph as usize]);
        }
        let v = s.value().norm();
        if v > best + 1e-12 {
            best = v;
            arg = m;
        }
        ratio = ratio.max(v / (m as f64).sqrt());
    }
    let pv_bound = (q as f64).sqrt() * (q as f64).ln();
    Ok(CharSumReport {
        max_partial: best,
        argmax_m: arg,
        pv_bound,
        glh_shape: (q as f64).sqrt(),
        glh_ratio: ratio,
        pv_holds: best <= pv_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < TOL
    }

    #[test]
    fn table_examples() {
        let t = character_table(5).unwrap();
        assert_eq!(t.len(), 4);
        assert!((0..4).any(|i| close(t.value(i, 2), Complex64::i())));
        let t = character_table(2).unwrap();
        assert_eq!(t.len(), 1);
        assert!(close(t.value(0, 1), Complex64::new(1.0, 0.0)));
        assert!(close(t.value(0, 2), Complex64::new(0.0, 0.0)));
        let t = character_table(8).unwrap();
        assert_eq!(t.len(), 4);
        for i in 0..4 {
            for n in 0..8 {
                let v = t.value(i, n);
                assert!(v.im.abs() < TOL);
                assert!([-1.0, 0.0, 1.0].iter().any(|&w| (v.re - w).abs() < TOL));
            }
        }
        assert_eq!(character_table(1).unwrap().len(), 1);
    }

    #[test]
    fn generators_have_stated_orders() {
        for q in 2..300u64 {
            let t = character_table(q).unwrap();
            assert_eq!(t.len() as u64, arith::phi(q));
            for g in t.generators() {
                assert_eq!(gcd(g.residue, q), 1);
                let ord = (1..=g.order).find(|&k| pow_mod(g.residue, k, q) == 1 % q).unwrap();
                assert_eq!(ord, g.order, "q={q} g={g:?}");
            }
            // logs reconstruct every unit
            for n in 1..q {
                if let Some(ls) = t.logs(n) {
                    let back = ls
                        .iter()
                        .zip(t.generators())
                        .fold(1 % q, |acc, (&k, g)| mul_mod(acc, pow_mod(g.residue, k, q), q));
                    assert_eq!(back, n % q, "q={q} n={n}");
                } else {
                    assert_ne!(gcd(n, q), 1);
                }
            }
        }
    }

    #[test]
    fn legendre_symbol_is_the_quadratic_character() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            let t = character_table(p).unwrap();
            let idx = (1..t.len()).find(|&i| t.order(i) == 2).unwrap();
            for n in 1..p {
                let euler = pow_mod(n, (p - 1) / 2, p);
                let want = if euler == 1 { 1.0 } else { -1.0 };
                assert!((t.value(idx, n).re - want).abs() < TOL);
            }
        }
    }

    #[test]
    fn orthogonality_examples() {
        assert!(orthogonality_check(5).unwrap() <= TOL * 4.0);
        assert_eq!(orthogonality_check(2).unwrap(), 0.0);
        assert!(orthogonality_check(12).unwrap() <= TOL * 4.0);
        let t = character_table(5).unwrap();
        let s: Complex64 = (0..4).map(|i| t.value(i, 2)).sum();
        assert!(s.norm() < TOL);
    }

    #[test]
    fn count_examples() {
        let c = solution_count_via_characters(5, 1, &[2, 3], 2).unwrap();
        assert_eq!(c.direct, 2);
        assert!(c.discrepancy < 1e-9);
        let c = solution_count_via_characters(5, 2, &[2, 3], 2).unwrap();
        assert_eq!(c.direct, 2);
        assert!(c.discrepancy < 1e-9);
        let c = solution_count_via_characters(5, 1, &[2], 5).unwrap();
        assert_eq!(c.direct, 0);
        assert!(c.via_characters.abs() < 1e-9);
        assert!(matches!(
            solution_count_via_characters(6, 1, &[2, 5], 3),
            Err(Error::NotCoprime { .. })
        ));
        assert!(matches!(
            solution_count_via_characters(6, 3, &[5, 7], 3),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn char_sum_examples() {
        let t = character_table(5).unwrap();
        let leg = (1..4).find(|&i| t.order(i) == 2).unwrap();
        let r = char_sum_max(&t, leg).unwrap();
        assert!((r.max_partial - 1.0).abs() < TOL);
        assert!((r.pv_bound - 5f64.sqrt() * 5f64.ln()).abs() < 1e-12);
        assert!((r.pv_bound - 3.60).abs() < 0.01);
        assert!(r.pv_holds);
        for q in [3u64, 4] {
            let t = character_table(q).unwrap();
            assert!((char_sum_max(&t, 1).unwrap().max_partial - 1.0).abs() < TOL);
        }
        assert!(matches!(char_sum_max(&t, 0), Err(Error::PrincipalCharacter(0))));
        assert!(char_sum_max(&t, 4).is_err());
    }

    #[test]
    fn multiplicative() {
        for q in (2..=500u64).step_by(7) {
            let t = character_table(q).unwrap();
            let lam = t.exponent();
            for i in (0..t.len()).step_by(3) {
                let ph = t.phases(i);
                for m in 1..q {
                    for n in (1..q).step_by(5) {
                        let mn = mul_mod(m, n, q) as usize;
                        match (ph[m as usize], ph[n as usize]) {
                            (Some(a), Some(b)) => assert_eq!(ph[mn], Some((a + b) % lam)),
                            _ => assert_eq!(ph[mn], None),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn principal_partial_sums_count_units() {
        for q in [1u64, 2, 9, 30, 97, 210] {
            let t = character_table(q).unwrap();
            let mut s = 0u64;
            for b in 1..=q {
                if t.phase(0, b) == Some(0) {
                    s += 1;
                }
                let want = arith::coprime_count(q, &crate::rational::Rational::from(b)).unwrap().count;
                assert_eq!(s, want, "q={q} b={b}");
            }
        }
    }

    #[test]
    fn conjugates_and_orders() {
        let t = character_table(63).unwrap();
        for i in 0..t.len() {
            let c = t.conjugate_index(i);
            for n in 0..63 {
                assert!(close(t.value(c, n), t.value(i, n).conj()));
            }
            assert_eq!(t.index_of(&t.exponents(i)), i);
        }
    }
}
