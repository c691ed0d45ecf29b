//! The congruence `x y ≡ c (mod q)` restricted to boxes: enumeration, the
//! smallest solution, lifting to `x y = c + k q`, residue coverage and the
//! good/bad interval classification.

use serde::Serialize;

use crate::arith::{self, gcd, mod_inverse, mul_mod};
use crate::error::{Error, Result};
use crate::guard;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolaInstance {
    q: u64,
    c: u64,
}

impl HyperbolaInstance {
    /// Reduces `c` modulo `q`; fails unless `q >= 2` and `gcd(c, q) = 1`.
    pub fn new(q: u64, c: i128) -> Result<Self> {
        if q < 2 {
            return Err(Error::PreconditionViolated(format!(
                "modulus must be at least 2, got {q}"
            )));
        }
        let c_red = arith::reduce(c, q);
        let g = gcd(c_red, q);
        if g != 1 {
            return Err(Error::not_coprime(c, q, g));
        }
        Ok(HyperbolaInstance { q, c: c_red })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn is_solution(&self, s: HyperbolaSolution) -> bool {
        mul_mod(s.x % self.q, s.y % self.q, self.q) == self.c
    }
}

/// Inclusive integer box `[x_lo, x_hi] × [y_lo, y_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Box {
    pub x_lo: u64,
    pub x_hi: u64,
    pub y_lo: u64,
    pub y_hi: u64,
}

impl Box {
    pub fn new(x_lo: u64, x_hi: u64, y_lo: u64, y_hi: u64) -> Result<Self> {
        if x_lo == 0 || y_lo == 0 {
            return Err(Error::PreconditionViolated("box bounds must be positive".into()));
        }
        if x_lo > x_hi || y_lo > y_hi {
            return Err(Error::PreconditionViolated(format!(
                "empty box [{x_lo},{x_hi}]x[{y_lo},{y_hi}]"
            )));
        }
        Ok(Box { x_lo, x_hi, y_lo, y_hi })
    }

    pub fn square(lo: u64, hi: u64) -> Result<Self> {
        Box::new(lo, hi, lo, hi)
    }

    pub fn contains(&self, s: HyperbolaSolution) -> bool {
        (self.x_lo..=self.x_hi).contains(&s.x) && (self.y_lo..=self.y_hi).contains(&s.y)
    }

    fn check_spans(&self) -> Result<()> {
        guard::check_span("box x span", self.x_hi - self.x_lo + 1)?;
        guard::check_span("box y span", self.y_hi - self.y_lo + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HyperbolaSolution {
    pub x: u64,
    pub y: u64,
}

impl HyperbolaSolution {
    pub fn height(&self) -> u64 {
        self.x.max(self.y)
    }
}

/// Lazily walks the solutions in a box, sorted by `(x, y)`.
pub struct BoxSolutions {
    inst: HyperbolaInstance,
    bx: Box,
    coprime: bool,
    x: u64,
    next_y: Option<u64>,
    done: bool,
}

impl BoxSolutions {
    fn first_y(&self, x: u64) -> Option<u64> {
        let q = self.inst.q;
        if gcd(x % q, q) != 1 {
            return None;
        }
        let inv = mod_inverse((x % q) as i128, q).ok()?;
        let target = mul_mod(self.inst.c, inv, q);
        let offset = (target + q - self.bx.y_lo % q) % q;
        let y = self.bx.y_lo.checked_add(offset)?;
        (y <= self.bx.y_hi).then_some(y)
    }
}

impl Iterator for BoxSolutions {
    type Item = HyperbolaSolution;

    fn next(&mut self) -> Option<HyperbolaSolution> {
        while !self.done {
            if let Some(y) = self.next_y {
                self.next_y = y.checked_add(self.inst.q).filter(|&n| n <= self.bx.y_hi);
                if !self.coprime || gcd(self.x, y) == 1 {
                    return Some(HyperbolaSolution { x: self.x, y });
                }
                continue;
            }
            if self.x >= self.bx.x_hi {
                self.done = true;
                break;
            }
            self.x += 1;
            self.next_y = self.first_y(self.x);
        }
        None
    }
}

/// Iterator form of [`solutions_in_box`].
pub fn box_solutions(inst: HyperbolaInstance, bx: Box, require_coprime_xy: bool) -> Result<BoxSolutions> {
    bx.check_spans()?;
    let mut it = BoxSolutions {
        inst,
        bx,
        coprime: require_coprime_xy,
        x: bx.x_lo,
        next_y: None,
        done: false,
    };
    it.next_y = it.first_y(bx.x_lo);
    Ok(it)
}

/// Every solution in the box, sorted by `(x, y)`.
pub fn solutions_in_box(
    inst: HyperbolaInstance,
    bx: Box,
    require_coprime_xy: bool,
) -> Result<Vec<HyperbolaSolution>> {
    let per_x = (bx.y_hi - bx.y_lo) / inst.q + 1;
    guard::check_work("box enumeration", (bx.x_hi - bx.x_lo + 1) as u128 * per_x as u128)?;
    Ok(box_solutions(inst, bx, require_coprime_xy)?.collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MinMaxSolution {
    pub sol: HyperbolaSolution,
    pub max: u64,
    /// `ln max(x, y) / ln q`.
    pub exponent: f64,
}

impl MinMaxSolution {
    fn new(q: u64, sol: HyperbolaSolution) -> Self {
        MinMaxSolution {
            sol,
            max: sol.height(),
            exponent: (sol.height() as f64).ln() / (q as f64).ln(),
        }
    }
}

/// The solution in `[1, q-1]^2` minimizing `max(x, y)`, ties to the smaller `x`.
pub fn smallest_max_solution(inst: HyperbolaInstance) -> Result<MinMaxSolution> {
    let q = inst.q;
    guard::check_span("modulus", q)?;
    let mut best = HyperbolaSolution { x: 1, y: inst.c };
    for x in 2..q {
        if x >= best.height() {
            break;
        }
        if gcd(x, q) != 1 {
            continue;
        }
        let y = mul_mod(inst.c, mod_inverse(x as i128, q)?, q);
        if y.max(x) < best.height() {
            best = HyperbolaSolution { x, y };
        }
    }
    Ok(MinMaxSolution::new(q, best))
}

/// [`smallest_max_solution`] for every residue `c` at once: walks pairs in
/// order of `(max(x, y), x)` until each unit has been hit. Index `c` holds
/// the result for `c`; non-units hold `None`.
pub fn smallest_max_table(q: u64) -> Result<Vec<Option<MinMaxSolution>>> {
    if q < 2 {
        return Err(Error::PreconditionViolated(format!("modulus must be at least 2, got {q}")));
    }
    guard::check_span("modulus", q)?;
    let units = arith::phi(q);
    let mut table: Vec<Option<MinMaxSolution>> = vec![None; q as usize];
    let mut found = 0u64;
    let record = |x: u64, y: u64, table: &mut Vec<Option<MinMaxSolution>>| {
        let c = mul_mod(x, y, q) as usize;
        if table[c].is_none() && gcd(c as u64, q) == 1 {
            table[c] = Some(MinMaxSolution::new(q, HyperbolaSolution { x, y }));
            return 1;
        }
        0
    };
    for m in 1..q {
        for x in 1..m {
            found += record(x, m, &mut table);
        }
        for y in 1..=m {
            found += record(m, y, &mut table);
        }
        if found == units {
            break;
        }
    }
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LiftHit {
    pub k: u64,
    pub sol: HyperbolaSolution,
}

/// Divisors `x` of `n` with `(x, n/x)` inside the box, increasing.
fn lift_divisors(n: u128, bx: &Box) -> Result<Vec<u64>> {
    let y_hi = bx.y_hi as u128;
    let xa = (bx.x_lo as u128).max(n.div_ceil(y_hi));
    let xb = (bx.x_hi as u128).min(n / bx.y_lo as u128);
    if xa > xb {
        return Ok(Vec::new());
    }
    let (xa, xb) = (xa as u64, xb as u64);
    let width = xb - xa + 1;
    if width > 64 && n <= 1u128 << 47 {
        let divs = arith::factorize(n as u64).divisors();
        return Ok(divs.into_iter().filter(|d| (xa..=xb).contains(d)).collect());
    }
    guard::check_span("divisor scan", width)?;
    Ok((xa..=xb).filter(|&x| n % x as u128 == 0).collect())
}

fn lifts(inst: HyperbolaInstance, bx: &Box, k_max: u64) -> impl Iterator<Item = (u64, u128)> {
    let (c, q) = (inst.c as u128, inst.q as u128);
    let top = bx.x_hi as u128 * bx.y_hi as u128;
    (0..=k_max)
        .map(move |k| (k, c + k as u128 * q))
        .take_while(move |&(_, n)| n <= top)
}

/// Scans `c + k q` for `k = 0..=k_max`, factoring each lift and returning
/// the first divisor pair inside the box (increasing `k`, then `x`).
pub fn lift_and_factor_search(inst: HyperbolaInstance, bx: Box, k_max: u64) -> Result<Option<LiftHit>> {
    for (k, n) in lifts(inst, &bx, k_max) {
        if let Some(&x) = lift_divisors(n, &bx)?.first() {
            let y = (n / x as u128) as u64;
            return Ok(Some(LiftHit { k, sol: HyperbolaSolution { x, y } }));
        }
    }
    Ok(None)
}

/// Every divisor-pair hit over the lifts `k = 0..=k_max`, in increasing
/// `k` then `x`, optionally keeping only `gcd(x, y) = 1`.
pub fn lift_solutions(
    inst: HyperbolaInstance,
    bx: Box,
    k_max: u64,
    require_coprime_xy: bool,
) -> Result<Vec<LiftHit>> {
    let mut out = Vec::new();
    for (k, n) in lifts(inst, &bx, k_max) {
        for x in lift_divisors(n, &bx)? {
            let y = (n / x as u128) as u64;
            if !require_coprime_xy || gcd(x, y) == 1 {
                out.push(LiftHit { k, sol: HyperbolaSolution { x, y } });
            }
        }
    }
    Ok(out)
}

/// The lift hit minimizing `max(x, y)` (ties to smaller `x`). Lifts past the
/// square of the current best cannot improve it and are skipped.
pub fn lift_min_max(inst: HyperbolaInstance, bx: Box, k_max: u64) -> Result<Option<LiftHit>> {
    let mut best: Option<LiftHit> = None;
    for (k, n) in lifts(inst, &bx, k_max) {
        if let Some(b) = best {
            let m = b.sol.height() as u128;
            if n > m * m {
                break;
            }
        }
        for x in lift_divisors(n, &bx)? {
            let sol = HyperbolaSolution { x, y: (n / x as u128) as u64 };
            let better = match best {
                None => true,
                Some(b) => (sol.height(), sol.x) < (b.sol.height(), b.sol.x),
            };
            if better {
                best = Some(LiftHit { k, sol });
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coverage {
    pub covered: u64,
    pub fraction: f64,
}

/// Number of distinct residues `x y mod m` over the two ranges.
pub fn coverage_count(
    m: u64,
    x_range: (u64, u64),
    y_range: (u64, u64),
    require_coprime_xy: bool,
) -> Result<Coverage> {
    if m == 0 {
        return Err(Error::PreconditionViolated("modulus must be positive".into()));
    }
    let (x_lo, x_hi) = x_range;
    let (y_lo, mut y_hi) = y_range;
    if x_lo > x_hi || y_lo > y_hi {
        return Ok(Coverage { covered: 0, fraction: 0.0 });
    }
    // without the gcd filter only y mod m matters
    if !require_coprime_xy && y_hi - y_lo >= m {
        y_hi = y_lo + m - 1;
    }
    guard::check_work("residue table", m as u128)?;
    guard::check_work(
        "coverage enumeration",
        (x_hi - x_lo + 1) as u128 * (y_hi - y_lo + 1) as u128,
    )?;
    let mut seen = vec![false; m as usize];
    let mut covered = 0u64;
    for x in x_lo..=x_hi {
        let xr = x % m;
        for y in y_lo..=y_hi {
            if require_coprime_xy && gcd(x, y) != 1 {
                continue;
            }
            let r = mul_mod(xr, y % m, m) as usize;
            if !seen[r] {
                seen[r] = true;
                covered += 1;
            }
        }
    }
    Ok(Coverage {
        covered,
        fraction: covered as f64 / m as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Classification {
    Good { q1: u64, q2: u64 },
    Bad,
}

impl Classification {
    pub fn is_good(&self) -> bool {
        matches!(self, Classification::Good { .. })
    }
}

/// `I_{a,q}` is good when `q1 q2 ≡ a⁻¹ (mod q)` for some coprime
/// `q1, q2 ∈ [⌈N/4⌉, N]`; the witness is the first such pair by `(q1, q2)`.
pub fn classify_interval(a: i128, q: u64, n: u64) -> Result<Classification> {
    let a_inv = mod_inverse(a, q)?;
    let lo = n.div_ceil(4).max(1);
    if lo > n {
        return Ok(Classification::Bad);
    }
    let inst = HyperbolaInstance::new(q, a_inv as i128)?;
    let hit = box_solutions(inst, Box::square(lo, n)?, true)?.next();
    Ok(match hit {
        Some(s) => Classification::Good { q1: s.x, q2: s.y },
        None => Classification::Bad,
    })
}
