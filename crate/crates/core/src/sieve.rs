//! Prime enumeration: a cached base sieve plus a segmented sieve for ranges.

use std::sync::{Arc, LazyLock, RwLock};

use num_integer::Roots;

use crate::error::Result;
use crate::guard;

const SEGMENT: u64 = 1 << 16;

struct BaseCache {
    limit: u64,
    primes: Arc<Vec<u64>>,
}

static BASE: LazyLock<RwLock<BaseCache>> = LazyLock::new(|| {
    RwLock::new(BaseCache {
        limit: 1,
        primes: Arc::new(Vec::new()),
    })
});

fn eratosthenes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// All primes up to at least `limit` (the returned list may extend past it).
///
/// The list is computed once per process and only ever grows; readers see an
/// immutable snapshot.
pub fn base_primes(limit: u64) -> Arc<Vec<u64>> {
    {
        let cache = BASE.read().unwrap_or_else(|e| e.into_inner());
        if cache.limit >= limit {
            return Arc::clone(&cache.primes);
        }
    }
    let mut cache = BASE.write().unwrap_or_else(|e| e.into_inner());
    if cache.limit < limit {
        let target = limit.max(cache.limit.saturating_mul(2)).max(1 << 12);
        cache.primes = Arc::new(eratosthenes(target));
        cache.limit = target;
    }
    Arc::clone(&cache.primes)
}

/// Primes `p` with `lo <= p <= hi`, in increasing order.
pub fn primes_between(lo: u64, hi: u64) -> Result<Vec<u64>> {
    let lo = lo.max(2);
    if hi < lo {
        return Ok(Vec::new());
    }
    guard::check_work("prime range span", (hi - lo) as u128 + 1)?;
    let root = hi.sqrt();
    let small = root.max(1 << 12);
    let base = base_primes(small);
    if hi <= small {
        // fully covered by the cached list
        return Ok(base.iter().copied().filter(|&p| p >= lo && p <= hi).collect());
    }
    let mut out = Vec::new();
    let mut start = lo;
    loop {
        let end = start.saturating_add(SEGMENT - 1).min(hi);
        let mut composite = vec![false; (end - start + 1) as usize];
        for &p in base.iter().take_while(|&&p| p <= root) {
            let first = (start.div_ceil(p) * p).max(p * p);
            let mut m = first;
            while m <= end {
                composite[(m - start) as usize] = true;
                m += p;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| start + i as u64),
        );
        if end == hi {
            break;
        }
        start = end + 1;
    }
    Ok(out)
}

/// Primes in the real interval `[lo, hi]`, endpoints inclusive.
pub fn primes_in_range(lo: f64, hi: f64) -> Result<Vec<u64>> {
    if !(hi >= 0.0) || hi < lo {
        return Ok(Vec::new());
    }
    let lo = lo.max(0.0).ceil() as u64;
    let hi = hi.floor() as u64;
    primes_between(lo, hi)
}

/// Primes in `[N/2, N]`.
pub fn primes_in_upper_half(n: u64) -> Result<Vec<u64>> {
    primes_between(n.div_ceil(2), n)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let root = n.sqrt();
    if root <= 1 << 20 {
        let base = base_primes(root);
        return base.iter().take_while(|&&p| p <= root).all(|&p| n % p != 0);
    }
    crate::arith::factorize(n).factors() == [(n, 1)]
}
