use crate::error::{precondition, Result};

use super::{isqrt, PrimeTable};

/// Smallest prime factor of every `n` in `[lo, hi)`.
#[derive(Debug, Clone)]
pub struct FactorTable {
    lo: u64,
    hi: u64,
    spf: Vec<u32>,
}

pub fn spf_segment(lo: u64, hi: u64, primes: &PrimeTable) -> Result<FactorTable> {
    if lo < 2 || lo >= hi {
        return precondition(format!("spf segment needs 2 <= lo < hi, got [{lo}, {hi})"));
    }
    if hi - 1 > u32::MAX as u64 {
        return precondition("spf segment entries must fit in 32 bits");
    }
    let root = isqrt(hi - 1);
    if primes.limit() < root {
        return precondition(format!("prime table limit {} is below sqrt of segment end ({root})", primes.limit()));
    }
    let len = (hi - lo) as usize;
    let mut spf = vec![0u32; len];
    for &p in primes.primes() {
        if p > root {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m < hi {
            let slot = &mut spf[(m - lo) as usize];
            if *slot == 0 {
                *slot = p as u32;
            }
            m += p;
        }
    }
    for (i, s) in spf.iter_mut().enumerate() {
        if *s == 0 {
            *s = (lo + i as u64) as u32;
        }
    }
    Ok(FactorTable { lo, hi, spf })
}

impl FactorTable {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn spf(&self, n: u64) -> u64 {
        assert!(self.lo <= n && n < self.hi, "{n} outside [{}, {})", self.lo, self.hi);
        self.spf[(n - self.lo) as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.spf(n) == n
    }

    /// Prime factorization `(p, e)` ascending. Requires `lo <= 2` so that
    /// every cofactor stays inside the table.
    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        debug_assert!(self.lo <= 2);
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf(n);
            n /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `P^+(n)` by repeated division; `None` for `n = 1`. Requires `lo <= 2`.
    pub fn largest_prime_factor(&self, mut n: u64) -> Option<u64> {
        let mut last = None;
        while n > 1 {
            let p = self.spf(n);
            last = Some(p);
            n /= p;
        }
        last
    }
}

/// `P^+(n)`, or `None` for `n = 1`.
///
/// Trial division by the table primes; continues with odd trial divisors if
/// the table does not reach `sqrt(n)`.
pub fn largest_prime_factor(mut n: u64, primes: &PrimeTable) -> Option<u64> {
    if n <= 1 {
        return None;
    }
    let mut largest = 1;
    for &p in primes.primes() {
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            largest = p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
    }
    let mut d = primes.limit().max(2) + 1;
    if d.is_multiple_of(2) {
        d += 1;
    }
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            largest = d;
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 2;
    }
    Some(if n > 1 { n.max(largest) } else { largest })
}
