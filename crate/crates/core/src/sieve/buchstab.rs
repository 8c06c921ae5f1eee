use serde::Serialize;

use crate::error::{precondition, Result};

use super::{
    enumerate_smooth_with, for_each_smooth_product, sieve_primes_with, SieveConfig, SmoothnessWindow, Strategy,
};

/// Desk-scale bound on `x` for the exact decomposition.
pub const BUCHSTAB_X_LIMIT: u64 = 1_000_000;

/// Exact three-way split of the window-smooth members of a set `A`.
///
/// Every window-smooth `a in A` is either `1`, a prime in `[y, z]`, or
/// `a = p * m` with `p = P^+(a)` and a cofactor `m > 1` whose primes lie in
/// `[y, p]`. The cofactor counts are collected per `p` by walking products
/// of primes up to `p`, independently of the ascending stream that produces
/// `total`.
#[derive(Debug, Clone, Serialize)]
pub struct BuchstabSplit {
    pub x: u64,
    pub window: SmoothnessWindow,
    /// `(p, #{m > 1 : m in A_p, primes of m in [y, p]})` for primes with a nonzero count.
    pub by_largest_prime: Vec<(u64, u64)>,
    /// Sum of `by_largest_prime`.
    pub composite: u64,
    /// Prime members in `[y, z]`.
    pub primes: u64,
    /// `1` if `1 in A`.
    pub unit: u64,
    /// Window-smooth members of `A`, counted directly.
    pub total: u64,
}

impl BuchstabSplit {
    pub fn residual(&self) -> i64 {
        (self.composite + self.primes + self.unit) as i64 - self.total as i64
    }
}

pub fn buchstab_decompose<F>(x: u64, window: SmoothnessWindow, membership: F) -> Result<BuchstabSplit>
where
    F: Fn(u64) -> bool,
{
    if x < 1 {
        return precondition("buchstab_decompose needs x >= 1");
    }
    if x > BUCHSTAB_X_LIMIT {
        return precondition(format!("buchstab_decompose is desk-scale: x = {x} > {BUCHSTAB_X_LIMIT}"));
    }
    let config = SieveConfig { strategy: Strategy::Segmented, ..Default::default() };
    let total = enumerate_smooth_with(x, window, false, &config)?.filter(|&n| membership(n)).count() as u64;
    let unit = membership(1) as u64;
    let mut split = BuchstabSplit { x, window, by_largest_prime: Vec::new(), composite: 0, primes: 0, unit, total };
    if window.is_empty() || window.y() > x {
        return Ok(split);
    }
    let table = sieve_primes_with(window.z().min(x), &config)?;
    let primes = table.range(window.y(), window.z());
    for (i, &p) in primes.iter().enumerate() {
        if membership(p) {
            split.primes += 1;
        }
        let cap = x / p;
        if cap < window.y() {
            continue;
        }
        let mut count = 0u64;
        for_each_smooth_product(cap, &primes[..=i], false, |m, _| {
            if membership(p * m) {
                count += 1;
            }
            true
        });
        if count > 0 {
            split.by_largest_prime.push((p, count));
            split.composite += count;
        }
    }
    Ok(split)
}
