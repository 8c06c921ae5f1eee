use std::collections::HashMap;

use crate::error::{Error, Result};

use super::{sieve_primes_with, SieveConfig, SmoothnessWindow};

/// `Psi(x; y, z)` through the largest-prime-factor recursion
///
/// ```text
/// Psi(x; y, z) = 1 + sum_{y <= p <= min(z, x)} Psi(x / p; y, p)
/// ```
///
/// The squarefree variant recurses on the primes strictly below `p`.
/// Primes `p > x / y` contribute exactly `1` (their cofactor bound is below
/// `y`) and are counted by binary search instead of recursion. Memoized on
/// `(floor(x), index of the window top)`.
pub fn psi_recursive(x: u64, window: SmoothnessWindow, squarefree: bool) -> Result<u64> {
    let config = SieveConfig::default();
    if x < 1 {
        return Err(Error::Precondition("psi_recursive needs x >= 1".into()));
    }
    if x > config.x_limit {
        return Err(Error::Resource(format!("x = {x} exceeds the configured limit {}", config.x_limit)));
    }
    if window.is_empty() || window.y() > x {
        return Ok(1);
    }
    let table = sieve_primes_with(window.z().min(x), &config)?;
    let primes = table.range(window.y(), window.z());
    let mut ctx = Recursion { primes, y: window.y(), squarefree, memo: HashMap::new(), depth: 0 };
    ctx.psi(x, primes.len())
}

const MAX_DEPTH: usize = 128;

struct Recursion<'a> {
    primes: &'a [u64],
    y: u64,
    squarefree: bool,
    memo: HashMap<(u64, usize), u64>,
    depth: usize,
}

impl Recursion<'_> {
    /// Count of `n <= x` built from `primes[..top]`.
    fn psi(&mut self, x: u64, top: usize) -> Result<u64> {
        if x < self.y || top == 0 {
            return Ok(1);
        }
        if let Some(&v) = self.memo.get(&(x, top)) {
            return Ok(v);
        }
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::Resource("recursion depth guard tripped".into()));
        }
        let avail = &self.primes[..top];
        let upto_x = avail.partition_point(|&p| p <= x);
        // p <= x / y has a nontrivial cofactor range
        let deep = avail[..upto_x].partition_point(|&p| p <= x / self.y);
        let mut total = 1 + (upto_x - deep) as u64;
        for (i, &p) in avail[..deep].iter().enumerate() {
            let next_top = if self.squarefree { i } else { i + 1 };
            total += self.psi(x / p, next_top)?;
        }
        self.depth -= 1;
        self.memo.insert((x, top), total);
        Ok(total)
    }
}
