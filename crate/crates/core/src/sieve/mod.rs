//! Smooth-number sieving.
//!
//! A [`SmoothnessWindow`] `[y, z]` selects the primes an integer may contain.
//! [`enumerate_smooth`] streams every window-smooth `n <= x` in ascending
//! order (always starting with `n = 1`), and [`psi_recursive`] recomputes the
//! count through the largest-prime-factor recursion as an independent check.

mod buchstab;
mod primes;
mod recursive;
mod smooth;
mod spf;

pub use buchstab::{buchstab_decompose, BuchstabSplit, BUCHSTAB_X_LIMIT};
pub use primes::{sieve_primes, sieve_primes_with, PrimeTable};
pub use recursive::psi_recursive;
pub use smooth::{
    enumerate_smooth, enumerate_smooth_with, for_each_smooth_product, psi_count, psi_count_with, SmoothStream, Strategy,
};
pub use spf::{largest_prime_factor, spf_segment, FactorTable};

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

/// Inclusive prime window `[y, z]`.
///
/// `z < y` is legal and selects no primes; only `n = 1` is smooth then.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SmoothnessWindow {
    y: u64,
    z: u64,
}

impl SmoothnessWindow {
    pub fn new(y: u64, z: u64) -> Result<Self> {
        if y < 2 {
            return precondition(format!("window lower bound y = {y} must be at least 2"));
        }
        Ok(SmoothnessWindow { y, z })
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn is_empty(&self) -> bool {
        self.z < self.y
    }

    pub fn admits(&self, p: u64) -> bool {
        self.y <= p && p <= self.z
    }

    /// Same lower bound, upper bound lowered to `top`.
    pub fn with_top(&self, top: u64) -> Self {
        SmoothnessWindow { y: self.y, z: top }
    }
}

/// Resource limits shared by the sieving routines.
#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    /// Largest `x` accepted by the enumeration routines.
    pub x_limit: u64,
    /// Memory budget in bytes for prime tables and buffered streams.
    pub memory_budget: usize,
    /// Segment length for the segmented smallest-prime-factor sieve.
    pub segment_len: usize,
    pub strategy: Strategy,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { x_limit: 100_000_000, memory_budget: 512 << 20, segment_len: 1 << 22, strategy: Strategy::Auto }
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Integer `k`-th root (floor).
pub fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    let pow = |b: u64| (b as u128).checked_pow(k).unwrap_or(u128::MAX);
    while r > 0 && pow(r) > n as u128 {
        r -= 1;
    }
    while pow(r + 1) <= n as u128 {
        r += 1;
    }
    r
}

/// Möbius-style squarefree test by trial division. Used by tests and small inputs.
pub fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}
