use std::fmt;
use std::str::FromStr;

use crate::error::{precondition, Error, Result};

/// Coefficient sequences `a_m` with `|a_m| <= tau(m)`.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientClass {
    /// `a_m = 1`.
    Unit,
    /// `a_m = mu(m)`.
    Moebius,
    /// `a_m = tau(m)`, the extreme case of the bound.
    DivisorBounded,
    /// `a_m = 1` on primes, `0` elsewhere.
    PrimeIndicator,
    /// Explicit values indexed by `m` (index 0 ignored); missing entries are `0`.
    Custom(Vec<f64>),
}

impl CoefficientClass {
    /// Values for `m = 0..=limit` (entry 0 is `0`).
    ///
    /// Fails if a custom table breaks `|a_m| <= tau(m)`.
    pub fn table(&self, limit: usize) -> Result<Vec<f64>> {
        let (mu, tau) = mu_tau_table(limit);
        let mut out = vec![0.0; limit + 1];
        for m in 1..=limit {
            out[m] = match self {
                CoefficientClass::Unit => 1.0,
                CoefficientClass::Moebius => mu[m] as f64,
                CoefficientClass::DivisorBounded => tau[m] as f64,
                CoefficientClass::PrimeIndicator => (tau[m] == 2) as u8 as f64,
                CoefficientClass::Custom(v) => {
                    let a = v.get(m).copied().unwrap_or(0.0);
                    if !a.is_finite() || a.abs() > tau[m] as f64 {
                        return precondition(format!("custom coefficient a_{m} = {a} exceeds tau({m}) = {}", tau[m]));
                    }
                    a
                }
            };
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CoefficientClass::Custom(v) if v.iter().all(|&a| a == 0.0))
    }
}

/// Linear sieve for `mu` and `tau` on `0..=limit`.
fn mu_tau_table(limit: usize) -> (Vec<i8>, Vec<u32>) {
    let mut mu = vec![0i8; limit + 1];
    let mut tau = vec![0u32; limit + 1];
    // exponent of the smallest prime in m
    let mut e_small = vec![0u32; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    if limit >= 1 {
        mu[1] = 1;
        tau[1] = 1;
    }
    for i in 2..=limit {
        if tau[i] == 0 {
            primes.push(i);
            mu[i] = -1;
            tau[i] = 2;
            e_small[i] = 1;
        }
        for &p in &primes {
            let m = i * p;
            if m > limit {
                break;
            }
            if i % p == 0 {
                mu[m] = 0;
                e_small[m] = e_small[i] + 1;
                tau[m] = tau[i] / (e_small[i] + 1) * (e_small[m] + 1);
                break;
            }
            mu[m] = -mu[i];
            e_small[m] = 1;
            tau[m] = tau[i] * 2;
        }
    }
    (mu, tau)
}

/// Number of divisors of `n`, from its factorization by trial division.
pub fn divisor_tau(mut n: u64) -> u64 {
    assert!(n >= 1, "divisor_tau needs n >= 1");
    let mut count = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        count *= e + 1;
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        count *= 2;
    }
    count
}

impl FromStr for CoefficientClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" | "1" => Ok(CoefficientClass::Unit),
            "moebius" | "mobius" | "mu" => Ok(CoefficientClass::Moebius),
            "tau" | "divisor" | "divisor_bounded" => Ok(CoefficientClass::DivisorBounded),
            "prime" | "prime_indicator" => Ok(CoefficientClass::PrimeIndicator),
            other => Err(Error::Config(format!("unknown coefficient class {other:?}"))),
        }
    }
}

impl fmt::Display for CoefficientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientClass::Unit => "unit",
            CoefficientClass::Moebius => "moebius",
            CoefficientClass::DivisorBounded => "divisor_bounded",
            CoefficientClass::PrimeIndicator => "prime_indicator",
            CoefficientClass::Custom(_) => "custom",
        })
    }
}
