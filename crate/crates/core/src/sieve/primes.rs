use crate::error::{Error, Result};

use super::SieveConfig;

/// Every prime up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Index of the first prime `>= v`.
    pub fn lower_index(&self, v: u64) -> usize {
        self.primes.partition_point(|&p| p < v)
    }

    /// Index one past the last prime `<= v`.
    pub fn upper_index(&self, v: u64) -> usize {
        self.primes.partition_point(|&p| p <= v)
    }

    /// Primes in `[lo, hi]`.
    pub fn range(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.lower_index(lo);
        let b = self.upper_index(hi).max(a);
        &self.primes[a..b]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    sieve_primes_with(limit, &SieveConfig::default())
}

/// Odd-only sieve of Eratosthenes.
pub fn sieve_primes_with(limit: u64, config: &SieveConfig) -> Result<PrimeTable> {
    // one byte per odd number plus roughly limit / ln(limit) table entries
    let est = limit / 2 + 8 * (limit / 10 + 16);
    if est > config.memory_budget as u64 {
        return Err(Error::Resource(format!(
            "prime table up to {limit} needs ~{est} bytes, budget is {}",
            config.memory_budget
        )));
    }
    if limit < 2 {
        return Ok(PrimeTable { limit, primes: Vec::new() });
    }
    // composite[i] marks 2i + 1
    let half = (limit as usize - 1) / 2 + 1;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_pi(limit));
    primes.push(2);
    primes.extend(composite.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| 2 * i as u64 + 1));
    Ok(PrimeTable { limit, primes })
}

fn estimate_pi(limit: u64) -> usize {
    if limit < 20 {
        return 8;
    }
    let l = limit as f64;
    (1.26 * l / l.ln()) as usize
}
