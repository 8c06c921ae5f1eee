use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{precondition, Error, Result};

use super::fixed::fixed_point_surd;
use super::QuadraticSurd;

pub const DEFAULT_MAX_TERMS: usize = 100_000;

/// Eventually periodic expansion `[a0; preperiod, (period)*]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a0: i128,
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

impl ContinuedFraction {
    /// `a_j`, `j >= 0`.
    pub fn term(&self, j: usize) -> i128 {
        if j == 0 {
            return self.a0;
        }
        let k = j - 1;
        if k < self.preperiod.len() {
            self.preperiod[k] as i128
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()] as i128
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = i128> + '_ {
        (0..).map(|j| self.term(j))
    }
}

/// Continued fraction of a quadratic surd by the PQa iteration.
///
/// The period is found when a complete quotient `(P, Q)` repeats.
pub fn cf_expand(surd: &QuadraticSurd, max_terms: usize) -> Result<ContinuedFraction> {
    let mut seen: HashMap<(i128, i128), usize> = HashMap::new();
    let mut quotients: Vec<i128> = Vec::new();
    let mut state = *surd;
    for j in 0..=max_terms {
        if let Some(&i) = seen.get(&(state.p(), state.q())) {
            let a0 = quotients[0];
            let tail = |v: &[i128]| v.iter().map(|&a| a as u64).collect::<Vec<_>>();
            return Ok(if i == 0 {
                // purely periodic: rotate a0 to the end of the period
                let mut period = tail(&quotients[1..j]);
                period.push(a0 as u64);
                ContinuedFraction { a0, preperiod: Vec::new(), period }
            } else {
                ContinuedFraction { a0, preperiod: tail(&quotients[1..i]), period: tail(&quotients[i..j]) }
            });
        }
        seen.insert((state.p(), state.q()), j);
        let (a, next) = state.step();
        quotients.push(a);
        state = next;
    }
    Err(Error::PeriodNotFound(max_terms))
}

/// `max a_j` over `j >= 1`; the integer part is excluded.
pub fn max_partial_quotient(cf: &ContinuedFraction) -> u64 {
    cf.preperiod.iter().chain(cf.period.iter()).copied().max().unwrap_or(0)
}

/// Convergent `p_s / q_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub s: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn q_u64(&self) -> Option<u64> {
        u64::try_from(&self.q).ok()
    }

    /// Certifies `|alpha - p/q| < 1/q^2`, refining the precision of `alpha`
    /// until the fixed-point interval decides the comparison.
    pub fn approximates(&self, alpha: &QuadraticSurd) -> bool {
        let qabs = self.q.abs();
        let mut bits = 2 * qabs.bits() as u32 + 64;
        loop {
            let a = fixed_point_surd(alpha, bits);
            let scale = BigInt::one() << bits;
            // |alpha q - p| in units of 2^-bits, +- q * err
            let centre = (a.mantissa() * &qabs - &self.p * &scale * qabs.signum()).abs();
            let slack = &qabs * BigInt::from(a.err_ulp());
            if (&centre + &slack) * &qabs < scale {
                return true;
            }
            if (&centre - &slack) * &qabs >= scale {
                return false;
            }
            bits *= 2;
        }
    }
}

/// First `count` convergents by `p_s = a_s p_{s-1} + p_{s-2}`, `q_s = a_s q_{s-1} + q_{s-2}`.
pub fn convergents(cf: &ContinuedFraction, count: usize) -> Vec<Convergent> {
    ConvergentIter::new(cf).take(count).collect()
}

struct ConvergentIter<'a> {
    cf: &'a ContinuedFraction,
    s: usize,
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl<'a> ConvergentIter<'a> {
    fn new(cf: &'a ContinuedFraction) -> Self {
        // (x_{s-2}, x_{s-1}) seeded with p_{-2} = 0, p_{-1} = 1, q_{-2} = 1, q_{-1} = 0
        ConvergentIter { cf, s: 0, p: (BigInt::zero(), BigInt::one()), q: (BigInt::one(), BigInt::zero()) }
    }
}

impl Iterator for ConvergentIter<'_> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let a = BigInt::from(self.cf.term(self.s));
        let p = &a * &self.p.1 + &self.p.0;
        let q = &a * &self.q.1 + &self.q.0;
        self.p = (std::mem::take(&mut self.p.1), p.clone());
        self.q = (std::mem::take(&mut self.q.1), q.clone());
        let c = Convergent { s: self.s, p, q };
        self.s += 1;
        Some(c)
    }
}

/// The least `s` with `q_s >= x^{2/3}`, compared exactly as `q_s^3 >= x^2`.
pub fn select_denominator(x: u64, cf: &ContinuedFraction) -> Result<Convergent> {
    if x < 2 {
        return precondition("select_denominator needs x >= 2");
    }
    let x2 = BigInt::from(x).pow(2);
    Ok(ConvergentIter::new(cf).find(|c| c.q.pow(3) >= x2).expect("denominators grow without bound"))
}

/// `floor(q^{3/2})`, via the integer square root of `q^3`.
pub fn x_from_q(q: u64) -> Result<u64> {
    if q < 1 {
        return precondition("x_from_q needs q >= 1");
    }
    let cube = BigUint::from(q).pow(3);
    u64::try_from(cube.sqrt()).map_err(|_| Error::Resource(format!("q^(3/2) overflows for q = {q}")))
}
