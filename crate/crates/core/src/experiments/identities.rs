use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::diophantine::{Chi, PhaseClassifier};
use crate::error::{precondition, Error, Result};
use crate::expsums::divisor_tau;
use crate::sieve::{buchstab_decompose, enumerate_smooth, sieve_primes, spf_segment, FactorTable, SmoothnessWindow};

use super::config::{ExperimentConfig, XPoint};
use super::report::{Cell, Tabular};

/// Largest `x` for the role-reversal check.
pub const ROLE_REVERSAL_X_LIMIT: u64 = 1_000_000;
/// Largest `x` for the sieve-lemma comparisons.
pub const SIEVE_LEMMA_X_LIMIT: u64 = 10_000_000;

/// Which set plays `A` in a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetChoice {
    /// Every integer up to `x`.
    All,
    /// `n` with `||alpha n + beta|| < delta`.
    Solutions,
}

impl fmt::Display for SetChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetChoice::All => "B",
            SetChoice::Solutions => "A",
        })
    }
}

/// Counts behind an identity or a `2 delta` comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub kind: String,
    pub set: SetChoice,
    pub x: u64,
    pub window: SmoothnessWindow,
    pub delta: f64,
    pub squarefree: bool,
    /// Named parts of the right-hand side (or of both sides of a comparison).
    pub terms: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub residual: f64,
    /// Largest residual the identity allows (`0` for exact identities).
    pub residual_bound: f64,
    /// `ln max(|residual|, 1) / ln x`.
    pub exponent: f64,
    /// Exponent the comparison is judged against, when there is one.
    pub target_exponent: Option<f64>,
}

impl DecompositionReport {
    fn new(kind: &str, set: SetChoice, x: u64, window: SmoothnessWindow, delta: f64, squarefree: bool) -> Self {
        DecompositionReport {
            kind: kind.into(),
            set,
            x,
            window,
            delta,
            squarefree,
            terms: Vec::new(),
            lhs: 0.0,
            rhs: 0.0,
            residual: 0.0,
            residual_bound: 0.0,
            exponent: 0.0,
            target_exponent: None,
        }
    }

    fn settle(mut self) -> Self {
        self.residual = self.rhs - self.lhs;
        self.exponent = self.residual.abs().max(1.0).ln() / (self.x.max(2) as f64).ln();
        self
    }

    /// `|residual| <= residual_bound`.
    pub fn holds(&self) -> bool {
        self.residual.abs() <= self.residual_bound
    }
}

impl Tabular for DecompositionReport {
    fn columns() -> &'static [&'static str] {
        &[
            "kind",
            "set",
            "x",
            "y",
            "z",
            "delta",
            "squarefree",
            "lhs",
            "rhs",
            "residual",
            "residual_bound",
            "exponent",
            "target_exponent",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.kind.clone().into(),
            self.set.to_string().into(),
            self.x.into(),
            self.window.y().into(),
            self.window.z().into(),
            self.delta.into(),
            self.squarefree.into(),
            self.lhs.into(),
            self.rhs.into(),
            self.residual.into(),
            self.residual_bound.into(),
            self.exponent.into(),
            self.target_exponent.map_or(Cell::Text(String::new()), Cell::Real),
        ]
    }
}

struct Membership {
    set: SetChoice,
    classifier: PhaseClassifier,
}

impl Membership {
    fn new(config: &ExperimentConfig, x: u64, set: SetChoice) -> Result<Self> {
        let classifier = PhaseClassifier::new(&config.alpha_fixed()?, &config.beta_fixed()?, &config.delta_fixed(x)?)?;
        Ok(Membership { set, classifier })
    }

    fn contains(&self, n: u64) -> bool {
        match self.set {
            SetChoice::All => true,
            SetChoice::Solutions => matches!(self.classifier.classify(n), Ok(Chi::In)),
        }
    }
}

fn points_with_limit(config: &ExperimentConfig, limit: u64, what: &str) -> Result<Vec<XPoint>> {
    config.validate()?;
    let pts = config.points()?;
    if let Some(p) = pts.iter().find(|p| p.x > limit || p.x < 2) {
        return precondition(format!("{what} needs 2 <= x <= {limit}, got {}", p.x));
    }
    Ok(pts)
}

/// Split of the window-smooth members of `A` by largest prime factor, for
/// `A = B` and for the solution set.
pub fn run_buchstab_check(config: &ExperimentConfig) -> Result<Vec<DecompositionReport>> {
    let pts = points_with_limit(config, crate::sieve::BUCHSTAB_X_LIMIT, "buchstab check")?;
    let mut out = Vec::new();
    for p in pts {
        let window = config.window.resolve(p.x)?;
        for set in [SetChoice::All, SetChoice::Solutions] {
            let member = Membership::new(config, p.x, set)?;
            let split = config.install(|| buchstab_decompose(p.x, window, |n| member.contains(n)))??;
            let mut r = DecompositionReport::new("buchstab", set, p.x, window, config.delta_f64(p.x), false);
            r.terms = vec![
                ("unit".into(), split.unit as f64),
                ("primes".into(), split.primes as f64),
                ("composite".into(), split.composite as f64),
            ];
            r.lhs = split.total as f64;
            r.rhs = (split.unit + split.primes + split.composite) as f64;
            out.push(r.settle());
        }
    }
    Ok(out)
}

fn factor_table(x: u64) -> Result<FactorTable> {
    let primes = sieve_primes(crate::sieve::isqrt(x) + 1)?;
    spf_segment(2, x + 1, &primes)
}

/// `n` whose prime factors are all at least `y` (including `n = 1`).
fn rough(n: u64, y: u64, spf: &FactorTable) -> bool {
    n == 1 || spf.spf(n) >= y
}

/// Counts both sides of the role reversal
/// `sum_{x^{3/4} < p <= z} S(A_p; y, p) = sum_{n < x^{1/4}} c_n S(A'_n; (x/n)^{1/2})`.
///
/// The two sides differ exactly by the `n` with `x/n = r^2` for a prime
/// `r` counted on the right, so the residual is at most `tau(x)`.
pub fn run_role_reversal_check(config: &ExperimentConfig) -> Result<Vec<DecompositionReport>> {
    let pts = points_with_limit(config, ROLE_REVERSAL_X_LIMIT, "role-reversal check")?;
    let mut out = Vec::new();
    for p in pts {
        let x = p.x;
        let window = config.window.resolve(x)?;
        let (y, z) = (window.y(), window.z());
        let spf = factor_table(x)?;
        let member = Membership::new(config, x, SetChoice::Solutions)?;
        let x3 = (x as u128).pow(3);
        let above = |m: u64| (m as u128).pow(4) > x3;

        let lhs: u64 = config.install(|| {
            (y.max(2)..=z.min(x))
                .into_par_iter()
                .filter(|&q| above(q) && spf.is_prime(q))
                .map(|q| (1..=x / q).filter(|&n| rough(n, y, &spf) && member.contains(n * q)).count() as u64)
                .sum()
        })?;
        let rhs: u64 = config.install(|| {
            (1..x)
                .take_while(|&n| (n as u128).pow(4) < x as u128)
                .filter(|&n| rough(n, y, &spf))
                .map(|n| {
                    let lo = crate::sieve::iroot(x.pow(3), 4).max(y).max(2);
                    let hi = z.min(x / n);
                    (lo..=hi)
                        .into_par_iter()
                        .filter(|&m| above(m))
                        .filter(|&m| (spf.spf(m) as u128).pow(2) * n as u128 >= x as u128)
                        .filter(|&m| member.contains(m * n))
                        .count() as u64
                })
                .sum()
        })?;
        let mut r =
            DecompositionReport::new("role-reversal", SetChoice::Solutions, x, window, config.delta_f64(x), false);
        r.terms = vec![("prime_side".into(), lhs as f64), ("reversed_side".into(), rhs as f64)];
        r.lhs = lhs as f64;
        r.rhs = rhs as f64;
        r.residual_bound = divisor_tau(x) as f64;
        out.push(r.settle());
    }
    Ok(out)
}

/// Range of the largest prime in a sieve-lemma comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveRegion {
    /// `p < x^{1/4}`.
    Low,
    /// `x^{1/4} <= p <= x^{3/4}`.
    Mid,
    /// `p > x^{3/4}`.
    High,
}

impl SieveRegion {
    /// Whether `p` lies in the region for this `x` (exact integer comparison).
    pub fn contains(&self, p: u64, x: u64) -> bool {
        let (p4, x) = ((p as u128).pow(4), x as u128);
        match self {
            SieveRegion::Low => p4 < x,
            SieveRegion::Mid => x <= p4 && p4 <= x.pow(3),
            SieveRegion::High => p4 > x.pow(3),
        }
    }
}

impl FromStr for SieveRegion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(SieveRegion::Low),
            "mid" => Ok(SieveRegion::Mid),
            "high" => Ok(SieveRegion::High),
            _ => Err(Error::Config(format!("unknown region {s:?}; expected low, mid or high"))),
        }
    }
}

impl fmt::Display for SieveRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SieveRegion::Low => "low",
            SieveRegion::Mid => "mid",
            SieveRegion::High => "high",
        })
    }
}

/// `sum_p S(A_p; y, p)` against `2 delta sum_p S(B_p; y, p)` with `p` in
/// `[y, z]` and in the region (`T(A_p; y, p - 1)` when squarefree).
///
/// Every counted `k = p n` has `p = P^+(k)`, so both sums run over window-smooth
/// `k > 1` whose largest prime factor lies in the region.
pub fn run_sieve_lemma_check(
    config: &ExperimentConfig,
    region: SieveRegion,
    squarefree: bool,
) -> Result<Vec<DecompositionReport>> {
    let pts = points_with_limit(config, SIEVE_LEMMA_X_LIMIT, "sieve-lemma check")?;
    let mut out = Vec::new();
    for p in pts {
        let x = p.x;
        let window = config.window.resolve(x)?;
        let kind = format!("sieve-lemma-{region}");
        let mut r = DecompositionReport::new(&kind, SetChoice::Solutions, x, window, config.delta_f64(x), squarefree);
        r.target_exponent = Some(0.75 + config.eps / 2.0);
        if window.is_empty() {
            r.terms = vec![("A_side".into(), 0.0), ("B_side".into(), 0.0)];
            out.push(r.settle());
            continue;
        }
        let spf = factor_table(x.max(2))?;
        let member = Membership::new(config, x, SetChoice::Solutions)?;
        let ks: Vec<u64> = enumerate_smooth(x, window, squarefree)?
            .filter(|&k| k > 1 && region.contains(spf_largest(k, &spf), x))
            .collect();
        let a_side = config.install(|| ks.par_iter().filter(|&&k| member.contains(k)).count())? as f64;
        let b_side = ks.len() as f64;
        let delta = config.delta_f64(x);
        r.terms = vec![("A_side".into(), a_side), ("B_side".into(), b_side)];
        r.lhs = a_side;
        r.rhs = 2.0 * delta * b_side;
        out.push(r.settle());
    }
    Ok(out)
}

fn spf_largest(k: u64, spf: &FactorTable) -> u64 {
    spf.largest_prime_factor(k).unwrap_or(1)
}
