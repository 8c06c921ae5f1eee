use rayon::prelude::*;

use crate::diophantine::{Chi, FixedPointReal, PhaseClassifier};
use crate::error::{precondition, Result};
use crate::sieve::{enumerate_smooth, iroot, sieve_primes, spf_segment, FactorTable, SmoothnessWindow};

use super::config::ExperimentConfig;
use super::report::{Cell, Tabular};

pub const LOWER_BOUND_X_LIMIT: u64 = 10_000_000;

/// Count of `n = ab <= x` with `a in [x^{1/3}, 2 x^{1/3})`, every prime factor
/// of `n` below `x^eps`, and `||alpha n + beta|| < x^{-1/3 + eps}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub x: u64,
    pub q: u64,
    pub eps: f64,
    /// Largest admitted prime (`< x^eps`).
    pub smooth_bound: u64,
    pub threshold: f64,
    pub count: u64,
    pub exponent: f64,
    pub target_exponent: f64,
    /// No admissible `a` exists, so the construction is empty.
    pub empty_construction: bool,
}

impl Tabular for LowerBoundReport {
    fn columns() -> &'static [&'static str] {
        &["x", "q", "eps", "smooth_bound", "threshold", "count", "exponent", "target_exponent", "empty_construction"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.x.into(),
            self.q.into(),
            self.eps.into(),
            self.smooth_bound.into(),
            self.threshold.into(),
            self.count.into(),
            self.exponent.into(),
            self.target_exponent.into(),
            self.empty_construction.into(),
        ]
    }
}

/// Largest integer strictly below `x^eps`.
fn below_power(x: u64, eps: f64) -> u64 {
    let t = (x as f64).powf(eps);
    let f = t.floor() as u64;
    if f as f64 == t {
        f.saturating_sub(1)
    } else {
        f
    }
}

/// Whether `n` has a divisor `a` with `x <= a^3 < 8x`.
fn has_middle_divisor(n: u64, x: u64, spf: &FactorTable) -> bool {
    let mut divisors = vec![1u64];
    for (p, e) in spf.factorize(n) {
        let len = divisors.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divisors.push(divisors[i] * pk);
            }
        }
    }
    let (x, x8) = (x as u128, 8 * x as u128);
    divisors.iter().any(|&a| {
        let a3 = (a as u128).pow(3);
        x <= a3 && a3 < x8
    })
}

pub fn run_lower_bound_demo(config: &ExperimentConfig) -> Result<Vec<LowerBoundReport>> {
    config.validate()?;
    let mut out = Vec::new();
    for p in config.points()? {
        let x = p.x;
        if !(8..=LOWER_BOUND_X_LIMIT).contains(&x) {
            return precondition(format!("lower-bound demo needs 8 <= x <= {LOWER_BOUND_X_LIMIT}, got {x}"));
        }
        let z = below_power(x, config.eps);
        let threshold = (x as f64).powf(-1.0 / 3.0 + config.eps).min(0.5);
        let a_lo = {
            let r = iroot(x, 3);
            if r.pow(3) == x {
                r
            } else {
                r + 1
            }
        };
        let mut report = LowerBoundReport {
            x,
            q: p.q,
            eps: config.eps,
            smooth_bound: z,
            threshold,
            count: 0,
            exponent: 0.0,
            target_exponent: 2.0 / 3.0 + config.eps,
            empty_construction: true,
        };
        if z >= 2 {
            let a_window = SmoothnessWindow::new(2, z)?;
            // some z-smooth a in [x^{1/3}, 2x^{1/3})
            report.empty_construction = !enumerate_smooth(iroot(8 * x - 1, 3), a_window, false)?.any(|a| a >= a_lo);
        }
        if !report.empty_construction {
            let primes = sieve_primes(crate::sieve::isqrt(x) + 1)?;
            let spf = spf_segment(2, x + 1, &primes)?;
            let delta = FixedPointReal::from_f64(threshold, config.frac_bits)?;
            let classifier = PhaseClassifier::new(&config.alpha_fixed()?, &config.beta_fixed()?, &delta)?;
            let ns: Vec<u64> = enumerate_smooth(x, SmoothnessWindow::new(2, z)?, false)?.collect();
            report.count = config.install(|| {
                ns.par_iter()
                    .filter(|&&n| matches!(classifier.classify(n), Ok(Chi::In)) && has_middle_divisor(n, x, &spf))
                    .count() as u64
            })?;
        }
        report.exponent = if report.count > 0 { (report.count as f64).ln() / (x as f64).ln() } else { 0.0 };
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::XSource;

    fn brute(x: u64, eps: f64, alpha: f64) -> u64 {
        let z = below_power(x, eps);
        let thr = (x as f64).powf(-1.0 / 3.0 + eps);
        (1..=x)
            .filter(|&n| {
                let t = (alpha * n as f64).fract();
                if t.min(1.0 - t) >= thr {
                    return false;
                }
                let (mut m, mut p) = (n, 2);
                while m > 1 {
                    if m % p == 0 {
                        if p > z {
                            return false;
                        }
                        m /= p;
                    } else {
                        p += 1;
                    }
                }
                (1..=n).any(|a| n % a == 0 && (a as f64).powi(3) >= x as f64 && (a as f64).powi(3) < 8.0 * x as f64)
            })
            .count() as u64
    }

    #[test]
    fn matches_brute_force() {
        let cfg = ExperimentConfig { eps: 0.3, xs: XSource::Explicit(vec![20_000]), ..Default::default() };
        let r = run_lower_bound_demo(&cfg).unwrap().remove(0);
        assert_eq!(r.count, brute(20_000, 0.3, 2f64.sqrt()));
        assert!(r.count >= 1);
        assert!(!r.empty_construction);
    }

    #[test]
    fn tiny_eps_gives_empty_construction() {
        let cfg = ExperimentConfig { eps: 0.01, xs: XSource::Explicit(vec![1_000_000]), ..Default::default() };
        let r = run_lower_bound_demo(&cfg).unwrap().remove(0);
        assert!(r.empty_construction);
        assert_eq!(r.count, 0);
    }

    #[test]
    fn smooth_bound_is_strict() {
        assert_eq!(below_power(1_000_000, 0.5), 999);
        assert_eq!(below_power(1_000_000, 0.3), 63);
    }
}
