use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;

pub const DEFAULT_KAPPA: f64 = 2.0;

/// `(M + x/q + delta q) (log x)^kappa`.
pub fn type1_predictor(x: f64, m: f64, q: f64, delta: f64, kappa: f64) -> f64 {
    (m + x / q + delta * q) * x.ln().powf(kappa)
}

/// Range of `M` a Type II bound applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `M << x^{1/2}`.
    Low,
    /// `M >> x^{1/2}`.
    High,
}

impl Regime {
    /// `Low` when `M^2 <= x`.
    pub fn for_m(x: f64, m: f64) -> Regime {
        if m * m <= x {
            Regime::Low
        } else {
            Regime::High
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Low => "low",
            Regime::High => "high",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "low" => Ok(Regime::Low),
            "high" => Ok(Regime::High),
            _ => Err(Error::Config(format!("unknown regime {s:?}"))),
        }
    }
}

/// Low: `x (delta/M + M/x + 1/q + q delta/x)^{1/2} (log x)^kappa`.
/// High: `x (M delta/x + 1/M + 1/q + q delta/x)^{1/2} (log x)^kappa`.
pub fn type2_predictor(x: f64, m: f64, q: f64, delta: f64, regime: Regime, kappa: f64) -> f64 {
    let bracket = match regime {
        Regime::Low => delta / m + m / x + 1.0 / q + q * delta / x,
        Regime::High => m * delta / x + 1.0 / m + 1.0 / q + q * delta / x,
    };
    x * bracket.sqrt() * x.ln().powf(kappa)
}

/// One exponential-sum evaluation against its predictor.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub kind: String,
    pub coefficients: String,
    pub x: u64,
    pub m: u64,
    pub q: u64,
    pub delta: f64,
    pub degree: usize,
    pub kappa: f64,
    pub lhs_abs: f64,
    pub predictor: f64,
    pub ratio: f64,
}

impl BoundReport {
    pub fn is_finite(&self) -> bool {
        [self.delta, self.kappa, self.lhs_abs, self.predictor, self.ratio].iter().all(|v| v.is_finite() && *v >= 0.0)
    }
}
