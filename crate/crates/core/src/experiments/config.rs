use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::diophantine::{
    cf_expand, convergents, fixed_point_value, select_denominator, x_from_q, ContinuedFraction, FixedPointReal,
    RealLiteral, DEFAULT_FRAC_BITS, DEFAULT_MAX_TERMS,
};
use crate::error::{Error, Result};
use crate::sieve::{iroot, SmoothnessWindow};

/// Smoothness window, either fixed or scaling with `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowSpec {
    /// `[y, z]`, with `z` clipped to `x`.
    Absolute { y: u64, z: u64 },
    /// `[x^{1/u1}, x^{1/u2}]`, rounded inwards.
    Exponents { u1: f64, u2: f64 },
}

impl WindowSpec {
    /// The integer window for a given `x`.
    pub fn resolve(&self, x: u64) -> Result<SmoothnessWindow> {
        match *self {
            WindowSpec::Absolute { y, z } => SmoothnessWindow::new(y, z.min(x.max(1))),
            WindowSpec::Exponents { u1, u2 } => {
                let y = root_ceil(x, u1).max(2);
                let z = root_floor(x, u2);
                SmoothnessWindow::new(y, z)
            }
        }
    }
}

fn integral(u: f64) -> Option<u32> {
    (u.fract() == 0.0 && (1.0..=64.0).contains(&u)).then_some(u as u32)
}

/// `floor(x^{1/u})`.
fn root_floor(x: u64, u: f64) -> u64 {
    match integral(u) {
        Some(k) => iroot(x, k),
        None => (x as f64).powf(1.0 / u).floor() as u64,
    }
}

/// `ceil(x^{1/u})`.
fn root_ceil(x: u64, u: f64) -> u64 {
    match integral(u) {
        Some(k) => {
            let r = iroot(x, k);
            if (r as u128).pow(k) == x as u128 {
                r
            } else {
                r + 1
            }
        }
        None => (x as f64).powf(1.0 / u).ceil() as u64,
    }
}

impl FromStr for WindowSpec {
    type Err = Error;

    /// `y,z` or `abs:y,z` for absolute bounds, `exp:u1,u2` for exponents.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse window {s:?}; expected y,z | abs:y,z | exp:u1,u2"));
        let (kind, body) = match s.split_once(':') {
            Some((k, b)) => (k, b),
            None => ("abs", s),
        };
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        match kind {
            "abs" => {
                let y = a.trim().parse().map_err(|_| bad())?;
                let z = b.trim().parse().map_err(|_| bad())?;
                Ok(WindowSpec::Absolute { y, z })
            }
            "exp" => {
                let u1: f64 = a.trim().parse().map_err(|_| bad())?;
                let u2: f64 = b.trim().parse().map_err(|_| bad())?;
                if !(u1 >= 1.0 && u2 >= 1.0 && u1.is_finite() && u2.is_finite()) {
                    return Err(Error::Config(format!("window exponents must be >= 1, got {u1}, {u2}")));
                }
                Ok(WindowSpec::Exponents { u1, u2 })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowSpec::Absolute { y, z } => write!(f, "abs:{y},{z}"),
            WindowSpec::Exponents { u1, u2 } => write!(f, "exp:{u1},{u2}"),
        }
    }
}

/// Where the `x` values of an experiment come from.
#[derive(Debug, Clone, PartialEq)]
pub enum XSource {
    Explicit(Vec<u64>),
    /// `x = floor(q_s^{3/2})` for the listed convergent indices `s`.
    Convergents(Vec<usize>),
    /// `start, start + step, ...` up to `stop`.
    Grid {
        start: u64,
        stop: u64,
        step: u64,
    },
}

impl XSource {
    /// Convergent indices from `8,10,12` / `8..14` / `8..14:2`.
    pub fn parse_convergents(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse convergent indices {s:?}"));
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim) {
            if let Some((a, rest)) = part.split_once("..") {
                let (b, step) = match rest.split_once(':') {
                    Some((b, st)) => (b, st.parse::<usize>().map_err(|_| bad())?),
                    None => (rest, 1),
                };
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if step == 0 || a > b {
                    return Err(bad());
                }
                out.extend((a..=b).step_by(step));
            } else {
                out.push(part.parse().map_err(|_| bad())?);
            }
        }
        Ok(XSource::Convergents(out))
    }

    /// `1000,2000` as an explicit list, or `start..stop:step` as a grid.
    pub fn parse_xs(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse x list {s:?}"));
        let num = |t: &str| -> Result<u64> { parse_count(t).ok_or_else(bad) };
        if let Some((a, rest)) = s.split_once("..") {
            let (b, step) = rest.split_once(':').ok_or_else(bad)?;
            let (start, stop, step) = (num(a)?, num(b)?, num(step)?);
            if step == 0 || start > stop {
                return Err(bad());
            }
            return Ok(XSource::Grid { start, stop, step });
        }
        s.split(',').map(|t| num(t.trim())).collect::<Result<_>>().map(XSource::Explicit)
    }
}

/// Integer literal, also accepting `1e6`-style powers of ten.
pub fn parse_count(s: &str) -> Option<u64> {
    if let Ok(v) = s.parse() {
        return Some(v);
    }
    let (m, e) = s.split_once(['e', 'E'])?;
    let m: u64 = m.parse().ok()?;
    m.checked_mul(10u64.checked_pow(e.parse().ok()?)?)
}

/// Degree `L` of the sandwich polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreePolicy {
    /// `min(floor(x), cap)`.
    Auto {
        cap: usize,
    },
    Fixed(usize),
}

impl DegreePolicy {
    pub const DEFAULT_CAP: usize = 100_000;

    pub fn resolve(&self, x: u64) -> usize {
        match *self {
            DegreePolicy::Auto { cap } => (x as usize).min(cap).max(1),
            DegreePolicy::Fixed(l) => l.max(1),
        }
    }
}

impl Default for DegreePolicy {
    fn default() -> Self {
        DegreePolicy::Auto { cap: Self::DEFAULT_CAP }
    }
}

impl FromStr for DegreePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(DegreePolicy::default());
        }
        match parse_count(s) {
            Some(l) if l >= 1 => Ok(DegreePolicy::Fixed(l as usize)),
            _ => Err(Error::Config(format!("L must be a positive integer or auto, got {s:?}"))),
        }
    }
}

/// Parameters shared by every experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub alpha: RealLiteral,
    pub beta: RealLiteral,
    pub eps: f64,
    /// Replaces `x^{-1/4 + eps}` when set.
    pub delta: Option<f64>,
    pub window: WindowSpec,
    pub xs: XSource,
    pub squarefree: bool,
    pub degree: DegreePolicy,
    pub frac_bits: u32,
    pub kappa: f64,
    pub c: f64,
    pub threads: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            alpha: "sqrt(2)".parse().expect("literal"),
            beta: RealLiteral::Rational(crate::diophantine::Rational::integer(0)),
            eps: 0.1,
            delta: None,
            window: WindowSpec::Exponents { u1: 8.0, u2: 3.0 },
            xs: XSource::Convergents(vec![8, 10]),
            squarefree: false,
            degree: DegreePolicy::default(),
            frac_bits: DEFAULT_FRAC_BITS,
            kappa: 0.0,
            c: 10.0,
            threads: None,
            seed: 0,
            out: None,
        }
    }
}

/// One `x` of an experiment with its denominator `q` (0 when `alpha` is rational).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XPoint {
    pub x: u64,
    pub q: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::Config(format!("eps must be positive, got {}", self.eps)));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d <= 0.5) {
                return Err(Error::Config(format!("delta must lie in (0, 1/2], got {d}")));
            }
        }
        if !(self.c > 0.0 && self.kappa >= 0.0) {
            return Err(Error::Config("C must be positive and kappa nonnegative".into()));
        }
        if self.frac_bits == 0 {
            return Err(Error::Config("frac_bits must be positive".into()));
        }
        Ok(())
    }

    /// Continued fraction of `alpha`, when it is a quadratic irrational.
    pub fn continued_fraction(&self) -> Result<Option<ContinuedFraction>> {
        self.alpha.as_surd().map(|s| cf_expand(s, DEFAULT_MAX_TERMS)).transpose()
    }

    /// The experiment's `x` values in the order given.
    pub fn points(&self) -> Result<Vec<XPoint>> {
        let cf = self.continued_fraction()?;
        let q_for = |x: u64| -> Result<u64> {
            match (&cf, x >= 2) {
                (Some(cf), true) => select_denominator(x, cf)?
                    .q_u64()
                    .ok_or_else(|| Error::Resource("denominator exceeds 64 bits".into())),
                _ => Ok(0),
            }
        };
        match &self.xs {
            XSource::Explicit(v) => v.iter().map(|&x| Ok(XPoint { x, q: q_for(x)? })).collect(),
            XSource::Grid { start, stop, step } => {
                (*start..=*stop).step_by(*step as usize).map(|x| Ok(XPoint { x, q: q_for(x)? })).collect()
            }
            XSource::Convergents(idx) => {
                let cf =
                    cf.ok_or_else(|| Error::Config("convergent-driven x needs a quadratic irrational alpha".into()))?;
                let max = idx.iter().copied().max().map_or(0, |m| m + 1);
                let cv = convergents(&cf, max);
                idx.iter()
                    .map(|&s| {
                        let q = cv[s].q_u64().ok_or_else(|| Error::Resource(format!("q_{s} exceeds 64 bits")))?;
                        Ok(XPoint { x: x_from_q(q)?, q })
                    })
                    .collect()
            }
        }
    }

    /// `x^{-1/4 + eps}` (or the override), as a double.
    pub fn delta_f64(&self, x: u64) -> f64 {
        self.delta.unwrap_or_else(|| (x as f64).powf(-0.25 + self.eps))
    }

    /// `delta` converted exactly to fixed point.
    pub fn delta_fixed(&self, x: u64) -> Result<FixedPointReal> {
        FixedPointReal::from_f64(self.delta_f64(x), self.frac_bits)
    }

    pub fn alpha_fixed(&self) -> Result<FixedPointReal> {
        fixed_point_value(&self.alpha, self.frac_bits)
    }

    pub fn beta_fixed(&self) -> Result<FixedPointReal> {
        fixed_point_value(&self.beta, self.frac_bits)
    }

    /// `C x^{3/4 + eps/2} (log x)^kappa`.
    pub fn budget(&self, x: u64) -> f64 {
        let xf = x as f64;
        self.c * xf.powf(0.75 + self.eps / 2.0) * xf.ln().powf(self.kappa)
    }

    /// Run `f` on a pool with the configured thread count.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(f()),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(|pool| pool.install(f))
                .map_err(|e| Error::Resource(format!("thread pool: {e}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing_and_resolution() {
        assert_eq!("10,1000".parse::<WindowSpec>().unwrap(), WindowSpec::Absolute { y: 10, z: 1000 });
        assert_eq!("abs:2,3".parse::<WindowSpec>().unwrap(), WindowSpec::Absolute { y: 2, z: 3 });
        let w: WindowSpec = "exp:8,3".parse().unwrap();
        let r = w.resolve(30913).unwrap();
        // 30913^(1/8) = 3.64.., 30913^(1/3) = 31.38..
        assert_eq!((r.y(), r.z()), (4, 31));
        assert_eq!(w.resolve(1 << 24).unwrap().y(), 8);
        assert_eq!("exp:3,8".parse::<WindowSpec>().unwrap().resolve(1 << 24).unwrap().z(), 8);
        assert!("exp:0.5,2".parse::<WindowSpec>().is_err());
        assert!("7".parse::<WindowSpec>().is_err());
        assert_eq!(WindowSpec::Absolute { y: 2, z: 500 }.resolve(100).unwrap().z(), 100);
    }

    #[test]
    fn x_sources() {
        assert_eq!(XSource::parse_convergents("8..14:2").unwrap(), XSource::Convergents(vec![8, 10, 12, 14]));
        assert_eq!(XSource::parse_convergents("3,5..6").unwrap(), XSource::Convergents(vec![3, 5, 6]));
        assert_eq!(XSource::parse_xs("1e4,20").unwrap(), XSource::Explicit(vec![10_000, 20]));
        assert_eq!(XSource::parse_xs("10..30:10").unwrap(), XSource::Grid { start: 10, stop: 30, step: 10 });
        assert!(XSource::parse_xs("a").is_err());
    }

    #[test]
    fn convergent_points_for_sqrt2() {
        let cfg = ExperimentConfig { xs: XSource::parse_convergents("8..14:2").unwrap(), ..Default::default() };
        let pts = cfg.points().unwrap();
        let qs: Vec<u64> = pts.iter().map(|p| p.q).collect();
        assert_eq!(qs, vec![985, 5741, 33461, 195025]);
        assert_eq!(pts[0].x, 30913);
        let explicit = ExperimentConfig { xs: XSource::Explicit(vec![10_000]), ..Default::default() };
        assert_eq!(explicit.points().unwrap()[0].q, 985);
    }

    #[test]
    fn degree_policy() {
        assert_eq!(DegreePolicy::default().resolve(500), 500);
        assert_eq!(DegreePolicy::default().resolve(10_000_000), 100_000);
        assert_eq!("64".parse::<DegreePolicy>().unwrap(), DegreePolicy::Fixed(64));
        assert!("0".parse::<DegreePolicy>().is_err());
    }
}
