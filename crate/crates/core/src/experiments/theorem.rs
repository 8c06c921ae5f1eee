use rayon::prelude::*;

use crate::diophantine::{Chi, PhaseClassifier};
use crate::error::{Error, Result};
use crate::fourier::{build_sandwich, SandwichPair, SANDWICH_TOLERANCE};
use crate::sieve::{enumerate_smooth, SmoothnessWindow};

use super::config::{ExperimentConfig, XPoint};
use super::report::{Cell, Tabular};

/// Rows with `x` at most this get sandwich bracket sums.
pub const BRACKET_X_LIMIT: u64 = 1_000_000;

/// Stream elements classified per parallel chunk.
const CHUNK: usize = 1 << 12;
/// Stream elements pulled per batch.
const BATCH: usize = 1 << 18;

/// One `x` of a theorem run.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremRow {
    pub x: u64,
    pub q: u64,
    pub delta: f64,
    pub window: SmoothnessWindow,
    pub squarefree: bool,
    pub psi: u64,
    pub observed: u64,
    pub out: u64,
    pub boundary: u64,
    pub main_term: f64,
    pub error: f64,
    pub error_exponent: f64,
    pub budget: f64,
    pub c: f64,
    pub kappa: f64,
    /// `(sum of minorant, sum of majorant)` over the stream, for small `x`.
    pub bracket: Option<(f64, f64)>,
}

impl TheoremRow {
    pub fn within_budget(&self) -> bool {
        self.error <= self.budget
    }

    /// `minorant sum <= observed <= majorant sum`, up to the pointwise
    /// sandwich tolerance and boundary cases.
    pub fn bracket_holds(&self) -> Option<bool> {
        let (lo, hi) = self.bracket?;
        let slack = SANDWICH_TOLERANCE * self.psi as f64;
        Some(lo - slack <= (self.observed + self.boundary) as f64 && self.observed as f64 <= hi + slack)
    }
}

impl Tabular for TheoremRow {
    fn columns() -> &'static [&'static str] {
        &[
            "x",
            "q",
            "delta",
            "psi",
            "observed",
            "boundary",
            "main_term",
            "error",
            "error_exponent",
            "budget",
            "C",
            "kappa",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.x.into(),
            self.q.into(),
            self.delta.into(),
            self.psi.into(),
            self.observed.into(),
            self.boundary.into(),
            self.main_term.into(),
            self.error.into(),
            self.error_exponent.into(),
            self.budget.into(),
            self.c.into(),
            self.kappa.into(),
        ]
    }
}

/// Smooth numbers `n <= x` with `||alpha n + beta|| < delta`, against `2 delta Psi`.
pub fn run_theorem(config: &ExperimentConfig) -> Result<Vec<TheoremRow>> {
    run_rows(config, config.squarefree)
}

/// [`run_theorem`] over squarefree smooth numbers.
pub fn run_squarefree_theorem(config: &ExperimentConfig) -> Result<Vec<TheoremRow>> {
    run_rows(config, true)
}

fn run_rows(config: &ExperimentConfig, squarefree: bool) -> Result<Vec<TheoremRow>> {
    config.validate()?;
    let points = config.points()?;
    config.install(|| points.iter().map(|&p| theorem_row(config, p, squarefree)).collect())?
}

/// One row of a theorem run.
pub fn theorem_row(config: &ExperimentConfig, point: XPoint, squarefree: bool) -> Result<TheoremRow> {
    let XPoint { x, q } = point;
    let window = config.window.resolve(x)?;
    let delta = config.delta_f64(x);
    if delta >= 0.5 {
        return Err(Error::Config(format!(
            "delta = x^(-1/4+eps) = {delta} >= 1/2 at x = {x}; x is too small for eps = {}",
            config.eps
        )));
    }
    if window.y().saturating_mul(window.y()) >= x || window.y() >= window.z() {
        return Err(Error::Config(format!(
            "window [{}, {}] violates 2 <= y < x^(1/2), y < z <= x at x = {x}",
            window.y(),
            window.z()
        )));
    }
    let classifier = PhaseClassifier::new(&config.alpha_fixed()?, &config.beta_fixed()?, &config.delta_fixed(x)?)?;
    let pair = if x <= BRACKET_X_LIMIT { Some(build_sandwich(delta, config.degree.resolve(x))?) } else { None };

    let mut stream = enumerate_smooth(x, window, squarefree)?;
    let (mut psi, mut counts, mut lo, mut hi) = (0u64, [0u64; 3], 0f64, 0f64);
    loop {
        let batch = stream.next_batch(BATCH);
        if batch.is_empty() {
            break;
        }
        psi += batch.len() as u64;
        let parts: Vec<ChunkTally> =
            batch.par_chunks(CHUNK).map(|chunk| tally(chunk, &classifier, pair.as_ref())).collect::<Result<_>>()?;
        for t in parts {
            for (c, k) in counts.iter_mut().zip(t.counts) {
                *c += k;
            }
            lo += t.lower;
            hi += t.upper;
        }
    }
    let [observed, out, boundary] = counts;
    let main_term = 2.0 * delta * psi as f64;
    let error = (observed as f64 - main_term).abs();
    Ok(TheoremRow {
        x,
        q,
        delta,
        window,
        squarefree,
        psi,
        observed,
        out,
        boundary,
        main_term,
        error,
        error_exponent: error.max(1.0).ln() / (x as f64).ln(),
        budget: config.budget(x),
        c: config.c,
        kappa: config.kappa,
        bracket: pair.map(|_| (lo, hi)),
    })
}

struct ChunkTally {
    counts: [u64; 3],
    lower: f64,
    upper: f64,
}

fn tally(chunk: &[u64], classifier: &PhaseClassifier, pair: Option<&SandwichPair>) -> Result<ChunkTally> {
    let mut t = ChunkTally { counts: [0; 3], lower: 0.0, upper: 0.0 };
    for &n in chunk {
        let slot = match classifier.classify(n)? {
            Chi::In => 0,
            Chi::Out => 1,
            Chi::Boundary => 2,
        };
        t.counts[slot] += 1;
        if let Some(pair) = pair {
            let (l, u) = pair.eval_both(classifier.phase(n));
            t.lower += l;
            t.upper += u;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{WindowSpec, XSource};

    fn brute(x: u64, y: u64, z: u64, sf: bool, alpha: f64, delta: f64) -> (u64, u64) {
        let (mut psi, mut obs) = (0, 0);
        for n in 1..=x {
            let mut m = n;
            let mut ok = true;
            let mut p = 2;
            while m > 1 {
                if m % p == 0 {
                    if p < y || p > z || (sf && (m / p) % p == 0) {
                        ok = false;
                        break;
                    }
                    m /= p;
                } else {
                    p += 1;
                }
            }
            if ok {
                psi += 1;
                let t = (alpha * n as f64).fract();
                if t.min(1.0 - t) < delta {
                    obs += 1;
                }
            }
        }
        (psi, obs)
    }

    #[test]
    fn matches_brute_force_on_small_x() {
        for sf in [false, true] {
            let cfg = ExperimentConfig {
                window: WindowSpec::Absolute { y: 3, z: 40 },
                xs: XSource::Explicit(vec![5000]),
                eps: 0.1,
                degree: crate::experiments::DegreePolicy::Fixed(200),
                ..Default::default()
            };
            let row = if sf { run_squarefree_theorem(&cfg) } else { run_theorem(&cfg) }.unwrap().remove(0);
            let (psi, obs) = brute(5000, 3, 40, sf, 2f64.sqrt(), row.delta);
            assert_eq!((row.psi, row.observed), (psi, obs));
            assert_eq!(row.observed + row.out + row.boundary, row.psi);
            assert_eq!(row.bracket_holds(), Some(true));
        }
    }

    #[test]
    fn small_window_feeds_main_term() {
        let cfg = ExperimentConfig {
            window: WindowSpec::Absolute { y: 2, z: 3 },
            xs: XSource::Explicit(vec![10]),
            delta: Some(0.2),
            ..Default::default()
        };
        let row = run_squarefree_theorem(&cfg).unwrap().remove(0);
        assert_eq!(row.psi, 4);
        assert!((row.main_term - 2.0 * 0.2 * 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_large_delta_and_bad_window() {
        let cfg = ExperimentConfig {
            window: WindowSpec::Absolute { y: 2, z: 5 },
            xs: XSource::Explicit(vec![20]),
            eps: 0.3,
            ..Default::default()
        };
        assert!(matches!(run_theorem(&cfg), Err(Error::Config(_))));
        let cfg = ExperimentConfig {
            window: WindowSpec::Absolute { y: 200, z: 300 },
            xs: XSource::Explicit(vec![10_000]),
            ..Default::default()
        };
        assert!(matches!(run_theorem(&cfg), Err(Error::Config(_))));
    }
}
