//! Trigonometric minorant/majorant of the indicator of `||theta|| < delta`.
//!
//! For the arc `(-delta, delta)` modulo one, write the indicator as
//! `2 delta + psi(-delta - theta) - psi(delta - theta)` with the sawtooth
//! `psi(t) = {t} - 1/2`. Vaaler's degree-`L` approximation `V` to `psi` satisfies
//! `|psi - V| <= K / (2L + 2)` with `K` the Fejér kernel of order `L + 1`, so
//! adding or subtracting the two shifted kernels gives a majorant and a
//! minorant of degree `L` with constant terms `2 delta +- 1/(L+1)`.
//!
//! With `u = l/(L+1)` and `w(u) = pi u (1-u) cot(pi u) + u`, the resulting
//! cosine coefficients (for `+l` and `-l` alike) are
//!
//! ```text
//! c_l = w(u) sin(2 pi l delta) / (pi l)  +-  (1 - u) cos(2 pi l delta) / (L + 1)
//! ```

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Lower,
    Upper,
}

/// Degree-`L` trigonometric polynomials `lower <= chi <= upper`.
///
/// Coefficients are real and symmetric: `c_{-l} = c_l`, stored for `l = 1..=L`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichPair {
    degree: usize,
    delta: f64,
    c_minus: Vec<f64>,
    c_plus: Vec<f64>,
}

/// Vaaler's weight `pi u (1 - u) cot(pi u) + u` on `(0, 1)`.
fn vaaler_weight(u: f64) -> f64 {
    // cot(pi u) = -cot(pi (1 - u)); evaluate on the side away from the pole
    let v = 1.0 - u;
    if u <= 0.5 {
        PI * u * v / (PI * u).tan() + u
    } else {
        -PI * u * v / (PI * v).tan() + u
    }
}

pub fn build_sandwich(delta: f64, degree: usize) -> Result<SandwichPair> {
    if !(delta > 0.0 && delta < 0.5) {
        return precondition(format!("delta must lie in (0, 1/2), got {delta}"));
    }
    if degree < 1 {
        return precondition("degree L must be at least 1");
    }
    let n1 = (degree + 1) as f64;
    let mut c_minus = Vec::with_capacity(degree);
    let mut c_plus = Vec::with_capacity(degree);
    for l in 1..=degree {
        let lf = l as f64;
        let u = lf / n1;
        let (s, c) = (2.0 * PI * reduce(lf * delta)).sin_cos();
        let smooth = vaaler_weight(u) * s / (PI * lf);
        let fejer = (1.0 - u) * c / n1;
        c_minus.push(smooth - fejer);
        c_plus.push(smooth + fejer);
    }
    Ok(SandwichPair { degree, delta, c_minus, c_plus })
}

/// `t mod 1` into `[0, 1)`.
fn reduce(t: f64) -> f64 {
    t.rem_euclid(1.0)
}

/// Terms between exact re-synchronisations of the rotation in [`cos_sums`].
const RESYNC: usize = 32;

impl SandwichPair {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `c_l^-` for `l = 1..=L` (index `l - 1`).
    pub fn c_minus(&self) -> &[f64] {
        &self.c_minus
    }

    pub fn c_plus(&self) -> &[f64] {
        &self.c_plus
    }

    pub fn coefficients(&self, side: Side) -> &[f64] {
        match side {
            Side::Lower => &self.c_minus,
            Side::Upper => &self.c_plus,
        }
    }

    /// `c_l` on `side` for `1 <= |l| <= L`, zero beyond.
    pub fn coefficient(&self, side: Side, l: i64) -> f64 {
        let k = l.unsigned_abs() as usize;
        if k == 0 || k > self.degree {
            0.0
        } else {
            self.coefficients(side)[k - 1]
        }
    }

    /// Constant term `2 delta -+ 1/(L+1)`.
    pub fn constant(&self, side: Side) -> f64 {
        let gap = 1.0 / (self.degree + 1) as f64;
        match side {
            Side::Lower => 2.0 * self.delta - gap,
            Side::Upper => 2.0 * self.delta + gap,
        }
    }

    /// `(lower(theta), upper(theta))` with one pass over the cosines.
    pub fn eval_both(&self, theta: f64) -> (f64, f64) {
        let (lo, hi) = cos_sums(&self.c_minus, &self.c_plus, theta);
        (self.constant(Side::Lower) + 2.0 * lo, self.constant(Side::Upper) + 2.0 * hi)
    }

    /// Coefficient table as CSV with header `l,c_minus,c_plus`, from `l = 0`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,c_minus,c_plus\n");
        let _ = writeln!(out, "0,{:e},{:e}", self.constant(Side::Lower), self.constant(Side::Upper));
        for l in 0..self.degree {
            let _ = writeln!(out, "{},{:e},{:e}", l + 1, self.c_minus[l], self.c_plus[l]);
        }
        out
    }
}

/// `(sum a_l cos(2 pi l theta), sum b_l cos(2 pi l theta))` for `l = 1..`.
///
/// Cosines come from repeated multiplication by `e(theta)`, re-anchored to an
/// exact `sin_cos` every [`RESYNC`] terms so rounding cannot accumulate.
fn cos_sums(a: &[f64], b: &[f64], theta: f64) -> (f64, f64) {
    let theta = reduce(theta);
    let (ss, cs) = (2.0 * PI * theta).sin_cos();
    let (mut sa, mut sb) = (0.0, 0.0);
    let mut l = 1usize;
    while l <= a.len() {
        let (mut s, mut c) = (2.0 * PI * reduce(l as f64 * theta)).sin_cos();
        let end = (l + RESYNC).min(a.len() + 1);
        let (mut ba, mut bb) = (0.0, 0.0);
        for k in l..end {
            ba += a[k - 1] * c;
            bb += b[k - 1] * c;
            let c2 = c * cs - s * ss;
            s = s * cs + c * ss;
            c = c2;
        }
        sa += ba;
        sb += bb;
        l = end;
    }
    (sa, sb)
}

/// Full polynomial value, constant term included.
pub fn eval_sandwich(pair: &SandwichPair, side: Side, theta: f64) -> f64 {
    pair.constant(side) + oscillatory_part(pair, side, theta)
}

/// `sum_{0 < |l| <= L} c_l e(l theta)`, i.e. the polynomial without its constant term.
pub fn oscillatory_part(pair: &SandwichPair, side: Side, theta: f64) -> f64 {
    let c = pair.coefficients(side);
    2.0 * cos_sums(c, c, theta).0
}

/// Indicator of `||theta|| < delta`.
pub fn chi(theta: f64, delta: f64) -> bool {
    let t = reduce(theta);
    t.min(1.0 - t) < delta
}

/// Tolerance for [`check_sandwich`].
pub const SANDWICH_TOLERANCE: f64 = 1e-9;

/// Points at and just around the discontinuities `+-delta`.
pub fn edge_points(delta: f64) -> Vec<f64> {
    let offsets = [0.0, 1e-12, -1e-12, 1e-9, -1e-9, 1e-6, -1e-6];
    [delta, 1.0 - delta].iter().flat_map(|&e| offsets.iter().map(move |&o| reduce(e + o))).collect()
}

/// Grid points `j / grid_points` plus [`edge_points`] where
/// `lower > chi + tol` or `upper < chi - tol`.
pub fn check_sandwich(pair: &SandwichPair, grid_points: usize) -> usize {
    let n = grid_points.max(1);
    let grid: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).chain(edge_points(pair.delta)).collect();
    count_violations(pair, &grid)
}

/// Violations of the sandwich at arbitrary points.
pub fn count_violations(pair: &SandwichPair, points: &[f64]) -> usize {
    points
        .par_iter()
        .filter(|&&t| {
            let x = if chi(t, pair.delta) { 1.0 } else { 0.0 };
            let (lo, hi) = pair.eval_both(t);
            lo > x + SANDWICH_TOLERANCE || hi < x - SANDWICH_TOLERANCE
        })
        .count()
}
