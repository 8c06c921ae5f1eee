use std::f64::consts::PI;

use crate::error::{precondition, Result};

/// `perron_indicator` refuses `||gamma| - rho|` below this gap.
pub const PERRON_MIN_GAP: f64 = 1e-6;

/// `(1/pi) int_{-T}^{T} e^{i gamma t} sin(rho t) / t dt`.
///
/// The odd part of the integrand cancels, leaving
/// `(2/pi) int_0^T cos(gamma t) sin(rho t) / t dt`, which is integrated by
/// adaptive Gauss-Kronrod (7/15) on panels a quarter-period wide.
pub fn perron_indicator(gamma: f64, rho: f64, t_max: f64) -> Result<f64> {
    if !(rho > 0.0 && t_max > 0.0 && gamma.is_finite() && rho.is_finite() && t_max.is_finite()) {
        return precondition("perron_indicator needs rho > 0, T > 0, finite arguments");
    }
    if (gamma.abs() - rho).abs() < PERRON_MIN_GAP {
        return precondition(format!("|gamma| = {} is within {PERRON_MIN_GAP} of rho = {rho}", gamma.abs()));
    }
    let f = |t: f64| {
        let rt = rho * t;
        let sinc = if rt.abs() < 1e-4 { rho * (1.0 - rt * rt / 6.0) } else { rt.sin() / t };
        (gamma * t).cos() * sinc
    };
    let panel = 0.5 * PI / (gamma.abs() + rho);
    let panels = (t_max / panel).ceil().max(1.0) as usize;
    let h = t_max / panels as f64;
    let total: f64 = (0..panels).map(|i| adaptive_gk(&f, i as f64 * h, (i + 1) as f64 * h, 1e-14, 0)).sum();
    Ok(2.0 / PI * total)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// `(kronrod, gauss)` on `[a, b]`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let pair = f(c - h * XGK[j]) + f(c + h * XGK[j]);
        k += WGK[j] * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    (k * h, g * h)
}

fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, g) = gk15(f, a, b);
    if (k - g).abs() <= tol || depth >= 30 {
        return k;
    }
    let m = 0.5 * (a + b);
    adaptive_gk(f, a, m, tol / 2.0, depth + 1) + adaptive_gk(f, m, b, tol / 2.0, depth + 1)
}
