//! Type I and Type II sums against their predictors, and the Perron integral.

use dioph_smooth::diophantine::{cf_expand, fixed_point_value, select_denominator, RealLiteral, DEFAULT_MAX_TERMS};
use dioph_smooth::expsums::{
    geometric_phase_sum, perron_indicator, type1_predictor, type1_sum, type2_predictor, type2_sum, CoefficientClass,
    Regime,
};
use dioph_smooth::fourier::{build_sandwich, Side};

fn main() -> dioph_smooth::Result<()> {
    println!("sum e(n/3), n <= 7: {:.6}", geometric_phase_sum(1.0 / 3.0, 7));

    let lit: RealLiteral = "sqrt(2)".parse()?;
    let alpha = fixed_point_value(&lit, 128)?;
    let cf = cf_expand(lit.as_surd().expect("surd"), DEFAULT_MAX_TERMS)?;
    let x = 10_000u64;
    let q = select_denominator(x, &cf)?.q_u64().expect("small") as f64;
    let delta = (x as f64).powf(-0.15);
    let pair = build_sandwich(delta, x as usize)?;
    for m in [6, 39, 251] {
        for a in [CoefficientClass::Unit, CoefficientClass::Moebius] {
            let s = type1_sum(&alpha, x, m, &a, &pair, Side::Upper)?;
            let p = type1_predictor(x as f64, m as f64, q, delta, 2.0);
            println!("type I  M = {m:>3} a = {a:<8} |S| = {:>9.3}  ratio {:.2e}", s.norm(), s.norm() / p);
        }
    }

    let x = 5000u64;
    let pair = build_sandwich((x as f64).powf(-0.15), x as usize)?;
    for m in [20, 70, 500] {
        let s = type2_sum(&alpha, x, m, &CoefficientClass::Unit, &CoefficientClass::Moebius, &pair, Side::Upper)?;
        let regime = Regime::for_m(x as f64, m as f64);
        let p = type2_predictor(x as f64, m as f64, 408.0, pair.delta(), regime, 2.0);
        println!("type II M = {m:>3} ({regime}) |S| = {:>9.3}  ratio {:.2e}", s.norm(), s.norm() / p);
    }

    for gamma in [0.0, 0.35, 1.4] {
        println!("Perron gamma = {gamma}: {:.6}", perron_indicator(gamma, 0.7, 1000.0)?);
    }
    Ok(())
}
