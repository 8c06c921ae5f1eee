//! Certified ||alpha n + beta|| and the three-valued indicator.

use dioph_smooth::diophantine::{chi_indicator, fixed_point_value, nearest_distance, FixedPointReal, RealLiteral};

fn main() -> dioph_smooth::Result<()> {
    let alpha = fixed_point_value(&"sqrt(2)".parse::<RealLiteral>()?, 128)?;
    let beta = fixed_point_value(&"1/3".parse::<RealLiteral>()?, 128)?;
    let delta = FixedPointReal::from_f64(0.01, 128)?;
    for n in [1u64, 12, 985, 5741, 1_000_000_007] {
        let d = nearest_distance(&alpha, n, &beta)?;
        println!(
            "n = {n:>10}: ||alpha n + beta|| = {:.15} +- {:.1e}  {:?}",
            d.value(),
            d.uncertainty(),
            chi_indicator(&d, &delta)
        );
    }

    // Low precision leaves fewer certified bits as n grows.
    let coarse = fixed_point_value(&"sqrt(2)".parse::<RealLiteral>()?, 40)?;
    let zero = FixedPointReal::from_f64(0.0, 40)?;
    match nearest_distance(&coarse, 1 << 20, &zero) {
        Ok(d) => println!("40 bits, n = 2^20: {:.6} +- {:.1e}", d.value(), d.uncertainty()),
        Err(e) => println!("40 bits, n = 2^20: {e}"),
    }
    println!("40 bits, n = 2^30: {:?}", nearest_distance(&coarse, 1 << 30, &zero).err());
    Ok(())
}
