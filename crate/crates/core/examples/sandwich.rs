//! Trigonometric minorant and majorant of the indicator of ||theta|| < delta.

use dioph_smooth::fourier::{build_sandwich, check_sandwich, chi, eval_sandwich, Side};

fn main() -> dioph_smooth::Result<()> {
    let pair = build_sandwich(0.1, 20)?;
    println!("constant terms: {:.6} <= 2 delta = 0.2 <= {:.6}", pair.constant(Side::Lower), pair.constant(Side::Upper));
    for i in 0..=10 {
        let t = i as f64 / 20.0;
        println!(
            "theta = {t:.2}: {:+.4} <= {} <= {:+.4}",
            eval_sandwich(&pair, Side::Lower, t),
            chi(t, 0.1) as u8,
            eval_sandwich(&pair, Side::Upper, t)
        );
    }
    for l in [10, 100, 1000] {
        let p = build_sandwich(0.01, l)?;
        println!("delta = 0.01, L = {l}: {} violations on 10^5 points", check_sandwich(&p, 100_000));
    }
    Ok(())
}
