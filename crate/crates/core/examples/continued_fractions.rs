//! Periodic continued fractions, convergents and the choice of x from q.

use dioph_smooth::diophantine::{
    cf_expand, convergents, max_partial_quotient, select_denominator, x_from_q, QuadraticSurd, DEFAULT_MAX_TERMS,
};

fn main() -> dioph_smooth::Result<()> {
    for (name, surd) in [
        ("sqrt(2)", QuadraticSurd::sqrt(2)?),
        ("golden", QuadraticSurd::new(1, 5, 2)?),
        ("sqrt(7)", QuadraticSurd::sqrt(7)?),
    ] {
        let cf = cf_expand(&surd, DEFAULT_MAX_TERMS)?;
        println!("{name}: a0 = {}, period {:?}, max partial quotient {}", cf.a0, cf.period, max_partial_quotient(&cf));
        for c in convergents(&cf, 8) {
            println!("  s = {:2}  {}/{}", c.s, c.p, c.q);
        }
        let q = select_denominator(10_000, &cf)?.q_u64().expect("small");
        println!("  q for x = 10^4: {q}, and x_from_q({q}) = {}", x_from_q(q)?);
    }
    Ok(())
}
