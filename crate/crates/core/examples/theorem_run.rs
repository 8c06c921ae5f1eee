//! Smooth numbers in short intervals of alpha n + beta mod 1, against 2 delta Psi,
//! with a CSV report.

use dioph_smooth::experiments::{
    render_report, run_squarefree_theorem, run_theorem, ExperimentConfig, ReportFormat, WindowSpec, XSource,
};

fn main() -> dioph_smooth::Result<()> {
    let config = ExperimentConfig {
        alpha: "sqrt(2)".parse()?,
        beta: "1/3".parse()?,
        eps: 0.1,
        window: WindowSpec::Exponents { u1: 8.0, u2: 3.0 },
        xs: XSource::parse_convergents("8..12:2")?,
        ..Default::default()
    };
    let rows = run_theorem(&config)?;
    print!("{}", render_report(&rows, ReportFormat::Csv)?);
    for r in &rows {
        if let Some((lo, hi)) = r.bracket {
            println!("x = {}: {lo:.1} <= {} <= {hi:.1}", r.x, r.observed);
        }
    }
    let sf = run_squarefree_theorem(&config)?;
    for (a, b) in rows.iter().zip(&sf) {
        println!("x = {}: observed {} plain, {} squarefree", a.x, a.observed, b.observed);
    }
    Ok(())
}
