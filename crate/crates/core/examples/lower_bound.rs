//! Smooth n = ab with ||alpha n + beta|| < x^(-1/3 + eps).

use dioph_smooth::experiments::{render_report, run_lower_bound_demo, ExperimentConfig, ReportFormat, XSource};

fn main() -> dioph_smooth::Result<()> {
    let config =
        ExperimentConfig { eps: 0.3, xs: XSource::Explicit(vec![1_000_000, 10_000_000]), ..Default::default() };
    print!("{}", render_report(&run_lower_bound_demo(&config)?, ReportFormat::Csv)?);
    let tiny = ExperimentConfig { eps: 0.01, xs: XSource::Explicit(vec![1_000_000]), ..Default::default() };
    print!("{}", render_report(&run_lower_bound_demo(&tiny)?, ReportFormat::Csv)?);
    Ok(())
}
