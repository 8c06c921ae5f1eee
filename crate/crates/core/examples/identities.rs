//! Exact sieve identities and the 2 delta comparisons by region.

use dioph_smooth::experiments::{
    render_report, run_buchstab_check, run_role_reversal_check, run_sieve_lemma_check, ExperimentConfig, ReportFormat,
    SieveRegion, WindowSpec, XSource,
};

fn main() -> dioph_smooth::Result<()> {
    let config = ExperimentConfig {
        window: WindowSpec::Absolute { y: 10, z: 1000 },
        xs: XSource::Explicit(vec![100_000]),
        delta: Some(0.1),
        ..Default::default()
    };
    print!("{}", render_report(&run_buchstab_check(&config)?, ReportFormat::Csv)?);

    let config = ExperimentConfig {
        window: WindowSpec::Absolute { y: 20, z: 10_000 },
        xs: XSource::Explicit(vec![10_000, 10_082]),
        ..Default::default()
    };
    print!("{}", render_report(&run_role_reversal_check(&config)?, ReportFormat::Csv)?);

    let config = ExperimentConfig {
        window: WindowSpec::Absolute { y: 2, z: 1_000_000 },
        xs: XSource::Explicit(vec![1_000_000]),
        ..Default::default()
    };
    let mut rows = Vec::new();
    for region in [SieveRegion::Low, SieveRegion::Mid, SieveRegion::High] {
        rows.extend(run_sieve_lemma_check(&config, region, false)?);
        rows.extend(run_sieve_lemma_check(&config, region, true)?);
    }
    print!("{}", render_report(&rows, ReportFormat::Csv)?);
    Ok(())
}
