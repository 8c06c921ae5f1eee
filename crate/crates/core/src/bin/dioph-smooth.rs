use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dioph_smooth::diophantine::{cf_expand, fixed_point_value, select_denominator, RealLiteral, DEFAULT_MAX_TERMS};
use dioph_smooth::experiments::{
    self as exp, emit_report, parse_count, Cell, ExperimentConfig, ReportFormat, SieveRegion, Tabular, WindowSpec,
    XSource,
};
use dioph_smooth::expsums::{
    perron_indicator, type1_predictor, type1_sum, type2_predictor, type2_sum, BoundReport, CoefficientClass, Regime,
    DEFAULT_KAPPA,
};
use dioph_smooth::fourier::{build_sandwich, check_sandwich, Side};
use dioph_smooth::sieve::{psi_count_with, psi_recursive, SieveConfig, SmoothnessWindow, Strategy};
use dioph_smooth::{Error, Result};

#[derive(Parser)]
#[command(
    name = "dioph-smooth",
    version,
    about = "Smooth numbers in Diophantine approximation: experiments and checks"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count smooth n <= x with ||alpha n + beta|| < delta against 2 delta Psi.
    Theorem(Common),
    /// The same over squarefree smooth numbers.
    TheoremSquarefree(Common),
    /// Exact split of window-smooth members by largest prime factor.
    Buchstab(Common),
    /// Both sides of the large-prime role reversal.
    RoleReversal(Common),
    /// 2 delta comparison of the sums over S(A_p; y, p) in one region.
    SieveLemma {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "mid")]
        region: String,
    },
    /// Smooth n = ab near the approximation threshold x^(-1/3 + eps).
    LowerBound(Common),
    /// Violations of the sandwich inequality on a grid.
    SandwichCheck {
        #[arg(long)]
        delta: f64,
        #[arg(long = "L")]
        degree: usize,
        #[arg(long, default_value_t = 100_000)]
        grid: usize,
        /// Print the coefficient table instead of the summary row.
        #[arg(long)]
        coefficients: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Exponential sums and the Perron integral.
    Expsum {
        #[command(subcommand)]
        kind: ExpsumKind,
    },
    /// Smooth-number counts.
    Psi {
        #[command(subcommand)]
        kind: PsiKind,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "sqrt(2)")]
    alpha: String,
    #[arg(long, default_value = "0")]
    beta: String,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Fixed delta instead of x^(-1/4 + eps).
    #[arg(long)]
    delta: Option<f64>,
    /// y,z | abs:y,z | exp:u1,u2
    #[arg(long, default_value = "exp:8,3")]
    window: String,
    /// Comma list (1e4 allowed) or start..stop:step.
    #[arg(long, conflicts_with = "convergents")]
    x: Option<String>,
    /// Convergent indices, e.g. 8..14:2.
    #[arg(long)]
    convergents: Option<String>,
    #[arg(long)]
    squarefree: bool,
    #[arg(long, default_value_t = 128)]
    frac_bits: u32,
    #[arg(long = "L", default_value = "auto")]
    degree: String,
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    #[arg(long = "C", default_value_t = 10.0)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

impl Common {
    fn config(&self, threads: Option<usize>) -> Result<ExperimentConfig> {
        let xs = match (&self.x, &self.convergents) {
            (Some(x), _) => XSource::parse_xs(x)?,
            (None, Some(c)) => XSource::parse_convergents(c)?,
            (None, None) => XSource::Convergents(vec![8, 10]),
        };
        let config = ExperimentConfig {
            alpha: self.alpha.parse()?,
            beta: self.beta.parse()?,
            eps: self.eps,
            delta: self.delta,
            window: self.window.parse()?,
            xs,
            squarefree: self.squarefree,
            degree: self.degree.parse()?,
            frac_bits: self.frac_bits,
            kappa: self.kappa,
            c: self.c,
            threads,
            seed: self.seed,
            out: self.output.out.clone(),
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Lower,
    Upper,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Auto,
    Low,
    High,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Segmented,
    Products,
}

#[derive(Args)]
struct SumArgs {
    #[arg(long, default_value = "sqrt(2)")]
    alpha: String,
    #[arg(long, value_parser = parse_u64)]
    x: u64,
    #[arg(long = "M", value_parser = parse_u64)]
    m: u64,
    /// unit | moebius | tau | prime
    #[arg(long, default_value = "unit")]
    a: String,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Sandwich delta (default x^(-1/4 + eps)).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "L", value_parser = parse_u64)]
    degree: Option<u64>,
    #[arg(long, value_enum, default_value = "upper")]
    side: SideArg,
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    kappa: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum ExpsumKind {
    Type1(SumArgs),
    Type2 {
        #[command(flatten)]
        sum: SumArgs,
        #[arg(long, default_value = "moebius")]
        b: String,
        #[arg(long, value_enum, default_value = "auto")]
        regime: RegimeArg,
    },
    Perron {
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long = "T")]
        t: f64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct PsiArgs {
    #[arg(long, value_parser = parse_u64)]
    x: u64,
    /// y,z
    #[arg(long)]
    window: String,
    #[arg(long)]
    squarefree: bool,
}

#[derive(Subcommand)]
enum PsiKind {
    Count {
        #[command(flatten)]
        args: PsiArgs,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    Recursive(PsiArgs),
}

fn parse_u64(s: &str) -> std::result::Result<u64, String> {
    parse_count(s).ok_or_else(|| format!("not a nonnegative integer: {s}"))
}

struct SandwichRow {
    delta: f64,
    degree: usize,
    grid: usize,
    violations: usize,
    gap: f64,
}

impl Tabular for SandwichRow {
    fn columns() -> &'static [&'static str] {
        &["delta", "L", "grid", "violations", "mean_gap"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![self.delta.into(), self.degree.into(), self.grid.into(), self.violations.into(), self.gap.into()]
    }
}

struct PerronRow {
    gamma: f64,
    rho: f64,
    t: f64,
    value: f64,
    indicator: f64,
    scaled_error: f64,
}

impl Tabular for PerronRow {
    fn columns() -> &'static [&'static str] {
        &["gamma", "rho", "T", "value", "indicator", "error_times_T_gap"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.gamma.into(),
            self.rho.into(),
            self.t.into(),
            self.value.into(),
            self.indicator.into(),
            self.scaled_error.into(),
        ]
    }
}

fn emit<T: Tabular>(rows: &[T], output: &Output) -> Result<()> {
    emit_report(rows, output.format.parse::<ReportFormat>()?, output.out.as_deref())
}

fn fail(msg: String) -> Result<()> {
    Err(Error::Assertion(msg))
}

fn run_theorem_cmd(common: &Common, threads: Option<usize>, squarefree: bool) -> Result<()> {
    let config = common.config(threads)?;
    let rows = if squarefree { exp::run_squarefree_theorem(&config)? } else { exp::run_theorem(&config)? };
    emit(&rows, &common.output)?;
    for r in &rows {
        if r.boundary > 0 {
            eprintln!("warning: x = {}: {} boundary cases left undecided", r.x, r.boundary);
        }
    }
    match rows.iter().find(|r| !r.within_budget() || r.bracket_holds() == Some(false)) {
        Some(r) => fail(format!("x = {}: error {} vs budget {}, bracket {:?}", r.x, r.error, r.budget, r.bracket)),
        None => Ok(()),
    }
}

fn sum_report(args: &SumArgs, b: Option<(&str, RegimeArg)>) -> Result<BoundReport> {
    let alpha_lit: RealLiteral = args.alpha.parse()?;
    let alpha = fixed_point_value(&alpha_lit, 128)?;
    let surd = alpha_lit.as_surd().ok_or_else(|| Error::Config("alpha must be a quadratic irrational".into()))?;
    let q = select_denominator(args.x.max(2), &cf_expand(surd, DEFAULT_MAX_TERMS)?)?
        .q_u64()
        .ok_or_else(|| Error::Resource("denominator exceeds 64 bits".into()))?;
    let xf = args.x as f64;
    let delta = args.delta.unwrap_or_else(|| xf.powf(-0.25 + args.eps));
    let degree = args.degree.unwrap_or(args.x).max(1) as usize;
    let pair = build_sandwich(delta, degree)?;
    let side = match args.side {
        SideArg::Lower => Side::Lower,
        SideArg::Upper => Side::Upper,
    };
    let a: CoefficientClass = args.a.parse()?;
    let (kind, coefficients, lhs, predictor) = match b {
        None => (
            "type1".to_string(),
            a.to_string(),
            type1_sum(&alpha, args.x, args.m, &a, &pair, side)?,
            type1_predictor(xf, args.m as f64, q as f64, delta, args.kappa),
        ),
        Some((b, regime)) => {
            let b: CoefficientClass = b.parse()?;
            let regime = match regime {
                RegimeArg::Auto => Regime::for_m(xf, args.m as f64),
                RegimeArg::Low => Regime::Low,
                RegimeArg::High => Regime::High,
            };
            if regime != Regime::for_m(xf, args.m as f64) {
                eprintln!("warning: regime {regime} does not match M = {} against x^(1/2)", args.m);
            }
            (
                format!("type2-{regime}"),
                format!("{a}/{b}"),
                type2_sum(&alpha, args.x, args.m, &a, &b, &pair, side)?,
                type2_predictor(xf, args.m as f64, q as f64, delta, regime, args.kappa),
            )
        }
    };
    Ok(BoundReport {
        kind,
        coefficients,
        x: args.x,
        m: args.m,
        q,
        delta,
        degree,
        kappa: args.kappa,
        lhs_abs: lhs.norm(),
        predictor,
        ratio: lhs.norm() / predictor,
    })
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    }
    let threads = cli.threads;
    match cli.command {
        Command::Theorem(c) => run_theorem_cmd(&c, threads, c.squarefree),
        Command::TheoremSquarefree(c) => run_theorem_cmd(&c, threads, true),
        Command::Buchstab(c) => {
            let rows = exp::run_buchstab_check(&c.config(threads)?)?;
            emit(&rows, &c.output)?;
            match rows.iter().find(|r| !r.holds()) {
                Some(r) => fail(format!("buchstab residual {} at x = {}", r.residual, r.x)),
                None => Ok(()),
            }
        }
        Command::RoleReversal(c) => {
            let rows = exp::run_role_reversal_check(&c.config(threads)?)?;
            emit(&rows, &c.output)?;
            match rows.iter().find(|r| !r.holds()) {
                Some(r) => fail(format!("role-reversal residual {} exceeds tau(x) = {}", r.residual, r.residual_bound)),
                None => Ok(()),
            }
        }
        Command::SieveLemma { common, region } => {
            let region: SieveRegion = region.parse()?;
            let rows = exp::run_sieve_lemma_check(&common.config(threads)?, region, common.squarefree)?;
            emit(&rows, &common.output)
        }
        Command::LowerBound(c) => {
            let rows = exp::run_lower_bound_demo(&c.config(threads)?)?;
            for r in rows.iter().filter(|r| r.empty_construction) {
                eprintln!("warning: x = {}: no x^eps-smooth a in [x^(1/3), 2x^(1/3))", r.x);
            }
            emit(&rows, &c.output)
        }
        Command::SandwichCheck { delta, degree, grid, coefficients, output } => {
            let pair = build_sandwich(delta, degree)?;
            if coefficients {
                let text = pair.to_csv();
                return match &output.out {
                    Some(p) => Ok(std::fs::write(p, text)?),
                    None => {
                        print!("{text}");
                        Ok(())
                    }
                };
            }
            let violations = check_sandwich(&pair, grid);
            let gap = pair.constant(Side::Upper) - pair.constant(Side::Lower);
            emit(&[SandwichRow { delta, degree, grid, violations, gap }], &output)?;
            if violations > 0 {
                return fail(format!("{violations} sandwich violations"));
            }
            Ok(())
        }
        Command::Expsum { kind } => match kind {
            ExpsumKind::Type1(args) => emit(&[sum_report(&args, None)?], &args.output),
            ExpsumKind::Type2 { sum, b, regime } => emit(&[sum_report(&sum, Some((&b, regime)))?], &sum.output),
            ExpsumKind::Perron { gamma, rho, t, output } => {
                let value = perron_indicator(gamma, rho, t)?;
                let indicator = if gamma.abs() < rho { 1.0 } else { 0.0 };
                let scaled_error = (value - indicator).abs() * t * (gamma.abs() - rho).abs();
                emit(&[PerronRow { gamma, rho, t, value, indicator, scaled_error }], &output)
            }
        },
        Command::Psi { kind } => {
            let (args, strategy) = match kind {
                PsiKind::Count { args, strategy } => (args, Some(strategy)),
                PsiKind::Recursive(args) => (args, None),
            };
            let window = match args.window.parse::<WindowSpec>()? {
                WindowSpec::Absolute { y, z } => SmoothnessWindow::new(y, z)?,
                w => w.resolve(args.x)?,
            };
            let count = match strategy {
                None => psi_recursive(args.x, window, args.squarefree)?,
                Some(s) => {
                    let strategy = match s {
                        StrategyArg::Auto => Strategy::Auto,
                        StrategyArg::Segmented => Strategy::Segmented,
                        StrategyArg::Products => Strategy::Products,
                    };
                    psi_count_with(args.x, window, args.squarefree, &SieveConfig { strategy, ..Default::default() })?
                }
            };
            println!("{count}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
