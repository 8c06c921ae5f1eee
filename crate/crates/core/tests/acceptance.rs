//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dioph_smooth::diophantine::{
    cf_expand, convergents, fixed_point_value, max_partial_quotient, select_denominator, x_from_q, ContinuedFraction,
    FixedPointReal, QuadraticSurd, RealLiteral, DEFAULT_MAX_TERMS,
};
use dioph_smooth::experiments::{
    run_buchstab_check, run_role_reversal_check, run_squarefree_theorem, run_theorem, ExperimentConfig, TheoremRow,
    WindowSpec, XSource,
};
use dioph_smooth::expsums::{
    geometric_phase_sum, perron_indicator, type1_predictor, type1_sum, type2_predictor, type2_sum, CoefficientClass,
    Regime,
};
use dioph_smooth::fourier::{build_sandwich, check_sandwich, Side};
use dioph_smooth::sieve::{enumerate_smooth, iroot, psi_count, psi_recursive, SmoothnessWindow};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn brute_psi(x: u64, y: u64, z: u64, squarefree: bool) -> u64 {
    (1..=x)
        .filter(|&n| {
            let (mut m, mut p) = (n, 2);
            while m > 1 {
                if m % p == 0 {
                    m /= p;
                    if p < y || p > z || (squarefree && m % p == 0) {
                        return false;
                    }
                } else {
                    p += 1;
                }
            }
            true
        })
        .count() as u64
}

fn oracle_equality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut compared = 0;
    for _ in 0..200 {
        let x = rng.gen_range(1..=1_000_000u64);
        let y = rng.gen_range(2..=200u64);
        let z = match rng.gen_range(0..3) {
            0 => y + rng.gen_range(0..50),
            1 => y + rng.gen_range(0..5000),
            _ => y.max(rng.gen_range(2..=x.max(2))),
        };
        let w = SmoothnessWindow::new(y, z).map_err(e)?;
        for sf in [false, true] {
            let a = psi_recursive(x, w, sf).map_err(e)?;
            let b = psi_count(x, w, sf).map_err(e)?;
            ensure(a == b, || format!("x = {x}, [{y}, {z}], squarefree {sf}: recursion {a} vs stream {b}"))?;
            compared += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{compared} comparisons equal in {secs:.1} s"))
}

fn hand_values() -> Outcome {
    let w = |y, z| SmoothnessWindow::new(y, z).unwrap();
    let cases = [(100, 2, 5, false, 34), (10, 2, 3, false, 7), (50, 3, 7, true, 7), (100, 2, 100, false, 100)];
    for (i, &(x, y, z, sf, want)) in cases.iter().enumerate() {
        let got = psi_count(x, w(y, z), sf).map_err(e)?;
        let rec = psi_recursive(x, w(y, z), sf).map_err(e)?;
        ensure(got == want && rec == want, || format!("Psi({x}; {y}, {z}) = {got} / {rec}, want {want}"))?;
        if i < 3 {
            let b = brute_psi(x, y, z, sf);
            ensure(b == want, || format!("brute force gives {b} for Psi({x}; {y}, {z})"))?;
        }
    }
    Ok("34, 7, 7, 100".into())
}

fn sandwich_suite() -> Outcome {
    let mut worst_gap = 0f64;
    for delta in [0.1, 0.01, 0.001] {
        for l in [10usize, 100, 1000, 10_000] {
            let pair = build_sandwich(delta, l).map_err(e)?;
            let v = check_sandwich(&pair, 100_000);
            ensure(v == 0, || format!("delta {delta}, L {l}: {v} violations"))?;
            let cap0 = 2.0 * delta + 1.0 / (l as f64 + 1.0);
            for side in [Side::Lower, Side::Upper] {
                for (i, &c) in pair.coefficients(side).iter().enumerate() {
                    let bound = cap0.min(1.5 / (i + 1) as f64);
                    ensure(c.abs() <= bound, || format!("delta {delta}, L {l}: |c_{}| = {c} > {bound}", i + 1))?;
                }
            }
            let gap = pair.constant(Side::Upper) - pair.constant(Side::Lower);
            let dev = (gap - 2.0 / (l as f64 + 1.0)).abs();
            worst_gap = worst_gap.max(dev);
            ensure(dev <= 1e-10, || format!("delta {delta}, L {l}: mean gap {gap}"))?;
        }
    }
    Ok(format!("12 pairs, no violations, worst gap deviation {worst_gap:.1e}"))
}

fn integer_sqrt(n: u128) -> u128 {
    let (mut lo, mut hi) = (0u128, 1u128 << 64);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if mid.checked_mul(mid).is_some_and(|m| m <= n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn check_convergents(name: &str, surd: &QuadraticSurd, cf: &ContinuedFraction) -> Result<(), String> {
    let cs = convergents(cf, 50);
    let a_max = BigInt::from(max_partial_quotient(cf) + 1);
    for s in 1..cs.len() {
        let (c, prev) = (&cs[s], &cs[s - 1]);
        let det = &c.p * &prev.q - &prev.p * &c.q;
        let want = if s % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        ensure(det == want, || format!("{name}: determinant {det} at s = {s}"))?;
        ensure(c.q <= &a_max * &prev.q, || format!("{name}: q_{s} > (A+1) q_{}", s - 1))?;
    }
    for c in &cs {
        ensure(c.approximates(surd), || format!("{name}: |alpha - p/q| >= 1/q^2 at s = {}", c.s))?;
    }
    Ok(())
}

fn continued_fractions() -> Outcome {
    let sqrt2 = QuadraticSurd::sqrt(2).map_err(e)?;
    let golden = QuadraticSurd::new(1, 5, 2).map_err(e)?;
    let sqrt7 = QuadraticSurd::sqrt(7).map_err(e)?;
    let cf2 = cf_expand(&sqrt2, DEFAULT_MAX_TERMS).map_err(e)?;
    let cfg = cf_expand(&golden, DEFAULT_MAX_TERMS).map_err(e)?;
    let cf7 = cf_expand(&sqrt7, DEFAULT_MAX_TERMS).map_err(e)?;
    ensure(cf2.period == vec![2], || format!("sqrt(2) period {:?}", cf2.period))?;
    ensure(cfg.period == vec![1], || format!("golden period {:?}", cfg.period))?;
    ensure(max_partial_quotient(&cfg) == 1, || "golden ratio not in I(1)".into())?;
    ensure(cf7.period == vec![1, 1, 1, 4], || format!("sqrt(7) period {:?}", cf7.period))?;
    check_convergents("sqrt(2)", &sqrt2, &cf2)?;
    check_convergents("golden", &golden, &cfg)?;
    check_convergents("sqrt(7)", &sqrt7, &cf7)?;
    let qg = select_denominator(10_000, &cfg).map_err(e)?.q;
    let q2 = select_denominator(10_000, &cf2).map_err(e)?.q;
    ensure(qg == BigInt::from(610) && q2 == BigInt::from(985), || format!("select_denominator gave {qg}, {q2}"))?;
    let x = x_from_q(985).map_err(e)?;
    let oracle = integer_sqrt(985u128.pow(3));
    ensure(x == 30913 && x as u128 == oracle, || format!("x_from_q(985) = {x}, oracle {oracle}"))?;
    Ok("periods (2), (1), (1,1,1,4); 50 convergents each; 610, 985, 30913".into())
}

fn theorem_config(beta: &str, squarefree: bool) -> ExperimentConfig {
    ExperimentConfig {
        alpha: "sqrt(2)".parse().unwrap(),
        beta: beta.parse().unwrap(),
        eps: 0.1,
        window: WindowSpec::Exponents { u1: 8.0, u2: 3.0 },
        xs: XSource::Convergents(vec![8, 10, 12, 14]),
        squarefree,
        c: 10.0,
        kappa: 0.0,
        ..Default::default()
    }
}

const BETAS: [&str; 2] = ["0", "1/3"];

fn check_rows(rows: &[TheoremRow]) -> Result<f64, String> {
    let qs: Vec<u64> = rows.iter().map(|r| r.q).collect();
    ensure(qs == [985, 5741, 33461, 195025], || format!("denominators {qs:?}"))?;
    for r in rows {
        let budget = 10.0 * (r.x as f64).powf(0.8);
        ensure(r.error <= budget, || format!("x = {}: error {} > {budget}", r.x, r.error))?;
        ensure(r.observed + r.out + r.boundary == r.psi, || format!("x = {}: counts do not sum to Psi", r.x))?;
    }
    let last = rows.last().unwrap();
    ensure(last.error_exponent <= 0.85, || format!("error exponent {} at x = {}", last.error_exponent, last.x))?;
    Ok(last.error_exponent)
}

fn theorem_grid(plain: &mut Vec<Vec<TheoremRow>>) -> Outcome {
    let start = Instant::now();
    let mut exps = Vec::new();
    for beta in BETAS {
        let rows = run_theorem(&theorem_config(beta, false)).map_err(e)?;
        exps.push(check_rows(&rows)?);
        plain.push(rows);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 600.0, || format!("took {secs:.0} s"))?;
    Ok(format!("8 rows within 10 x^0.8; exponent at x = 86126228: {:.3}, {:.3}; {secs:.1} s", exps[0], exps[1]))
}

fn squarefree_grid(plain: &[Vec<TheoremRow>]) -> Outcome {
    let mut exps = Vec::new();
    for (beta, plain_rows) in BETAS.iter().zip(plain) {
        let rows = run_squarefree_theorem(&theorem_config(beta, true)).map_err(e)?;
        exps.push(check_rows(&rows)?);
        for (sf, p) in rows.iter().zip(plain_rows) {
            ensure(sf.observed <= p.observed && sf.psi <= p.psi, || format!("x = {}: squarefree exceeds plain", sf.x))?;
        }
    }
    Ok(format!("8 rows within budget, subset of plain; exponents {:.3}, {:.3}", exps[0], exps[1]))
}

fn exact_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut buchstab = 0;
    for _ in 0..50 {
        let x = rng.gen_range(2..=100_000u64);
        let y = rng.gen_range(2..=60u64);
        let z = y.max(rng.gen_range(2..=x.max(2)));
        let config = ExperimentConfig {
            window: WindowSpec::Absolute { y, z },
            xs: XSource::Explicit(vec![x]),
            delta: Some(rng.gen_range(0.01..0.5)),
            beta: format!("{}/97", rng.gen_range(0..97)).parse().unwrap(),
            ..Default::default()
        };
        for r in run_buchstab_check(&config).map_err(e)? {
            ensure(r.residual == 0.0, || {
                format!("buchstab residual {} at x = {x}, [{y}, {z}], set {}", r.residual, r.set)
            })?;
            buchstab += 1;
        }
    }
    let mut worst = 0f64;
    for _ in 0..20 {
        let x = rng.gen_range(100..=10_000u64);
        let y = rng.gen_range(2..=30u64);
        let z = rng.gen_range(iroot(x.pow(3), 4)..=x);
        let config = ExperimentConfig {
            window: WindowSpec::Absolute { y, z },
            xs: XSource::Explicit(vec![x]),
            delta: Some(rng.gen_range(0.05..0.5)),
            ..Default::default()
        };
        let r = run_role_reversal_check(&config).map_err(e)?.remove(0);
        ensure(r.holds(), || format!("role reversal residual {} > tau({x}) = {}", r.residual, r.residual_bound))?;
        worst = worst.max(r.residual.abs());
    }
    Ok(format!("{buchstab} Buchstab splits exact; 20 role reversals, largest residual {worst}"))
}

fn sqrt2_fixed() -> FixedPointReal {
    fixed_point_value(&"sqrt(2)".parse::<RealLiteral>().unwrap(), 128).unwrap()
}

fn sqrt2_cf() -> ContinuedFraction {
    cf_expand(&QuadraticSurd::sqrt(2).unwrap(), DEFAULT_MAX_TERMS).unwrap()
}

/// `e(alpha k)` with `alpha k mod 1` reduced on big integers.
fn big_phase(alpha: &FixedPointReal, k: u64) -> f64 {
    let bits = alpha.frac_bits() as usize;
    let one = BigInt::one() << bits;
    let r = (alpha.mantissa() * BigInt::from(k)).mod_floor(&one);
    (r >> (bits - 53)).to_f64().unwrap() / (1u64 << 53) as f64
}

fn type1_grid() -> Outcome {
    let alpha = sqrt2_fixed();
    let cf = sqrt2_cf();
    let mut worst = 0f64;
    let mut worst_reduction = 0f64;
    for x in [10_000u64, 100_000] {
        let q = select_denominator(x, &cf).map_err(e)?.q_u64().unwrap();
        let delta = (x as f64).powf(-0.15);
        let pair = build_sandwich(delta, x as usize).map_err(e)?;
        for k in [1u32, 2, 3] {
            let m = iroot(x.pow(k), 5);
            let predictor = type1_predictor(x as f64, m as f64, q as f64, delta, 2.0);
            for a in [CoefficientClass::Unit, CoefficientClass::Moebius] {
                for side in [Side::Lower, Side::Upper] {
                    let s = type1_sum(&alpha, x, m, &a, &pair, side).map_err(e)?;
                    let ratio = s.norm() / predictor;
                    worst = worst.max(ratio);
                    ensure(ratio <= 10.0, || format!("x = {x}, M = {m}, a = {a}: ratio {ratio}"))?;
                }
            }
            // single-m reduction at m0 = M
            let mut table = vec![0.0; m as usize + 1];
            table[m as usize] = 1.0;
            let s = type1_sum(&alpha, x, m, &CoefficientClass::Custom(table), &pair, Side::Upper).map_err(e)?;
            let c = pair.coefficients(Side::Upper);
            let direct: Complex64 = (1..=c.len().min(x as usize))
                .map(|l| geometric_phase_sum(big_phase(&alpha, l as u64 * m), x / m) * c[l - 1])
                .sum();
            let diff = (s - direct).norm();
            worst_reduction = worst_reduction.max(diff);
            ensure(diff <= 1e-8, || format!("x = {x}, m0 = {m}: reduction off by {diff}"))?;
        }
    }
    Ok(format!("24 cells, largest ratio {worst:.2e}; single-m reduction within {worst_reduction:.1e}"))
}

fn type2_grid() -> Outcome {
    let alpha = sqrt2_fixed();
    let x = 5000u64;
    let q = select_denominator(x, &sqrt2_cf()).map_err(e)?.q_u64().unwrap();
    let delta = (x as f64).powf(-0.15);
    let pair = build_sandwich(delta, x as usize).map_err(e)?;
    let mut worst = 0f64;
    for m in [20u64, 70, 500] {
        let regime = Regime::for_m(x as f64, m as f64);
        let predictor = type2_predictor(x as f64, m as f64, q as f64, delta, regime, 2.0);
        for side in [Side::Lower, Side::Upper] {
            let s =
                type2_sum(&alpha, x, m, &CoefficientClass::Unit, &CoefficientClass::Moebius, &pair, side).map_err(e)?;
            let ratio = s.norm() / predictor;
            worst = worst.max(ratio);
            ensure(ratio <= 10.0, || format!("M = {m} ({regime}): ratio {ratio}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_err = 0f64;
    for _ in 0..1000 {
        let theta: f64 = rng.gen_range(-3.0..3.0);
        let n = rng.gen_range(0..=1000u64);
        let g = geometric_phase_sum(theta, n);
        let brute: Complex64 = (1..=n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 * theta).rem_euclid(1.0)))
            .sum();
        let err = (g - brute).norm();
        worst_err = worst_err.max(err);
        ensure(err <= 1e-10, || format!("theta = {theta}, N = {n}: off by {err}"))?;
        let phi = (theta - theta.round()).abs();
        let bound = (n as f64).min(0.5 / phi);
        ensure(g.norm() <= bound * (1.0 + 1e-12), || {
            format!("theta = {theta}, N = {n}: |S| = {} > {bound}", g.norm())
        })?;
    }
    Ok(format!("largest ratio {worst:.2e}; geometric sums within {worst_err:.1e} of brute force"))
}

fn perron_grid() -> Outcome {
    let mut worst = 0f64;
    for rho in [0.5, 1.0] {
        for t in [100.0, 1000.0] {
            for g in [0.0, rho / 2.0, 2.0 * rho] {
                for gamma in [g, -g] {
                    let v = perron_indicator(gamma, rho, t).map_err(e)?;
                    let ind = if gamma.abs() < rho { 1.0 } else { 0.0 };
                    let gap = (gamma.abs() - rho).abs();
                    let scaled = (v - ind).abs() * t * gap;
                    worst = worst.max(scaled);
                    ensure(scaled <= 5.0, || format!("gamma {gamma}, rho {rho}, T {t}: value {v}"))?;
                }
            }
        }
    }
    Ok(format!("24 points, largest |error| T ||gamma| - rho| = {worst:.3}"))
}

fn bracketing(plain: &[Vec<TheoremRow>]) -> Outcome {
    let mut checked = 0;
    for r in plain.iter().flatten().filter(|r| r.x <= 1_000_000) {
        let (lo, hi) = r.bracket.ok_or_else(|| format!("x = {}: no bracket sums", r.x))?;
        ensure(r.bracket_holds() == Some(true), || format!("x = {}: {lo} <= {} <= {hi} fails", r.x, r.observed))?;
        checked += 1;
    }
    ensure(checked == 4, || format!("only {checked} rows with x <= 10^6"))?;
    Ok(format!("{checked} rows bracketed"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let mut outputs = Vec::new();
    for name in ["first.csv", "second.csv"] {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_dioph-smooth"))
            .args(["--threads", "4", "theorem", "--convergents", "8..14:2", "--beta", "sqrt(3)", "--out"])
            .arg(&path)
            .status()
            .map_err(e)?;
        ensure(status.success(), || format!("theorem exited with {status}"))?;
        outputs.push(std::fs::read(&path).map_err(e)?);
    }
    ensure(outputs[0] == outputs[1], || "CSV outputs differ".into())?;
    Ok(format!("two runs, {} identical bytes", outputs[0].len()))
}

fn performance() -> Outcome {
    let start = Instant::now();
    let w = SmoothnessWindow::new(2, 464).map_err(e)?;
    let (mut count, mut last, mut sorted) = (0u64, 0u64, true);
    for n in enumerate_smooth(100_000_000, w, false).map_err(e)? {
        sorted &= n > last;
        last = n;
        count += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(sorted, || "stream not strictly ascending".into())?;
    let rec = psi_recursive(100_000_000, w, false).map_err(e)?;
    ensure(rec == count, || format!("streamed {count}, recursion {rec}"))?;
    ensure(secs <= 120.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{count} integers streamed in {secs:.1} s"))
}

fn main() {
    let mut plain = Vec::new();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut record = |name, outcome: Outcome| {
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("criterion {:>2} [{tag}] {name}: {detail}", results.len() + 1);
        results.push((name, outcome));
    };
    record("psi oracle equality", oracle_equality());
    record("hand values", hand_values());
    record("sandwich suite", sandwich_suite());
    record("continued fractions", continued_fractions());
    record("theorem grid", theorem_grid(&mut plain));
    record("squarefree theorem grid", squarefree_grid(&plain));
    record("exact identities", exact_identities());
    record("type I sums", type1_grid());
    record("type II sums", type2_grid());
    record("Perron quadrature", perron_grid());
    record("bracketing", bracketing(&plain));
    record("determinism", determinism());
    record("performance", performance());
    let failed = results.iter().filter(|(_, o)| o.is_err()).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
