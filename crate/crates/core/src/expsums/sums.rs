use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::diophantine::FixedPointReal;
use crate::error::{precondition, Error, Result};
use crate::fourier::{SandwichPair, Side};

use super::CoefficientClass;

/// Work budget, in `(l, m)` pairs, for [`type1_sum`].
pub const TYPE1_WORK_LIMIT: u64 = 4_000_000_000;

/// Largest `x` accepted by [`type2_sum`].
pub const TYPE2_X_LIMIT: u64 = 10_000;

/// `e(t) = exp(2 pi i t)`.
fn e(t: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * t.rem_euclid(1.0)).sin_cos();
    Complex64::new(c, s)
}

/// `sum_{n=1}^{N} e(n theta)`.
///
/// Closed form `e((N+1) phi / 2) sin(pi N phi) / sin(pi phi)` with `phi` the
/// representative of `theta` in `[-1/2, 1/2)`; when `|phi| < 1e-12` a
/// three-term Taylor expansion replaces the quotient.
pub fn geometric_phase_sum(theta: f64, n: u64) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let phi = theta - theta.round();
    let nf = n as f64;
    if phi.abs() < 1e-12 {
        let s1 = nf * (nf + 1.0) / 2.0;
        let s2 = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 6.0;
        return Complex64::new(nf - 2.0 * PI * PI * phi * phi * s2, 2.0 * PI * phi * s1);
    }
    let ratio = (PI * (nf * phi).rem_euclid(2.0)).sin() / (PI * phi).sin();
    e((nf + 1.0) * phi / 2.0) * ratio
}

/// Pairwise (cascade) summation in index order.
pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// The fractional part of `alpha` on a 2^-128 grid, for fast `alpha k mod 1`.
#[derive(Debug, Clone, Copy)]
pub struct AlphaPhase {
    frac: u128,
}

impl AlphaPhase {
    pub fn new(alpha: &FixedPointReal) -> Self {
        let v = alpha.rescale(128);
        let one = BigInt::one() << 128;
        let frac = v.mantissa().mod_floor(&one).to_u128().expect("reduced below 2^128");
        AlphaPhase { frac }
    }

    /// `alpha k mod 1` in `[0, 1)`.
    pub fn phase(&self, k: u64) -> f64 {
        let v = self.frac.wrapping_mul(k as u128);
        (v >> 64) as u64 as f64 * (-64f64).exp2()
    }
}

fn sum_over_l<F>(l_max: usize, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    let parts: Vec<Complex64> = (1..=l_max).into_par_iter().map(term).collect();
    pairwise_sum(&parts)
}

/// `sum_{l <= min(L, x)} c_l sum_{mn <= x, M <= m < 2M} a_m e(alpha l m n)`.
///
/// The `n`-sum is the closed form [`geometric_phase_sum`] of length
/// `floor(x / m)`.
pub fn type1_sum(
    alpha: &FixedPointReal,
    x: u64,
    m: u64,
    a: &CoefficientClass,
    pair: &SandwichPair,
    side: Side,
) -> Result<Complex64> {
    if m < 1 {
        return precondition("type1_sum needs M >= 1");
    }
    let m_hi = (2 * m - 1).min(x);
    if m > x || a.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let l_max = (pair.degree() as u64).min(x) as usize;
    let work = l_max as u64 * (m_hi - m + 1);
    if work > TYPE1_WORK_LIMIT {
        return Err(Error::Resource(format!("type1_sum needs {work} (l, m) pairs, limit {TYPE1_WORK_LIMIT}")));
    }
    let coeff = a.table(m_hi as usize)?;
    let c = pair.coefficients(side);
    let phase = AlphaPhase::new(alpha);
    Ok(sum_over_l(l_max, |l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for mm in m..=m_hi {
            let am = coeff[mm as usize];
            if am != 0.0 {
                acc += geometric_phase_sum(phase.phase(l as u64 * mm), x / mm) * am;
            }
        }
        acc * c[l - 1]
    }))
}

/// `sum_{l <= min(L, x)} c_l sum_{mn <= x, M <= m < 2M} a_m b_n e(alpha l m n)`,
/// evaluated term by term with exact phases.
pub fn type2_sum(
    alpha: &FixedPointReal,
    x: u64,
    m: u64,
    a: &CoefficientClass,
    b: &CoefficientClass,
    pair: &SandwichPair,
    side: Side,
) -> Result<Complex64> {
    if m < 1 {
        return precondition("type2_sum needs M >= 1");
    }
    if x > TYPE2_X_LIMIT {
        return Err(Error::Resource(format!("type2_sum is desk-scale: x = {x} > {TYPE2_X_LIMIT}")));
    }
    if m > x || a.is_zero() || b.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m_hi = (2 * m - 1).min(x);
    let a_tab = a.table(m_hi as usize)?;
    let b_tab = b.table((x / m) as usize)?;
    let c = pair.coefficients(side);
    let l_max = (pair.degree() as u64).min(x) as usize;
    let phase = AlphaPhase::new(alpha);
    Ok(sum_over_l(l_max, |l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for mm in m..=m_hi {
            let am = a_tab[mm as usize];
            if am == 0.0 {
                continue;
            }
            let lm = l as u64 * mm;
            let mut inner = Complex64::new(0.0, 0.0);
            for n in 1..=x / mm {
                let bn = b_tab[n as usize];
                if bn != 0.0 {
                    inner += e(phase.phase(lm * n)) * bn;
                }
            }
            acc += inner * am;
        }
        acc * c[l - 1]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::{fixed_point_value, RealLiteral};
    use crate::fourier::build_sandwich;
    use rand::{Rng, SeedableRng};

    fn brute(theta: f64, n: u64) -> Complex64 {
        (1..=n).map(|k| e(k as f64 * theta)).sum()
    }

    #[test]
    fn geometric_examples() {
        assert!((geometric_phase_sum(0.0, 7) - Complex64::new(7.0, 0.0)).norm() < 1e-12);
        assert!(geometric_phase_sum(0.5, 2).norm() < 1e-12);
        assert_eq!(geometric_phase_sum(0.3, 0), Complex64::new(0.0, 0.0));
        assert!((geometric_phase_sum(3.0 + 1e-14, 100) - brute(1e-14, 100)).norm() < 1e-10);
    }

    #[test]
    fn geometric_matches_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let theta: f64 = rng.gen_range(-2.0..2.0);
            let n = rng.gen_range(0..=1000u64);
            let g = geometric_phase_sum(theta, n);
            assert!((g - brute(theta, n)).norm() < 1e-10);
            let phi = (theta - theta.round()).abs();
            assert!(g.norm() <= (n as f64).min(0.5 / phi) * (1.0 + 1e-12) + 1e-12);
        }
    }

    fn sqrt2() -> FixedPointReal {
        fixed_point_value(&"sqrt(2)".parse::<RealLiteral>().unwrap(), 128).unwrap()
    }

    #[test]
    fn alpha_phase_matches_float() {
        let p = AlphaPhase::new(&sqrt2());
        for k in [1u64, 2, 5, 1000, 123_456] {
            let f = (k as f64 * 2f64.sqrt()).fract();
            assert!((p.phase(k) - f).abs() < 1e-9);
        }
    }

    #[test]
    fn trivial_type_sums() {
        let pair = build_sandwich(0.2, 50).unwrap();
        let alpha = sqrt2();
        let zero = CoefficientClass::Custom(vec![0.0; 10]);
        assert_eq!(type1_sum(&alpha, 1000, 10, &zero, &pair, Side::Upper).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(
            type1_sum(&alpha, 100, 200, &CoefficientClass::Unit, &pair, Side::Upper).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            type2_sum(&alpha, 1000, 10, &CoefficientClass::Unit, &zero, &pair, Side::Upper).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(type2_sum(&alpha, 20_000, 10, &CoefficientClass::Unit, &CoefficientClass::Unit, &pair, Side::Upper)
            .is_err());
    }

    #[test]
    fn unit_type2_reduces_to_type1() {
        let pair = build_sandwich(0.15, 200).unwrap();
        let alpha = sqrt2();
        for (x, m) in [(1000u64, 10u64), (2000, 40), (3000, 700)] {
            let t1 = type1_sum(&alpha, x, m, &CoefficientClass::Moebius, &pair, Side::Lower).unwrap();
            let t2 = type2_sum(&alpha, x, m, &CoefficientClass::Moebius, &CoefficientClass::Unit, &pair, Side::Lower)
                .unwrap();
            assert!((t1 - t2).norm() < 1e-7 * (1.0 + t1.norm()), "{t1} vs {t2}");
        }
    }
}
