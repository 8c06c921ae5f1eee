use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{precondition, Error, Result};

use super::{QuadraticSurd, RealLiteral};

pub const DEFAULT_FRAC_BITS: u32 = 128;

/// A distance is only reported when its uncertainty is below `2^-MIN_CERTIFIED_BITS`.
pub const MIN_CERTIFIED_BITS: u32 = 24;

const MAX_FRAC_BITS: u32 = 1 << 16;

/// `mantissa * 2^-frac_bits`, within `err_ulp * 2^-frac_bits` of the true value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointReal {
    mantissa: BigInt,
    frac_bits: u32,
    err_ulp: u128,
}

impl FixedPointReal {
    pub fn new(mantissa: BigInt, frac_bits: u32, err_ulp: u128) -> Self {
        FixedPointReal { mantissa, frac_bits, err_ulp }
    }

    /// The exact binary value of `v` when it fits in `frac_bits`, otherwise
    /// its floor with a one-ulp error.
    pub fn from_f64(v: f64, frac_bits: u32) -> Result<Self> {
        if !v.is_finite() {
            return precondition("non-finite value");
        }
        if v == 0.0 {
            return Ok(FixedPointReal::new(BigInt::zero(), frac_bits, 0));
        }
        let bits = v.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let mut mant = BigInt::from(m);
        if v < 0.0 {
            mant = -mant;
        }
        let shift = e + frac_bits as i64;
        Ok(if shift >= 0 {
            FixedPointReal::new(mant << shift as usize, frac_bits, 0)
        } else {
            let div = BigInt::one() << (-shift) as usize;
            let (q, r) = mant.div_mod_floor(&div);
            FixedPointReal::new(q, frac_bits, if r.is_zero() { 0 } else { 1 })
        })
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn err_ulp(&self) -> u128 {
        self.err_ulp
    }

    pub fn is_exact(&self) -> bool {
        self.err_ulp == 0
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.mantissa, self.frac_bits)
    }

    pub fn uncertainty(&self) -> f64 {
        self.err_ulp as f64 * (-(self.frac_bits as f64)).exp2()
    }

    /// Change precision. Growing is exact; shrinking floors and adds one ulp.
    pub fn rescale(&self, frac_bits: u32) -> Self {
        if frac_bits >= self.frac_bits {
            let k = frac_bits - self.frac_bits;
            let err = if k >= 128 {
                if self.err_ulp == 0 {
                    0
                } else {
                    u128::MAX
                }
            } else {
                self.err_ulp.checked_shl(k).filter(|e| e >> k == self.err_ulp).unwrap_or(u128::MAX)
            };
            FixedPointReal::new(&self.mantissa << k as usize, frac_bits, err)
        } else {
            let k = self.frac_bits - frac_bits;
            let div = BigInt::one() << k as usize;
            let (q, r) = self.mantissa.div_mod_floor(&div);
            let err = if k >= 128 { 1 } else { self.err_ulp.div_ceil(1u128 << k) };
            let err = err + if r.is_zero() { 0 } else { 1 };
            FixedPointReal::new(q, frac_bits, err)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let bits = self.frac_bits.max(other.frac_bits);
        let (a, b) = (self.rescale(bits), other.rescale(bits));
        FixedPointReal::new(a.mantissa + b.mantissa, bits, a.err_ulp.saturating_add(b.err_ulp))
    }

    pub fn neg(&self) -> Self {
        FixedPointReal::new(-&self.mantissa, self.frac_bits, self.err_ulp)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact product with an integer; the error scales by `|n|`.
    pub fn mul_int(&self, n: i128) -> Self {
        FixedPointReal::new(&self.mantissa * n, self.frac_bits, self.err_ulp.saturating_mul(n.unsigned_abs()))
    }

    /// Fractional part, in `[0, 1)` up to the error bound.
    pub fn frac(&self) -> Self {
        let one = BigInt::one() << self.frac_bits as usize;
        FixedPointReal::new(self.mantissa.mod_floor(&one), self.frac_bits, self.err_ulp)
    }
}

fn big_to_f64(m: &BigInt, frac_bits: u32) -> f64 {
    let bits = m.bits();
    let drop = bits.saturating_sub(63);
    let top = (m >> drop as usize).to_i64().unwrap_or(0) as f64;
    top * ((drop as f64) - frac_bits as f64).exp2()
}

/// `floor(surd * 2^bits)` exactly, so the error is below one ulp.
pub(crate) fn fixed_point_surd(surd: &QuadraticSurd, frac_bits: u32) -> FixedPointReal {
    let scale = BigInt::one() << frac_bits as usize;
    // sqrt(d * 4^bits) is irrational, so the integer floor argument is exact
    let root = (BigInt::from(surd.d()) << (2 * frac_bits) as usize).sqrt();
    let num = BigInt::from(surd.p()) * &scale + root;
    let q = BigInt::from(surd.q());
    let m = if q.is_positive() { num.div_floor(&q) } else { (-(num + BigInt::one())).div_floor(&-q) };
    FixedPointReal::new(m, frac_bits, 1)
}

pub fn fixed_point_value(value: &RealLiteral, frac_bits: u32) -> Result<FixedPointReal> {
    if frac_bits == 0 || frac_bits > MAX_FRAC_BITS {
        return precondition(format!("frac_bits must be in 1..={MAX_FRAC_BITS}, got {frac_bits}"));
    }
    Ok(match value {
        RealLiteral::Surd(s) => fixed_point_surd(s, frac_bits),
        RealLiteral::Rational(r) => {
            let (q, rem) = (r.num() << frac_bits as usize).div_mod_floor(r.den());
            FixedPointReal::new(q, frac_bits, if rem.is_zero() { 0 } else { 1 })
        }
    })
}

/// Interval `[mantissa - err, mantissa + err] * 2^-frac_bits`, clipped to
/// `[0, 1/2]`, that contains `||alpha n + beta||`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedDistance {
    mantissa: BigInt,
    err_ulp: u128,
    frac_bits: u32,
}

impl CertifiedDistance {
    /// Interval covering `[lo, hi]`, for callers that already hold bounds.
    pub fn from_bounds(lo: f64, hi: f64, frac_bits: u32) -> Result<Self> {
        if !(0.0..=0.5).contains(&lo) || !(lo..=0.5).contains(&hi) {
            return precondition(format!("invalid distance interval [{lo}, {hi}]"));
        }
        let a = FixedPointReal::from_f64(lo, frac_bits)?;
        let b = FixedPointReal::from_f64(hi, frac_bits)?;
        // centre = floor((a+b)/2), err covers both ends plus rounding
        let sum = &a.mantissa + &b.mantissa;
        let centre = sum.div_floor(&BigInt::from(2));
        let half_width = (&b.mantissa - &centre).to_u128().unwrap_or(u128::MAX);
        let err = half_width.saturating_add(a.err_ulp.max(b.err_ulp)).saturating_add(1);
        Ok(CertifiedDistance { mantissa: centre, err_ulp: err, frac_bits })
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn err_ulp(&self) -> u128 {
        self.err_ulp
    }

    pub fn value(&self) -> f64 {
        big_to_f64(&self.mantissa, self.frac_bits)
    }

    pub fn uncertainty(&self) -> f64 {
        self.err_ulp as f64 * (-(self.frac_bits as f64)).exp2()
    }

    pub fn lower(&self) -> BigInt {
        (&self.mantissa - BigInt::from(self.err_ulp)).max(BigInt::zero())
    }

    pub fn upper(&self) -> BigInt {
        let half = BigInt::one() << (self.frac_bits - 1) as usize;
        (&self.mantissa + BigInt::from(self.err_ulp)).min(half)
    }
}

/// Certified `||alpha n + beta||`.
///
/// The product and the reduction modulo one are exact on mantissas; the
/// error is `n * err(alpha) + err(beta) + 1` ulp.
pub fn nearest_distance(alpha: &FixedPointReal, n: u64, beta: &FixedPointReal) -> Result<CertifiedDistance> {
    let bits = alpha.frac_bits.max(beta.frac_bits);
    let (a, b) = (alpha.rescale(bits), beta.rescale(bits));
    let v = &a.mantissa * BigInt::from(n) + &b.mantissa;
    let err = a.err_ulp.saturating_mul(n as u128).saturating_add(b.err_ulp).saturating_add(1);
    if bits <= MIN_CERTIFIED_BITS || err >= 1u128 << (bits - MIN_CERTIFIED_BITS).min(127) {
        return Err(Error::Precision(format!(
            "{bits} fractional bits leave fewer than {MIN_CERTIFIED_BITS} certified bits at n = {n}"
        )));
    }
    let one = BigInt::one() << bits as usize;
    let r = v.mod_floor(&one);
    let d = (&one - &r).min(r);
    Ok(CertifiedDistance { mantissa: d, err_ulp: err, frac_bits: bits })
}

/// Outcome of testing `||theta|| < delta` on a certified interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Chi {
    /// The whole interval lies below `delta`.
    In,
    /// The whole interval lies at or above `delta`.
    Out,
    /// The interval straddles `delta`.
    Boundary,
}

pub fn chi_indicator(distance: &CertifiedDistance, delta: &FixedPointReal) -> Chi {
    let bits = distance.frac_bits.max(delta.frac_bits);
    let k = (bits - distance.frac_bits) as usize;
    let lo = distance.lower() << k;
    let hi = distance.upper() << k;
    let d = delta.rescale(bits);
    let d_lo = &d.mantissa - BigInt::from(d.err_ulp);
    let d_hi = &d.mantissa + BigInt::from(d.err_ulp);
    if hi < d_lo {
        Chi::In
    } else if lo >= d_hi {
        Chi::Out
    } else {
        Chi::Boundary
    }
}

/// Fast classifier for `||alpha n + beta|| < delta` over many `n`.
///
/// When the working precision is at most 128 bits every quantity is shifted
/// to a 2^-128 grid and the reduction modulo one is a wrapping `u128`
/// multiply-add; the results are identical to [`nearest_distance`] followed
/// by [`chi_indicator`], which remain the fallback for wider precisions.
#[derive(Debug, Clone)]
pub struct PhaseClassifier {
    alpha: FixedPointReal,
    beta: FixedPointReal,
    delta: FixedPointReal,
    fast: Option<FastPhase>,
}

#[derive(Debug, Clone, Copy)]
struct FastPhase {
    shift: u32,
    alpha: u128,
    beta: u128,
    alpha_err: u128,
    beta_err: u128,
    delta_lo: u128,
    delta_hi: u128,
}

impl PhaseClassifier {
    pub fn new(alpha: &FixedPointReal, beta: &FixedPointReal, delta: &FixedPointReal) -> Result<Self> {
        let bits = alpha.frac_bits.max(beta.frac_bits).max(delta.frac_bits);
        let (alpha, beta, delta) = (alpha.rescale(bits), beta.rescale(bits), delta.rescale(bits));
        if delta.mantissa.sign() == Sign::Minus {
            return precondition("delta must be nonnegative");
        }
        let fast = if bits <= 128 { FastPhase::new(&alpha, &beta, &delta, bits) } else { None };
        Ok(PhaseClassifier { alpha, beta, delta, fast })
    }

    pub fn frac_bits(&self) -> u32 {
        self.alpha.frac_bits
    }

    pub fn alpha(&self) -> &FixedPointReal {
        &self.alpha
    }

    pub fn beta(&self) -> &FixedPointReal {
        &self.beta
    }

    pub fn delta(&self) -> &FixedPointReal {
        &self.delta
    }

    pub fn delta_f64(&self) -> f64 {
        self.delta.to_f64()
    }

    pub fn classify(&self, n: u64) -> Result<Chi> {
        if let Some(f) = &self.fast {
            if let Some(chi) = f.classify(n) {
                return Ok(chi);
            }
        }
        let d = nearest_distance(&self.alpha, n, &self.beta)?;
        Ok(chi_indicator(&d, &self.delta))
    }

    /// `alpha n + beta` modulo one, as a double in `[0, 1)`.
    pub fn phase(&self, n: u64) -> f64 {
        match &self.fast {
            Some(f) => u128_to_unit(f.alpha.wrapping_mul(n as u128).wrapping_add(f.beta)),
            None => {
                let v = self.alpha.mul_int(n as i128).add(&self.beta).frac();
                v.to_f64()
            }
        }
    }
}

fn u128_to_unit(v: u128) -> f64 {
    (v >> 64) as u64 as f64 * (-64f64).exp2()
}

impl FastPhase {
    fn new(alpha: &FixedPointReal, beta: &FixedPointReal, delta: &FixedPointReal, bits: u32) -> Option<Self> {
        let shift = 128 - bits;
        let one = BigInt::one() << bits as usize;
        let frac_u128 = |m: &BigInt| -> Option<u128> {
            let r = m.mod_floor(&one).to_u128()?;
            r.checked_shl(shift).filter(|v| v >> shift == r).or(if shift == 0 { Some(r) } else { None })
        };
        let widen = |e: u128| e.checked_mul(1u128.checked_shl(shift)?);
        let d = delta.mantissa.to_u128()?;
        let d_lo = widen(d.saturating_sub(delta.err_ulp))?;
        let d_hi = widen(d.checked_add(delta.err_ulp)?)?;
        Some(FastPhase {
            shift,
            alpha: frac_u128(&alpha.mantissa)?,
            beta: frac_u128(&beta.mantissa)?,
            alpha_err: alpha.err_ulp,
            beta_err: beta.err_ulp,
            delta_lo: d_lo,
            delta_hi: d_hi,
        })
    }

    fn classify(&self, n: u64) -> Option<Chi> {
        let err = self.alpha_err.checked_mul(n as u128)?.checked_add(self.beta_err)?.checked_add(1)?;
        let bits = 128 - self.shift;
        if bits <= MIN_CERTIFIED_BITS || err >= 1u128 << (bits - MIN_CERTIFIED_BITS).min(127) {
            return None;
        }
        let err = err.checked_mul(1u128.checked_shl(self.shift)?)?;
        let r = self.alpha.wrapping_mul(n as u128).wrapping_add(self.beta);
        let d = r.min(r.wrapping_neg());
        let half = 1u128 << 127;
        let lo = d.saturating_sub(err);
        let hi = d.saturating_add(err).min(half);
        Some(if hi < self.delta_lo {
            Chi::In
        } else if lo >= self.delta_hi {
            Chi::Out
        } else {
            Chi::Boundary
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> RealLiteral {
        s.parse().unwrap()
    }

    #[test]
    fn fixed_point_examples() {
        let r2 = fixed_point_value(&lit("sqrt(2)"), 8).unwrap();
        assert_eq!(r2.mantissa(), &BigInt::from(362));
        assert_eq!(r2.err_ulp(), 1);
        let q = fixed_point_value(&lit("3/4"), 40).unwrap();
        assert!(q.is_exact());
        assert_eq!(q.mantissa(), &(BigInt::from(3) << 38));
        let third = fixed_point_value(&lit("1/3"), 8).unwrap();
        assert_eq!(third.mantissa(), &BigInt::from(85));
        assert_eq!(third.err_ulp(), 1);
        assert!(fixed_point_value(&lit("1/3"), 0).is_err());
    }

    #[test]
    fn negative_denominator_surd() {
        // (1 - sqrt 5) / 2 = -0.618...
        let v = fixed_point_value(&lit("(1-sqrt(5))/2"), 64).unwrap();
        let expect = (1.0 - 5f64.sqrt()) / 2.0;
        assert!((v.to_f64() - expect).abs() < 1e-15);
        // floor semantics: mantissa <= true value * 2^64 < mantissa + 1
        assert!(v.to_f64() <= expect + 1e-18);
    }

    #[test]
    fn from_f64_exactness() {
        let v = FixedPointReal::from_f64(0.375, 8).unwrap();
        assert!(v.is_exact());
        assert_eq!(v.mantissa(), &BigInt::from(96));
        let v = FixedPointReal::from_f64(0.1, 8).unwrap();
        assert_eq!(v.mantissa(), &BigInt::from(25));
        assert_eq!(v.err_ulp(), 1);
        let v = FixedPointReal::from_f64(-0.1, 128).unwrap();
        assert!(v.is_exact());
        assert_eq!(v.to_f64(), -0.1);
    }

    #[test]
    fn distance_examples() {
        let a = fixed_point_value(&lit("sqrt(2)"), 128).unwrap();
        let zero = fixed_point_value(&lit("0"), 128).unwrap();
        let d = nearest_distance(&a, 5, &zero).unwrap();
        assert!((d.value() - 0.071_067_811_865_475_24).abs() < 1e-15);
        assert!(d.uncertainty() < 1e-30);
        let d = nearest_distance(&a, 0, &zero).unwrap();
        assert_eq!(d.lower(), BigInt::zero());
        let half = fixed_point_value(&lit("1/2"), 64).unwrap();
        let z64 = fixed_point_value(&lit("0"), 64).unwrap();
        let d = nearest_distance(&half, 1, &z64).unwrap();
        assert_eq!(d.value(), 0.5);
        let low = fixed_point_value(&lit("sqrt(2)"), 20).unwrap();
        assert!(matches!(nearest_distance(&low, 1, &z64.rescale(20)), Err(Error::Precision(_))));
    }

    #[test]
    fn chi_examples() {
        let delta = FixedPointReal::from_f64(0.02, 128).unwrap();
        let i = CertifiedDistance::from_bounds(0.01, 0.0100001, 128).unwrap();
        assert_eq!(chi_indicator(&i, &delta), Chi::In);
        let o = CertifiedDistance::from_bounds(0.3, 0.3000001, 128).unwrap();
        assert_eq!(chi_indicator(&o, &delta), Chi::Out);
        let b = CertifiedDistance::from_bounds(0.0199, 0.0201, 128).unwrap();
        assert_eq!(chi_indicator(&b, &delta), Chi::Boundary);
    }

    #[test]
    fn rescale_is_sound() {
        let v = fixed_point_value(&lit("sqrt(3)"), 200).unwrap();
        let w = v.rescale(64);
        let exact = fixed_point_value(&lit("sqrt(3)"), 64).unwrap();
        let diff = (w.mantissa() - exact.mantissa()).abs();
        assert!(diff <= BigInt::from(w.err_ulp() + 1));
        let up = w.rescale(80);
        assert_eq!(up.err_ulp(), w.err_ulp() << 16);
    }

    #[test]
    fn fast_and_exact_paths_agree() {
        for bits in [64u32, 100, 128] {
            let a = fixed_point_value(&lit("sqrt(2)"), bits).unwrap();
            let b = fixed_point_value(&lit("1/3"), bits).unwrap();
            let delta = FixedPointReal::from_f64(0.01, bits).unwrap();
            let c = PhaseClassifier::new(&a, &b, &delta).unwrap();
            assert!(c.fast.is_some());
            for n in (0..20_000u64).chain([12_345_678, 99_999_999]) {
                let slow = chi_indicator(&nearest_distance(&a, n, &b).unwrap(), &delta);
                assert_eq!(c.classify(n).unwrap(), slow, "bits {bits} n {n}");
            }
        }
    }

    #[test]
    fn wide_precision_uses_fallback() {
        let a = fixed_point_value(&lit("sqrt(2)"), 256).unwrap();
        let b = fixed_point_value(&lit("0"), 256).unwrap();
        let delta = FixedPointReal::from_f64(0.1, 256).unwrap();
        let c = PhaseClassifier::new(&a, &b, &delta).unwrap();
        assert!(c.fast.is_none());
        assert_eq!(c.classify(5).unwrap(), Chi::In);
        assert!((c.phase(5) - (5.0 * 2f64.sqrt()).fract()).abs() < 1e-12);
    }
}
