use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use regex::Regex;

use crate::error::{Error, Result};

use super::QuadraticSurd;

/// Reduced fraction with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Config("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let sign = if den.is_negative() { -BigInt::one() } else { BigInt::one() };
        Ok(Rational { num: &num / &g * &sign, den: &den / &g * &sign })
    }

    pub fn integer(v: i64) -> Self {
        Rational { num: v.into(), den: BigInt::one() }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn to_f64(&self) -> f64 {
        // adequate for display; exact work goes through the fixed-point path
        let shift = self.den.bits().saturating_sub(60).max(self.num.bits().saturating_sub(60));
        let n: f64 = (&self.num >> shift).to_string().parse().unwrap_or(f64::NAN);
        let d: f64 = (&self.den >> shift).to_string().parse().unwrap_or(f64::NAN);
        n / d
    }
}

/// Real numbers accepted for `alpha` and `beta`.
///
/// Syntax: `sqrt(D)`, `(P+sqrt(D))/Q`, `(P-sqrt(D))/Q`, `sqrt(D)/Q`,
/// rationals `p/q`, integers, decimals like `0.25`, and hexadecimal dyadics
/// `0xHH.HH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealLiteral {
    Rational(Rational),
    Surd(QuadraticSurd),
}

impl RealLiteral {
    pub fn to_f64(&self) -> f64 {
        match self {
            RealLiteral::Rational(r) => r.to_f64(),
            RealLiteral::Surd(s) => s.to_f64(),
        }
    }

    pub fn as_surd(&self) -> Option<&QuadraticSurd> {
        match self {
            RealLiteral::Surd(s) => Some(s),
            RealLiteral::Rational(_) => None,
        }
    }
}

fn surd_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^(?:\((?:([+-]?\d+)([+-]))?sqrt\((\d+)\)\)|(?:([+-]?\d+)([+-]))?sqrt\((\d+)\))(?:/([+-]?\d+))?$")
            .unwrap()
    })
}

fn bad(s: &str) -> Error {
    Error::Config(format!("cannot parse real literal {s:?}"))
}

impl FromStr for RealLiteral {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad(input));
        }
        if let Some(caps) = surd_re().captures(&s) {
            let pick = |a: usize, b: usize| caps.get(a).or_else(|| caps.get(b)).map(|m| m.as_str());
            let p: i128 = pick(1, 4).map_or(Ok(0), str::parse).map_err(|_| bad(input))?;
            let sign = pick(2, 5).unwrap_or("+");
            let d: i128 = pick(3, 6).ok_or_else(|| bad(input))?.parse().map_err(|_| bad(input))?;
            let q: i128 = caps.get(7).map_or(Ok(1), |m| m.as_str().parse()).map_err(|_| bad(input))?;
            // (p - sqrt d)/q = (-p + sqrt d)/(-q)
            let (p, q) = if sign == "-" { (-p, -q) } else { (p, q) };
            return QuadraticSurd::new(p, d, q)
                .map(RealLiteral::Surd)
                .map_err(|e| Error::Config(format!("{input:?}: {e}")));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(&s)),
        };
        let r = if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
            parse_radix(hex, 16).ok_or_else(|| bad(input))?
        } else if let Some((n, d)) = body.split_once('/') {
            let n: BigInt = n.parse().map_err(|_| bad(input))?;
            let d: BigInt = d.parse().map_err(|_| bad(input))?;
            Rational::new(n, d)?
        } else {
            parse_radix(body, 10).ok_or_else(|| bad(input))?
        };
        let r = if neg { Rational::new(-r.num, r.den)? } else { r };
        Ok(RealLiteral::Rational(r))
    }
}

fn parse_radix(s: &str, radix: u32) -> Option<Rational> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::parse_bytes(digits.as_bytes(), radix)?;
    let den = BigInt::from(radix).pow(frac.len() as u32);
    Rational::new(num, den).ok()
}

impl fmt::Display for RealLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealLiteral::Rational(r) if r.den.is_one() => write!(f, "{}", r.num),
            RealLiteral::Rational(r) => write!(f, "{}/{}", r.num, r.den),
            RealLiteral::Surd(s) => write!(f, "{s}"),
        }
    }
}
