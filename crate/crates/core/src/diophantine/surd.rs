use std::fmt;

use num_integer::Roots;

use crate::error::{precondition, Error, Result};

/// `(p + sqrt(d)) / q`, normalized so that `q | d - p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: i128,
    d: i128,
    q: i128,
}

const MAX_DISCRIMINANT: i128 = 1 << 100;

impl QuadraticSurd {
    pub fn new(p: i128, d: i128, q: i128) -> Result<Self> {
        if q == 0 {
            return precondition("surd denominator must be nonzero");
        }
        if d <= 0 {
            return precondition(format!("surd discriminant must be positive, got {d}"));
        }
        if is_square(d) {
            return Err(Error::RationalSurd(d.to_string()));
        }
        let (p, d, q) = if (d - p * p) % q == 0 {
            (p, d, q)
        } else {
            let aq = q.abs();
            (p * aq, d * q * q, q * aq)
        };
        if d > MAX_DISCRIMINANT || p.abs() > 1 << 60 || q.abs() > 1 << 60 {
            return precondition("surd components too large");
        }
        Ok(QuadraticSurd { p, d, q })
    }

    /// `sqrt(d)`.
    pub fn sqrt(d: i128) -> Result<Self> {
        Self::new(0, d, 1)
    }

    pub fn p(&self) -> i128 {
        self.p
    }

    pub fn d(&self) -> i128 {
        self.d
    }

    pub fn q(&self) -> i128 {
        self.q
    }

    /// Exact `floor((p + sqrt(d)) / q)`.
    pub fn floor(&self) -> i128 {
        let s = self.d.sqrt();
        if self.q > 0 {
            (self.p + s).div_euclid(self.q)
        } else {
            // value lies in ((p + s + 1) / q, (p + s) / q); no integer strictly inside
            let num = -(self.p + s + 1);
            let den = -self.q;
            num.div_euclid(den)
        }
    }

    /// One step of the PQa iteration: `(a, next complete quotient)`.
    pub fn step(&self) -> (i128, QuadraticSurd) {
        let a = self.floor();
        let p = a * self.q - self.p;
        let q = (self.d - p * p) / self.q;
        (a, QuadraticSurd { p, d: self.d, q })
    }

    /// The `k`-th complete quotient: the surd whose expansion is the tail from `a_k`.
    pub fn complete_quotient(&self, k: usize) -> QuadraticSurd {
        (0..k).fold(*self, |s, _| s.step().1)
    }

    pub fn to_f64(&self) -> f64 {
        (self.p as f64 + (self.d as f64).sqrt()) / self.q as f64
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p, self.q) {
            (0, 1) => write!(f, "sqrt({})", self.d),
            (p, q) => write!(f, "({p}+sqrt({}))/{q}", self.d),
        }
    }
}

fn is_square(d: i128) -> bool {
    let s = d.sqrt();
    s * s == d
}
