//! Continued fractions of quadratic irrationals and certified evaluation of
//! `||alpha n + beta||`.

mod cf;
mod fixed;
mod literal;
mod surd;

pub use cf::{
    cf_expand, convergents, max_partial_quotient, select_denominator, x_from_q, ContinuedFraction, Convergent,
    DEFAULT_MAX_TERMS,
};
pub use fixed::{
    chi_indicator, fixed_point_value, nearest_distance, CertifiedDistance, Chi, FixedPointReal, PhaseClassifier,
    DEFAULT_FRAC_BITS, MIN_CERTIFIED_BITS,
};
pub use literal::{Rational, RealLiteral};
pub use surd::QuadraticSurd;
