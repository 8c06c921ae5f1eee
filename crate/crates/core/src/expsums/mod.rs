//! Type I / Type II exponential sums evaluated directly at desk scale,
//! together with the bound predictors they are compared against and a
//! quadrature check of the truncated Perron integral.

mod coeffs;
mod perron;
mod predictors;
mod sums;

pub use coeffs::{divisor_tau, CoefficientClass};
pub use perron::{perron_indicator, PERRON_MIN_GAP};
pub use predictors::{type1_predictor, type2_predictor, BoundReport, Regime, DEFAULT_KAPPA};
pub use sums::{geometric_phase_sum, pairwise_sum, type1_sum, type2_sum, AlphaPhase, TYPE1_WORK_LIMIT, TYPE2_X_LIMIT};
