//! Counting smooth integers in Diophantine windows.
//!
//! The crate counts integers `n <= x` whose prime factors all lie in a
//! window `[y, z]` (optionally squarefree) and satisfy `||alpha n + beta|| < delta`,
//! and compares the count against the main term `2 delta Psi(x; y, z)`.
//! Alongside the count it carries every ingredient needed to study that
//! comparison numerically:
//!
//! * [`sieve`]: prime tables, smallest-prime-factor segments, smooth-number
//!   streams, the largest-prime-factor recursion and the Buchstab split.
//! * [`diophantine`]: quadratic surds, periodic continued fractions,
//!   convergents, and certified fixed-point evaluation of `||alpha n + beta||`.
//! * [`fourier`]: trigonometric minorant/majorant pairs for the indicator of
//!   `||theta|| < delta`.
//! * [`expsums`]: Type I / Type II exponential sums, their bound predictors,
//!   and a quadrature check of the truncated Perron integral.
//! * [`experiments`]: end-to-end runs producing CSV/JSON reports.

pub mod diophantine;
pub mod error;
pub mod experiments;
pub mod expsums;
pub mod fourier;
pub mod sieve;

pub use error::{Error, Result};
