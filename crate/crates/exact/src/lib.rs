//! Exact arithmetic over the Gaussian rationals `Q(i)`.
//!
//! Provides the scalar type [`Qi`], a dense row-major [`QMatrix`], and the
//! row-reduction routines (rank, null space, span membership) that the
//! algebraic crates of the workspace rely on for zero-tolerance checks.

mod matrix;
mod scalar;

pub use matrix::{QMatrix, Span};
pub use scalar::{fmt_qi, fmt_rational, qi, qi_int, rational, Qi, Rational};
