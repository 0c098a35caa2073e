//! Dixmier-trace numerics on non-increasing singular-value sequences.
//!
//! Sequences are streams of `(value, multiplicity)` runs, so partial sums cost
//! one step per run. The logarithmic ratio `(1/log N) Σ_{n≤N} μₙ` converges
//! only like `1/log N`; estimates therefore fit `c₀ + c₁/log N` over a
//! schedule of `N` and report `c₀` with the largest fit residual as error bar.

mod estimate;
mod norms;
mod sequence;

pub use estimate::{dixmier_estimate, is_measurable, measurability, partial_ratio, Measurability, TraceEstimate};
pub use norms::{p1_norm, pinfty_norm};
pub use sequence::{Run, SingularValueSeq};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DixmierError {
    #[error("the logarithmic ratio needs N >= 2, got {0}")]
    NTooSmall(u64),
    #[error("schedule must be strictly increasing with at least 3 points, each >= 2")]
    BadSchedule,
    #[error("sequence is not a non-increasing positive run list at index {index}: {reason}")]
    InvalidSequence { index: u64, reason: String },
    #[error("exponent p must exceed 1, got {0}")]
    BadExponent(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}
