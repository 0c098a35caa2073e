//! Clifford algebras in the `-2η` sign convention.
//!
//! Generators are built by a tensor ladder, so the spinor dimension is
//! `2^⌊p/2⌋`. On top of the representation this crate finds the real
//! structure `J` for each dimension, and computes symbolic traces of gamma
//! words by Wick pairing.

mod gamma;
mod intmatrix;
mod real;
mod trace;

pub use gamma::{build_gammas, chirality, cliff11_reference, intertwiner, GammaSet, Signature};
pub use intmatrix::CMatrix;
pub use real::{expected_signs, find_real_structure, RealStructure, SignRow};
pub use trace::{gamma_word_trace, DeltaPoly, GammaWord, Index, SpinorTrace};

/// Largest total dimension accepted by [`build_gammas`].
pub const MAX_DIM: usize = 12;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CliffordError {
    #[error("signature must have p = r + s >= 1, got r = {r}, s = {s}")]
    EmptySignature { r: usize, s: usize },
    #[error("dimension {0} exceeds the matrix size guard of {MAX_DIM}")]
    TooLarge(usize),
    #[error("operation requires a Euclidean signature, got s = {0}")]
    NotEuclidean(usize),
    #[error("no real structure found in dimension {0}")]
    NoRealStructure(usize),
    #[error("gamma word of length {0} exceeds the supported maximum of 8")]
    WordTooLong(usize),
    #[error("index value {value} is outside 1..={p}")]
    IndexOutOfRange { value: usize, p: usize },
}
