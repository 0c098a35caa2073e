//! Universal differential forms over commutative model algebras.
//!
//! A degree-`n` chain `a₀ ⊗ a₁ ⊗ ⋯ ⊗ aₙ` is read as the form `a₀ δa₁ ⋯ δaₙ`.
//! Chains are kept in the normalized complex, so a unit in any slot past
//! the first makes a tensor vanish. Model algebras have a monomial basis and
//! a truncated matrix representation together with a Dirac matrix; identities
//! involving the representation are only asserted on an interior window of
//! indices where truncation cannot interfere.

mod algebra;
mod chain;
mod represent;
mod suite;

pub use algebra::{DiagonalModel, Label, LaurentModel, ModelAlgebra};
pub use chain::{adjoint, delta, hochschild_b, left_mul, product, right_mul, sigma_op, UniversalChain};
pub use represent::{first_order_holds, junk_basis, omega1_form, represent, represent_window, JunkBasis};
pub use suite::{junk_reproduction, run_identity_suite, IdentityReport, JunkReport};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum UnivDiffError {
    #[error("degree-0 chains have no boundary")]
    NoBoundary,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("chain length {len} does not match degree {degree}")]
    BadTuple { len: usize, degree: usize },
    #[error("junk computation in degree {degree} would need {monomials} monomials (limit {limit})")]
    TooManyMonomials { degree: usize, monomials: usize, limit: usize },
    #[error("junk forms start in degree 1, got {0}")]
    BadJunkDegree(usize),
}
