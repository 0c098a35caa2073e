//! Exact pseudodifferential symbol calculus in Riemann normal coordinates.
//!
//! Symbols are Taylor polynomials in `x` about the base point with coefficients
//! in the Gaussian rationals. Composition, parametrices, inverse powers and the
//! symbol of `|D|` feed the order `−p` integrand of `|D|^{2−p}`; cosphere
//! integration and spinor traces turn it into the curvature and torsion
//! coefficients of the Wodzicki residue.

mod action;
mod calculus;
mod cosphere;
mod dirac;
mod symbol;

use thiserror::Error;

pub use action::{gravity_action, gravity_action_with, quadratic_form_coeff, GravityAction};
pub use calculus::{
    abs_symbol, abs_symbol_full, d2_symbol, integrand, integrand_with, inverse_power, inverse_power_symbol,
    parametrix_d2, parametrix_d2_recursive, parametrix_remainder, sigma2_power, EvenPath, OddPath,
};
pub use cosphere::{cosphere_integrate, residue_normalization, ScalarInvariant};
pub use dirac::{square_dirac, torsion_traces, trace_reduce, Field, Letter, OpPoly, SquaredDirac, TorsionTraces};
pub use symbol::{Atom, Basis, Monomial, Slot, SymbolExpr};

#[derive(Debug, Error)]
pub enum WodzickiError {
    #[error(
        "jet exhausted: order {order} needs Taylor data beyond the stored jet (exact only above order {exact_above})"
    )]
    JetExhausted { order: i32, exact_above: i32 },
    #[error("dimension p = {p} is out of range for {op}")]
    BadDimension { p: u32, op: &'static str },
    #[error("inverse power m must be at least 1")]
    BadPower,
    #[error("parametrix depth {0} exceeds 2")]
    DepthTooLarge(u32),
    #[error("cosphere moment of degree {0} is not supported (at most 4)")]
    MomentTooHigh(usize),
    #[error("term {0} is not at the base point")]
    NotAtBase(String),
    #[error("term {0} is not homogeneous of degree 0 with |ξ| = 1")]
    NotHomogeneous(String),
    #[error("term {0} has a non-real coefficient")]
    NotReal(String),
    #[error("term {0} is not a scalar invariant")]
    NotInvariant(String),
    #[error("term {0} is outside the named basis")]
    NotInBasis(String),
    #[error("cannot reduce: {0}")]
    NotReducible(String),
    #[error(transparent)]
    Clifford(#[from] clifford::CliffordError),
}
