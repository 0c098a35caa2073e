use exact::{fmt_rational, Rational};
use num_traits::Zero;
use serde::Serialize;

use crate::calculus::{integrand_with, EvenPath, OddPath};
use crate::cosphere::{cosphere_integrate, ser_rational, ScalarInvariant};
use crate::dirac::{square_dirac, trace_reduce};
use crate::symbol::SymbolExpr;
use crate::WodzickiError;

/// `WRes(|D|^{2−p}) = coeff_r·∫R√g + coeff_t2·∫t_{abc}t^{abc}√g (+ boundary)`,
/// with coefficients as exact multiples of `c(p) = 2^⌊p/2⌋Vol(S^{p−1})/(p(2π)^p)`.
#[derive(Clone, Debug, Serialize)]
pub struct GravityAction {
    pub p: u32,
    pub torsion: bool,
    #[serde(serialize_with = "ser_rational")]
    pub coeff_r: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub coeff_t2: Rational,
    /// Multiple of `c(p)·2^{−⌊p/2⌋}∫tr γ^{μν}[∇_μ,T_ν]`, which integrates to zero.
    #[serde(serialize_with = "ser_rational")]
    pub coeff_boundary: Rational,
    #[serde(skip)]
    pub integrand: SymbolExpr,
    /// Cosphere average of the integrand, before the spinor trace.
    pub averaged: ScalarInvariant,
    /// Spinor trace of `b − ½a^μ_{,μ} + ¼a^μa_μ`, in units of `2^⌊p/2⌋`.
    pub traced: ScalarInvariant,
}

impl GravityAction {
    pub fn render_coefficient(c: &Rational, p: u32) -> String {
        format!("{}·c({p})", fmt_rational(c))
    }
}

pub fn gravity_action(p: u32, torsion: bool) -> Result<GravityAction, WodzickiError> {
    gravity_action_with(p, torsion, EvenPath::Shortcut)
}

/// Integrand → cosphere average → spinor trace → residue normalization.
pub fn gravity_action_with(p: u32, torsion: bool, path: EvenPath) -> Result<GravityAction, WodzickiError> {
    if p < 2 {
        return Err(WodzickiError::BadDimension { p, op: "gravity_action" });
    }
    let integrand = if p == 2 { SymbolExpr::zero() } else { integrand_with(p, path, OddPath::PowerThenAbs)? };
    let averaged = cosphere_integrate(&integrand, p)?;
    let cb = averaged.b.clone();
    let quarter = Rational::new(1.into(), 4.into());
    let half = Rational::new(1.into(), 2.into());
    if averaged.a_dot_a != &cb * &quarter || averaged.div_a != -(&cb * &half) {
        return Err(WodzickiError::NotReducible(format!(
            "averaged integrand is not a multiple of b + ¼a·a − ½div a: {averaged:?}"
        )));
    }
    let traced = trace_reduce(&square_dirac(torsion)?, p)?;
    // tr(x) = 2^⌊p/2⌋ · [cb·traced + c_R·R], and the residue weight is c(p)/2^⌊p/2⌋.
    let coeff_r = &cb * &traced.r + &averaged.r;
    let coeff_t2 = &cb * &traced.t2;
    let coeff_boundary = &cb * &traced.boundary;
    Ok(GravityAction { p, torsion, coeff_r, coeff_t2, coeff_boundary, integrand, averaged, traced })
}

/// Coefficient of `∫t_{abc}t^{abc}√g` in `q(T) = WRes(T²D^{−p})`, as a multiple of `c(p)`.
pub fn quadratic_form_coeff(p: u32) -> Result<Rational, WodzickiError> {
    if p < 2 {
        return Err(WodzickiError::BadDimension { p, op: "quadratic_form_coeff" });
    }
    let action = gravity_action(p, true)?;
    debug_assert!(p > 2 || action.coeff_t2.is_zero());
    Ok(action.coeff_t2)
}
