use exact::{fmt_rational, Rational};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::symbol::{Atom, Slot, SymbolExpr};
use crate::WodzickiError;

/// Linear combination of the post-integration scalars with exact coefficients.
///
/// `b`, `a_dot_a` and `div_a` stand for the untraced endomorphisms
/// `b`, `a^μa_μ`, `a^μ_{,μ}`. When `spinor_traced` is set every coefficient
/// carries an implicit factor `2^⌊p/2⌋`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScalarInvariant {
    #[serde(serialize_with = "ser_rational")]
    pub b: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub a_dot_a: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub div_a: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub r: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub t2: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub boundary: Rational,
    pub spinor_traced: bool,
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

impl ScalarInvariant {
    pub fn is_zero(&self) -> bool {
        [&self.b, &self.a_dot_a, &self.div_a, &self.r, &self.t2, &self.boundary].iter().all(|c| c.is_zero())
    }
}

/// Integrates a degree-0, base-point expression over the unit cosphere
/// (normalized to total mass 1) and names the resulting scalars.
///
/// The curvature atom contracts as `R^{ρρ}_{μμ} = R` and `R^{ρμ}_{ρμ} = −½R`, so the
/// quartic `ξξRξξ` moment vanishes without using the Bianchi identity.
pub fn cosphere_integrate(e: &SymbolExpr, p: u32) -> Result<ScalarInvariant, WodzickiError> {
    if p == 0 {
        return Err(WodzickiError::BadDimension { p, op: "cosphere_integrate" });
    }
    for (m, _) in e.terms() {
        if m.norm() != 0 || m.x_degree() != 0 {
            return Err(WodzickiError::NotHomogeneous(m.to_string()));
        }
    }
    let averaged = e.sphere_average(p)?;
    let mut out = ScalarInvariant::default();
    let d0 = Slot::Dummy(0);
    let d1 = Slot::Dummy(1);
    for (m, c) in averaged.terms() {
        if !c.im.is_zero() {
            return Err(WodzickiError::NotReal(m.to_string()));
        }
        let c = c.re.clone();
        let b = Atom::B { ders: vec![] };
        let a = Atom::A { index: d0, ders: vec![] };
        let div = Atom::A { index: d0, ders: vec![d0] };
        match (m.scalars(), m.matrices()) {
            ([], [x]) if *x == b => out.b += c,
            ([], [x, y]) if *x == a && *y == a => out.a_dot_a += c,
            ([], [x]) if *x == div => out.div_a += c,
            ([Atom::Curv(s)], []) if *s == [d0, d0, d1, d1] => out.r += c,
            ([Atom::Curv(s)], []) if *s == [d0, d1, d0, d1] => out.r -= c / Rational::from_integer(2.into()),
            _ => return Err(WodzickiError::NotInvariant(m.to_string())),
        }
    }
    Ok(out)
}

/// `Vol(S^{p−1}) / (p (2π)^p)` divided by `c(p)`, which is `2^{−⌊p/2⌋}`.
pub fn residue_normalization(p: u32) -> Rational {
    Rational::one() / Rational::from_integer((1i64 << (p / 2)).into())
}
