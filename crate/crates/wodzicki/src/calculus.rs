use exact::{qi, qi_int, rational, Qi};
use num_traits::One;
use serde::Serialize;

use crate::symbol::{Atom, Monomial, Slot, SymbolExpr};
use crate::WodzickiError;

fn q(num: i64, den: i64) -> Qi {
    qi(rational(num, den), rational(0, 1))
}

fn a_atom(index: Slot, ders: Vec<Slot>) -> Atom {
    Atom::A { index, ders }
}

/// `σ₂(x)^{n/2} = (g^{rs}(x)ξ_rξ_s)^{n/2}` to second order in `x`, using
/// `g^{rs} = δ^{rs} − ⅙ R^{rs}_{mn} x^m x^n`. The omitted cubic metric term has
/// potential `n − 3`.
pub fn sigma2_power(n: i32) -> SymbolExpr {
    let lead = SymbolExpr::term(Qi::one(), Monomial::new(n, vec![], vec![]));
    let curv = Monomial::new(n - 2, vec![Atom::Curv([Slot::Xi, Slot::Xi, Slot::X, Slot::X])], vec![]);
    lead.add(&SymbolExpr::term(q(-n as i64, 12), curv)).truncated(n - 3)
}

/// Full symbol `σ(D²) = g^{μν}(x)ξ_μξ_ν + i a^μ(x)ξ_μ + b(x)` with second-order
/// Taylor data for `a` and `b`.
pub fn d2_symbol() -> SymbolExpr {
    let (xi, x) = (Slot::Xi, Slot::X);
    let mut s = sigma2_power(2);
    let ia = [(vec![], q(1, 1)), (vec![x], q(1, 1)), (vec![x, x], q(1, 2))];
    for (ders, c) in ia {
        s = s.add(&SymbolExpr::term(c * qi_int(0, 1), Monomial::new(0, vec![], vec![a_atom(xi, ders)])));
    }
    let b = [(vec![], q(1, 1)), (vec![x], q(1, 1)), (vec![x, x], q(1, 2))];
    for (ders, c) in b {
        s = s.add(&SymbolExpr::term(c, Monomial::new(0, vec![], vec![Atom::B { ders }])));
    }
    s
}

/// Remainder `r = σ(D² ∘ P) − 1` for `σ(P) = σ₂⁻¹`, through order −2.
pub fn parametrix_remainder() -> SymbolExpr {
    d2_symbol().compose(&sigma2_power(-2), -2).sub(&SymbolExpr::one())
}

/// Parametrix of `D²` through order `−2 − depth` as the geometric series
/// `σ₂⁻¹ ∘ Σ (−r)^{∘k}`.
pub fn parametrix_d2(depth: u32) -> Result<SymbolExpr, WodzickiError> {
    if depth > 2 {
        return Err(WodzickiError::DepthTooLarge(depth));
    }
    let cutoff = -2 - depth as i32;
    let p0 = sigma2_power(-2);
    let r = parametrix_remainder();
    let mut total = p0.clone();
    let mut power = SymbolExpr::one();
    let mut sign = Qi::one();
    for _ in 0..depth {
        power = power.compose(&r, cutoff + 2);
        sign = -sign;
        total = total.add(&p0.compose(&power, cutoff).scale(&sign));
    }
    Ok(total)
}

/// Same parametrix by order recursion: `q_{−2−j} = −σ₂⁻¹ · [σ(D² ∘ Σ_{i<j} q_{−2−i})]_{−j}`.
pub fn parametrix_d2_recursive(depth: u32) -> Result<SymbolExpr, WodzickiError> {
    if depth > 2 {
        return Err(WodzickiError::DepthTooLarge(depth));
    }
    let cutoff = -2 - depth as i32;
    let inv = sigma2_power(-2);
    let d2 = d2_symbol();
    let mut total = inv.clone();
    for j in 1..=depth as i32 {
        let rest = d2.compose(&total, cutoff + 2).component(-j);
        total = total.add(&inv.multiply(&rest, cutoff).scale(&-Qi::one()));
    }
    Ok(total)
}

/// Full symbol of `D^{−2m}` as `D^{−2m+2} ∘ D^{−2}`, kept through potential `−2m−2`.
pub fn inverse_power_symbol(m: u32) -> Result<SymbolExpr, WodzickiError> {
    if m == 0 {
        return Err(WodzickiError::BadPower);
    }
    let base = parametrix_d2(2)?;
    let mut acc = base.clone();
    for k in 2..=m as i32 {
        acc = acc.compose(&base, -2 * k - 2);
    }
    Ok(acc)
}

/// `(σ_{−2m−1}, σ_{−2m−2})` of `D^{−2m}` at the base point.
pub fn inverse_power(m: u32) -> Result<(SymbolExpr, SymbolExpr), WodzickiError> {
    let s = inverse_power_symbol(m)?;
    let m = m as i32;
    Ok((s.homogeneous(-2 * m - 1)?, s.homogeneous(-2 * m - 2)?))
}

/// Full symbol of `|D|` through potential `cutoff`, solving `σ(|D|∘|D|) = σ(D²)`
/// order by order: `s_j = ½σ₂^{−½} · [σ(D²) − σ(Q∘Q)]_{j+1}`.
pub fn abs_symbol_full(cutoff: i32) -> SymbolExpr {
    let d2 = d2_symbol();
    let half_inv = sigma2_power(-1).scale(&q(1, 2));
    let mut acc = sigma2_power(1);
    for j in (cutoff..=0).rev() {
        let residual = d2.sub(&acc.compose(&acc, cutoff + 1)).component(j + 1);
        acc = acc.add(&half_inv.multiply(&residual, cutoff));
    }
    acc
}

/// `(σ₁, σ₀, σ₋₁)` of `|D|` at the base point.
pub fn abs_symbol() -> Result<(SymbolExpr, SymbolExpr, SymbolExpr), WodzickiError> {
    let s = abs_symbol_full(-1);
    Ok((s.homogeneous(1)?, s.homogeneous(0)?, s.homogeneous(-1)?))
}

/// Route for the even-dimensional integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EvenPath {
    /// `σ_{−p}(D^{−p+2})` read from the inverse-power recursion with `m = (p−2)/2`.
    Shortcut,
    /// `σ(D²) ∘ σ(D^{−p})`.
    Generic,
}

/// Route for the odd-dimensional integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OddPath {
    /// `σ(D^{−2m}) ∘ σ(|D|)`.
    PowerThenAbs,
    /// `σ(|D|) ∘ σ(D^{−2m})`.
    AbsThenPower,
}

/// `σ_{−p}(|D|^{2−p})` at the base point with `‖ξ‖ = 1`, even path chosen by `even`.
pub fn integrand_with(p: u32, even: EvenPath, odd: OddPath) -> Result<SymbolExpr, WodzickiError> {
    let order = -(p as i32);
    let s = if p.is_multiple_of(2) {
        if p < 2 {
            return Err(WodzickiError::BadDimension { p, op: "integrand" });
        }
        match even {
            EvenPath::Shortcut if p == 2 => SymbolExpr::one(),
            EvenPath::Shortcut => inverse_power_symbol((p - 2) / 2)?,
            EvenPath::Generic => d2_symbol().compose(&inverse_power_symbol(p / 2)?, order),
        }
    } else {
        if p < 3 {
            return Err(WodzickiError::BadDimension { p, op: "integrand" });
        }
        let power = inverse_power_symbol((p - 1) / 2)?;
        let abs = abs_symbol_full(-1);
        match odd {
            OddPath::PowerThenAbs => power.compose(&abs, order),
            OddPath::AbsThenPower => abs.compose(&power, order),
        }
    };
    Ok(s.homogeneous(order)?.mod_norm())
}

/// `σ_{−p}(|D|^{2−p})` at the base point with `‖ξ‖ = 1`.
pub fn integrand(p: u32) -> Result<SymbolExpr, WodzickiError> {
    integrand_with(p, EvenPath::Shortcut, OddPath::PowerThenAbs)
}
