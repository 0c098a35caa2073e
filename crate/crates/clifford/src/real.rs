use num_complex::Complex;
use serde::Serialize;

use crate::{build_gammas, chirality, CMatrix, CliffordError, GammaSet, Signature};

/// Signs `(ε, ε′, ε″)` of a real structure; `ε″` is absent in odd dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignRow {
    pub p: usize,
    pub eps: i8,
    pub eps_prime: i8,
    pub eps_double_prime: Option<i8>,
}

/// The mod-8 sign table for real structures.
pub fn expected_signs(p: usize) -> SignRow {
    const EPS: [i8; 8] = [1, 1, -1, -1, -1, -1, 1, 1];
    const EPS_PRIME: [i8; 8] = [1, -1, 1, 1, 1, -1, 1, 1];
    const EPS_DOUBLE_PRIME: [Option<i8>; 8] = [Some(1), None, Some(-1), None, Some(1), None, Some(-1), None];
    let k = p % 8;
    SignRow { p, eps: EPS[k], eps_prime: EPS_PRIME[k], eps_double_prime: EPS_DOUBLE_PRIME[k] }
}

/// Antilinear `J v = C · conj(v)` on the Euclidean spinor module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealStructure {
    pub p: usize,
    /// Unitary, with first nonzero entry equal to 1.
    pub c: CMatrix,
    pub signs: SignRow,
}

impl RealStructure {
    /// `J²`, `J γ^a J⁻¹` and `J ω_C J⁻¹` checked against the stored signs.
    pub fn verify(&self, gammas: &GammaSet) -> bool {
        let dim = self.c.dim();
        let sign = |s: i8| Complex::new(i64::from(s), 0);
        let squares = &self.c * &self.c.conj() == CMatrix::scalar(dim, sign(self.signs.eps));
        let unitary = &self.c.adjoint() * &self.c == CMatrix::identity(dim);
        let gens =
            gammas.gammas().iter().all(|g| &self.c * &g.conj() == (g * &self.c).scale(sign(self.signs.eps_prime)));
        let grading = match (self.signs.eps_double_prime, chirality(gammas)) {
            (Some(e), Ok(w)) => &self.c * &w.conj() == (&w * &self.c).scale(sign(e)),
            (None, _) => true,
            (Some(_), Err(_)) => false,
        };
        squares && unitary && gens && grading
    }
}

/// Finds `C` with `C conj(γ^a) = ε′ γ^a C` by averaging over the Clifford group.
///
/// `Σ_S ε′^|S| γ_S X γ_Sᵀ` intertwines the representation with its twisted
/// conjugate for any seed `X`; matrix units are tried until it is nonzero.
/// Even dimension fixes `ε′ = 1`; odd dimension admits exactly one sign.
pub fn find_real_structure(p: usize) -> Result<RealStructure, CliffordError> {
    let gammas = build_gammas(Signature::euclidean(p)?)?;
    let candidates: &[i64] = if p.is_multiple_of(2) { &[1] } else { &[1, -1] };
    for &eps_prime in candidates {
        if let Some(c) = average_intertwiner(&gammas, eps_prime) {
            return finish(p, &gammas, c, eps_prime);
        }
    }
    Err(CliffordError::NoRealStructure(p))
}

fn average_intertwiner(gammas: &GammaSet, eps_prime: i64) -> Option<CMatrix> {
    let p = gammas.gammas().len();
    let dim = gammas.dim();
    let products: Vec<(CMatrix, i64)> = (0u32..1 << p)
        .map(|mask| {
            let idx: Vec<usize> = (0..p).filter(|a| mask & (1 << a) != 0).collect();
            let sign = if idx.len().is_multiple_of(2) { 1 } else { eps_prime };
            (gammas.product(&idx), sign)
        })
        .collect();
    (0..dim * dim).find_map(|unit| {
        let mut seed = CMatrix::zeros(dim);
        seed.set(unit / dim, unit % dim, Complex::new(1, 0));
        let mut sum = CMatrix::zeros(dim);
        for (g, sign) in &products {
            sum = &sum + &(&(g * &seed) * &g.transpose()).scale(Complex::new(*sign, 0));
        }
        (!sum.is_zero()).then_some(sum)
    })
}

fn finish(p: usize, gammas: &GammaSet, raw: CMatrix, eps_prime: i64) -> Result<RealStructure, CliffordError> {
    let fail = || CliffordError::NoRealStructure(p);
    let lead = raw.first_nonzero().ok_or_else(fail)?;
    let c = raw.div_exact(lead).ok_or_else(fail)?;
    let to_sign = |z: Complex<i64>| match (z.re, z.im) {
        (1, 0) => Some(1i8),
        (-1, 0) => Some(-1i8),
        _ => None,
    };
    let eps = (&c * &c.conj()).as_scalar().and_then(to_sign).ok_or_else(fail)?;
    let eps_double_prime = if p.is_multiple_of(2) {
        let w = chirality(gammas)?;
        let lhs = &c * &w.conj();
        let rhs = &w * &c;
        if lhs == rhs {
            Some(1)
        } else if lhs == -&rhs {
            Some(-1)
        } else {
            return Err(fail());
        }
    } else {
        None
    };
    let structure = RealStructure { p, c, signs: SignRow { p, eps, eps_prime: eps_prime as i8, eps_double_prime } };
    if structure.verify(gammas) {
        Ok(structure)
    } else {
        Err(fail())
    }
}
