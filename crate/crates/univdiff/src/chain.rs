use std::collections::BTreeMap;

use exact::{qi_int, Qi};
use num_traits::Zero;

use crate::{Label, ModelAlgebra, UnivDiffError};

/// Formal linear combination of tensors `a₀ ⊗ ⋯ ⊗ aₙ` of fixed degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalChain {
    degree: usize,
    terms: BTreeMap<Vec<Label>, Qi>,
}

impl UniversalChain {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    /// Single tensor; its degree is `labels.len() - 1`.
    pub fn monomial(alg: &dyn ModelAlgebra, coeff: Qi, labels: Vec<Label>) -> Self {
        assert!(!labels.is_empty(), "a chain needs at least the a₀ slot");
        let mut c = Self::zero(labels.len() - 1);
        c.add_term(alg, labels, coeff);
        c
    }

    /// The algebra element `a` as a degree-0 chain.
    pub fn element(alg: &dyn ModelAlgebra, a: Label) -> Self {
        Self::monomial(alg, qi_int(1, 0), vec![a])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Label>, &Qi)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · labels`, dropping degenerate tensors (unit past slot 0).
    pub fn add_term(&mut self, alg: &dyn ModelAlgebra, labels: Vec<Label>, coeff: Qi) {
        assert_eq!(labels.len(), self.degree + 1, "tensor length must match degree");
        if coeff.is_zero() || labels[1..].contains(&alg.unit()) {
            return;
        }
        let slot = self.terms.entry(labels).or_insert_with(Qi::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// Adds `coeff · a₀·(product)` where the first slot is a product that may vanish.
    fn add_product_term(&mut self, alg: &dyn ModelAlgebra, head: Option<Label>, tail: &[Label], coeff: Qi) {
        if let Some(h) = head {
            let mut labels = Vec::with_capacity(tail.len() + 1);
            labels.push(h);
            labels.extend_from_slice(tail);
            self.add_term(alg, labels, coeff);
        }
    }

    pub fn add(&self, other: &Self, alg: &dyn ModelAlgebra) -> Result<Self, UnivDiffError> {
        self.combine(other, alg, qi_int(1, 0))
    }

    pub fn sub(&self, other: &Self, alg: &dyn ModelAlgebra) -> Result<Self, UnivDiffError> {
        self.combine(other, alg, qi_int(-1, 0))
    }

    fn combine(&self, other: &Self, alg: &dyn ModelAlgebra, factor: Qi) -> Result<Self, UnivDiffError> {
        if self.is_zero() {
            return Ok(other.scale(&factor));
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(UnivDiffError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (labels, c) in &other.terms {
            out.add_term(alg, labels.clone(), c * &factor);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Qi) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        Self { degree: self.degree, terms: self.terms.iter().map(|(l, c)| (l.clone(), c * s)).collect() }
    }
}

/// Hochschild boundary with the cyclic last term.
pub fn hochschild_b(c: &UniversalChain, alg: &dyn ModelAlgebra) -> Result<UniversalChain, UnivDiffError> {
    let n = c.degree();
    if n == 0 {
        return Err(UnivDiffError::NoBoundary);
    }
    let mut out = UniversalChain::zero(n - 1);
    for (labels, coeff) in c.terms() {
        for i in 0..n {
            let mut merged = Vec::with_capacity(n);
            merged.extend_from_slice(&labels[..i]);
            let Some(m) = alg.mul(labels[i], labels[i + 1]) else {
                continue;
            };
            merged.push(m);
            merged.extend_from_slice(&labels[i + 2..]);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out.add_term(alg, merged, coeff * qi_int(sign, 0));
        }
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        out.add_product_term(alg, alg.mul(labels[n], labels[0]), &labels[1..n], coeff * qi_int(sign, 0));
    }
    Ok(out)
}

/// `a₀ δa₁ ⋯ δaₙ ↦ δa₀ δa₁ ⋯ δaₙ`.
pub fn delta(c: &UniversalChain, alg: &dyn ModelAlgebra) -> UniversalChain {
    let mut out = UniversalChain::zero(c.degree() + 1);
    for (labels, coeff) in c.terms() {
        let mut shifted = Vec::with_capacity(labels.len() + 1);
        shifted.push(alg.unit());
        shifted.extend_from_slice(labels);
        out.add_term(alg, shifted, coeff.clone());
    }
    out
}

/// `a · ω`.
pub fn left_mul(a: Label, c: &UniversalChain, alg: &dyn ModelAlgebra) -> UniversalChain {
    let mut out = UniversalChain::zero(c.degree());
    for (labels, coeff) in c.terms() {
        out.add_product_term(alg, alg.mul(a, labels[0]), &labels[1..], coeff.clone());
    }
    out
}

/// `ω · a`, normalized with `(δx) a = δ(xa) - x δa`.
pub fn right_mul(c: &UniversalChain, a: Label, alg: &dyn ModelAlgebra) -> UniversalChain {
    let mut out = UniversalChain::zero(c.degree());
    for (labels, coeff) in c.terms() {
        right_mul_tensor(labels, a, coeff.clone(), alg, &mut out);
    }
    out
}

fn right_mul_tensor(labels: &[Label], a: Label, coeff: Qi, alg: &dyn ModelAlgebra, out: &mut UniversalChain) {
    let n = labels.len() - 1;
    if n == 0 {
        out.add_product_term(alg, alg.mul(labels[0], a), &[], coeff);
        return;
    }
    // ω' δx · a = ω' δ(xa) - (ω' x) δa
    let (prefix, x) = (&labels[..n], labels[n]);
    if let Some(xa) = alg.mul(x, a) {
        let mut first = prefix.to_vec();
        first.push(xa);
        out.add_term(alg, first, coeff.clone());
    }
    let mut partial = UniversalChain::zero(n - 1);
    right_mul_tensor(prefix, x, coeff, alg, &mut partial);
    for (p, c) in partial.terms() {
        let mut second = p.clone();
        second.push(a);
        out.add_term(alg, second, -c.clone());
    }
}

/// Product `ω · ρ` in the universal differential algebra.
pub fn product(omega: &UniversalChain, rho: &UniversalChain, alg: &dyn ModelAlgebra) -> UniversalChain {
    let mut out = UniversalChain::zero(omega.degree() + rho.degree());
    for (r, rc) in rho.terms() {
        let shifted = right_mul(omega, r[0], alg);
        for (l, lc) in shifted.terms() {
            let mut labels = l.clone();
            labels.extend_from_slice(&r[1..]);
            out.add_term(alg, labels, lc * rc);
        }
    }
    out
}

/// `σ(ω δa) = (-1)^{|ω|} (δa) ω`; identity in degree 0.
pub fn sigma_op(c: &UniversalChain, alg: &dyn ModelAlgebra) -> UniversalChain {
    let n = c.degree();
    if n == 0 {
        return c.clone();
    }
    let sign = qi_int(if n % 2 == 1 { 1 } else { -1 }, 0);
    let mut out = UniversalChain::zero(n);
    for (labels, coeff) in c.terms() {
        let da = UniversalChain::monomial(alg, sign.clone() * coeff, vec![alg.unit(), labels[n]]);
        let omega = UniversalChain::monomial(alg, qi_int(1, 0), labels[..n].to_vec());
        for (l, lc) in product(&da, &omega, alg).terms() {
            out.add_term(alg, l.clone(), lc.clone());
        }
    }
    out
}

/// Involution with `(δa)* = -δ(a*)` and `(ωρ)* = ρ* ω*`.
pub fn adjoint(c: &UniversalChain, alg: &dyn ModelAlgebra) -> UniversalChain {
    let n = c.degree();
    let mut out = UniversalChain::zero(n);
    for (labels, coeff) in c.terms() {
        // (a₀ δa₁ ⋯ δaₙ)* = (-1)ⁿ δaₙ* ⋯ δa₁* · a₀*
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        let mut reversed = vec![alg.unit()];
        reversed.extend(labels[1..].iter().rev().map(|&a| alg.star(a)));
        let mut rev_chain = UniversalChain::zero(n);
        rev_chain.add_term(alg, reversed, coeff.conj() * qi_int(sign, 0));
        for (l, lc) in right_mul(&rev_chain, alg.star(labels[0]), alg).terms() {
            out.add_term(alg, l.clone(), lc.clone());
        }
    }
    out
}
