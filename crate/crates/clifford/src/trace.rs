use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use num_traits::Zero;

use crate::{build_gammas, CliffordError, Signature};

/// Orthonormal frame index: a symbolic label or a concrete value in `1..=p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    Sym(u32),
    Val(usize),
}

/// Product `γ^{a₁} ⋯ γ^{aₖ}`. A label occurring twice is summed over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaWord {
    pub factors: Vec<Index>,
}

impl GammaWord {
    pub fn new(factors: Vec<Index>) -> Self {
        Self { factors }
    }

    pub fn labels(factors: &[u32]) -> Self {
        Self { factors: factors.iter().map(|&l| Index::Sym(l)).collect() }
    }

    /// Labels appearing exactly twice.
    pub fn contracted(&self) -> BTreeSet<u32> {
        let mut counts = BTreeMap::new();
        for f in &self.factors {
            if let Index::Sym(l) = f {
                *counts.entry(*l).or_insert(0usize) += 1;
            }
        }
        counts.into_iter().filter(|&(_, n)| n == 2).map(|(l, _)| l).collect()
    }
}

type Pairs = Vec<(Index, Index)>;

/// Sum of products of Kronecker deltas with Gaussian-integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeltaPoly {
    terms: BTreeMap<Pairs, Complex<i64>>,
}

impl DeltaPoly {
    pub fn terms(&self) -> impl Iterator<Item = (&Pairs, &Complex<i64>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(&self) -> Complex<i64> {
        self.terms.get(&Vec::new()).copied().unwrap_or_else(Complex::zero)
    }

    fn add_term(&mut self, mut pairs: Pairs, coeff: Complex<i64>) {
        if coeff.is_zero() {
            return;
        }
        for pair in pairs.iter_mut() {
            if pair.0 > pair.1 {
                *pair = (pair.1, pair.0);
            }
        }
        pairs.sort();
        let slot = self.terms.entry(pairs).or_insert_with(Complex::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// Evaluates with every free label assigned a concrete value.
    pub fn evaluate(&self, assign: &dyn Fn(u32) -> usize) -> Complex<i64> {
        let value = |i: Index| match i {
            Index::Sym(l) => assign(l),
            Index::Val(v) => v,
        };
        self.terms.iter().filter(|(pairs, _)| pairs.iter().all(|&(x, y)| value(x) == value(y))).map(|(_, c)| *c).sum()
    }
}

/// Symbolic spinor trace `spinor_dim · poly`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorTrace {
    pub spinor_dim: usize,
    pub poly: DeltaPoly,
}

impl SpinorTrace {
    pub fn evaluate(&self, assign: &dyn Fn(u32) -> usize) -> Complex<i64> {
        self.poly.evaluate(assign) * self.spinor_dim as i64
    }
}

/// Trace of a gamma word in the Euclidean `p`-dimensional spinor module.
///
/// Even-length words use the Wick recursion
/// `tr(γ^{a₁}⋯γ^{aₙ}) = -Σ_{j≥2} (-1)^j δ^{a₁aⱼ} tr(⋯)`, which follows from the
/// `-2δ` anticommutator and cyclicity. In odd dimension the product of all
/// generators is a scalar `λ`, so an odd word `W` has `tr W = λ⁻¹ tr(W γ^1⋯γ^p)`;
/// this is nonzero once the word reaches length `p`. Odd words vanish in even
/// dimension.
pub fn gamma_word_trace(word: &GammaWord, p: usize) -> Result<SpinorTrace, CliffordError> {
    let gammas = build_gammas(Signature::euclidean(p)?)?;
    let n = word.factors.len();
    if n > 8 {
        return Err(CliffordError::WordTooLong(n));
    }
    for f in &word.factors {
        if let Index::Val(v) = *f {
            if v == 0 || v > p {
                return Err(CliffordError::IndexOutOfRange { value: v, p });
            }
        }
    }
    let spinor_dim = gammas.dim();
    let mut poly = DeltaPoly::default();
    let (indices, prefactor) = if n.is_multiple_of(2) {
        (word.factors.clone(), Complex::new(1, 0))
    } else if p.is_multiple_of(2) {
        return Ok(SpinorTrace { spinor_dim, poly });
    } else {
        let lambda = gammas.product(&(0..p).collect::<Vec<_>>()).get(0, 0);
        let mut extended = word.factors.clone();
        extended.extend((1..=p).map(Index::Val));
        (extended, lambda.conj())
    };
    let contracted = word.contracted();
    for (sign, pairs) in wick(&indices) {
        if let Some((factor, pairs)) = contract(pairs, &contracted, p) {
            poly.add_term(pairs, prefactor * (sign * factor));
        }
    }
    Ok(SpinorTrace { spinor_dim, poly })
}

fn wick(indices: &[Index]) -> Vec<(i64, Pairs)> {
    let Some((&first, rest)) = indices.split_first() else {
        return vec![(1, Vec::new())];
    };
    let mut out = Vec::new();
    for (j, &partner) in rest.iter().enumerate() {
        let pair = match (first, partner) {
            (Index::Val(x), Index::Val(y)) if x != y => continue,
            (Index::Val(_), Index::Val(_)) => None,
            _ => Some((first, partner)),
        };
        let sign = if j % 2 == 0 { -1 } else { 1 };
        let remaining: Vec<Index> = rest.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect();
        for (s, mut pairs) in wick(&remaining) {
            pairs.extend(pair);
            out.push((sign * s, pairs));
        }
    }
    out
}

/// Sums contracted labels out of a delta product; `None` if the product vanishes.
fn contract(mut pairs: Pairs, contracted: &BTreeSet<u32>, p: usize) -> Option<(i64, Pairs)> {
    let mut factor = 1;
    for &label in contracted {
        let l = Index::Sym(label);
        let hits: Vec<usize> = (0..pairs.len()).filter(|&k| pairs[k].0 == l || pairs[k].1 == l).collect();
        match hits.as_slice() {
            [k] => {
                debug_assert_eq!(pairs[*k], (l, l));
                factor *= p as i64;
                pairs.remove(*k);
            }
            [k1, k2] => {
                let other = |(x, y): (Index, Index)| if x == l { y } else { x };
                let (x, y) = (other(pairs[*k1]), other(pairs[*k2]));
                pairs.remove(*k2);
                pairs.remove(*k1);
                match (x, y) {
                    (Index::Val(a), Index::Val(b)) if a != b => return None,
                    (Index::Val(_), Index::Val(_)) => {}
                    _ => pairs.push((x, y)),
                }
            }
            _ => unreachable!("contracted label occurs twice in the word"),
        }
    }
    Some((factor, pairs))
}
