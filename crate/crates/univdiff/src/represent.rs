use std::collections::{BTreeSet, HashMap};

use exact::{qi_int, QMatrix, Qi, Span};

use crate::{delta, Label, ModelAlgebra, UnivDiffError, UniversalChain};

/// Upper bound on monomials enumerated for a kernel search.
const MONOMIAL_LIMIT: usize = 2000;

struct RepCache<'a> {
    alg: &'a dyn ModelAlgebra,
    elements: HashMap<Label, QMatrix>,
    commutators: HashMap<Label, QMatrix>,
}

impl<'a> RepCache<'a> {
    fn new(alg: &'a dyn ModelAlgebra) -> Self {
        Self { alg, elements: HashMap::new(), commutators: HashMap::new() }
    }

    fn element(&mut self, a: Label) -> QMatrix {
        let alg = self.alg;
        self.elements.entry(a).or_insert_with(|| alg.represent_element(a)).clone()
    }

    fn commutator(&mut self, a: Label) -> QMatrix {
        if let Some(m) = self.commutators.get(&a) {
            return m.clone();
        }
        let m = self.alg.dirac().commutator(&self.element(a));
        self.commutators.insert(a, m.clone());
        m
    }
}

/// `a₀ ⊗ ⋯ ⊗ aₙ ↦ π(a₀)[D, π(a₁)] ⋯ [D, π(aₙ)]` on the full truncated space.
pub fn represent(c: &UniversalChain, alg: &dyn ModelAlgebra) -> QMatrix {
    let mut cache = RepCache::new(alg);
    let size = alg.dirac().rows();
    let mut out = QMatrix::zeros(size, size);
    for (labels, coeff) in c.terms() {
        let mut m = cache.element(labels[0]);
        for &a in &labels[1..] {
            m = &m * &cache.commutator(a);
        }
        out = &out + &m.scale(coeff);
    }
    out
}

/// [`represent`] restricted to the model's exactness window.
pub fn represent_window(c: &UniversalChain, alg: &dyn ModelAlgebra) -> QMatrix {
    let w = alg.window();
    represent(c, alg).block(w.start, w.end)
}

/// `[[D, π(a)], π(b)] = 0` on the window for all generator pairs.
pub fn first_order_holds(alg: &dyn ModelAlgebra) -> bool {
    let mut cache = RepCache::new(alg);
    let w = alg.window();
    let gens = alg.generators();
    gens.iter().all(|&a| {
        gens.iter().all(|&b| {
            let da = cache.commutator(a);
            da.commutator(&cache.element(b)).block(w.start, w.end).is_zero()
        })
    })
}

/// Spanning set of `π(δ ker π)` in a given degree, restricted to the window.
#[derive(Clone, Debug)]
pub struct JunkBasis {
    pub degree: usize,
    pub matrices: Vec<QMatrix>,
    span: Span,
}

impl JunkBasis {
    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    /// Membership of a window-sized matrix in the junk span.
    pub fn contains(&self, m: &QMatrix) -> bool {
        self.span.contains(m.entries())
    }
}

/// Computes `ker π` in degree `degree - 1` over monomials in the generators,
/// with the first slot ranging over products of up to `degree` generators,
/// applies `δ` and collects the represented images.
pub fn junk_basis(alg: &dyn ModelAlgebra, degree: usize) -> Result<JunkBasis, UnivDiffError> {
    if degree == 0 {
        return Err(UnivDiffError::BadJunkDegree(0));
    }
    let gens = alg.generators();
    let non_unit: Vec<Label> = gens.iter().copied().filter(|&g| g != alg.unit()).collect();
    // Normal ordering multiplies labels into the first slot, so it ranges over
    // products of up to `degree` generators.
    let mut heads: BTreeSet<Label> = gens.iter().copied().collect();
    for _ in 1..degree {
        let grown: Vec<Label> = heads.iter().flat_map(|&h| gens.iter().filter_map(move |&g| alg.mul(h, g))).collect();
        heads.extend(grown);
    }
    let count = heads.len() * non_unit.len().pow(degree as u32 - 1);
    if count > MONOMIAL_LIMIT {
        return Err(UnivDiffError::TooManyMonomials { degree, monomials: count, limit: MONOMIAL_LIMIT });
    }
    let monomials: Vec<Vec<Label>> = (1..degree).fold(heads.iter().map(|&g| vec![g]).collect(), |acc, _| {
        acc.into_iter().flat_map(|m| non_unit.iter().map(move |&g| [m.clone(), vec![g]].concat())).collect()
    });
    let images: Vec<QMatrix> = monomials
        .iter()
        .map(|m| represent_window(&UniversalChain::monomial(alg, qi_int(1, 0), m.clone()), alg))
        .collect();
    let entries = images.first().map_or(0, |m| m.entries().len());
    let system = QMatrix::from_fn(entries, monomials.len(), |r, c| images[c].entries()[r].clone());

    let mut span = Span::new();
    let mut matrices = Vec::new();
    for kernel_vector in system.nullspace() {
        let mut chain = UniversalChain::zero(degree - 1);
        for (m, coeff) in monomials.iter().zip(kernel_vector) {
            chain.add_term(alg, m.clone(), coeff);
        }
        let junk = represent_window(&delta(&chain, alg), alg);
        if span.insert(junk.entries()) {
            matrices.push(junk);
        }
    }
    Ok(JunkBasis { degree, matrices, span })
}

/// `(δa, δb) = Tr([D, π(a)]* [D, π(b)]) / M` with `M` the window size.
pub fn omega1_form(alg: &dyn ModelAlgebra, a: Label, b: Label) -> Qi {
    let mut cache = RepCache::new(alg);
    let da = cache.commutator(a);
    let db = cache.commutator(b);
    let w = alg.window();
    let size = (w.end - w.start) as i64;
    (&da.adjoint() * &db).block(w.start, w.end).trace() / qi_int(size, 0)
}
