use std::collections::BTreeMap;
use std::fmt;

use exact::{fmt_qi, qi_int, Qi, Rational};
use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::WodzickiError;

/// Where a tensor slot is contracted: with `ξ`, with `x`, or with another atom through a dummy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    Dummy(u8),
    Xi,
    X,
}

/// Non-leaf tensor factor at the base point.
///
/// `Curv` is the second Taylor coefficient of the inverse metric,
/// `g^{rs}_{,mn} = -⅓ R^{rs}_{mn}`, hence symmetric in each pair and under pair
/// exchange. `A` and `B` are Taylor coefficients of the matrix-valued fields of
/// `D² = -g^{μν}∂_μ∂_ν + a^μ∂_μ + b` and keep their relative order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Atom {
    Curv([Slot; 4]),
    A { index: Slot, ders: Vec<Slot> },
    B { ders: Vec<Slot> },
}

impl Atom {
    fn slots(&self) -> Vec<Slot> {
        match self {
            Atom::Curv(s) => s.to_vec(),
            Atom::A { index, ders } => std::iter::once(*index).chain(ders.iter().copied()).collect(),
            Atom::B { ders } => ders.clone(),
        }
    }

    fn map_slots(&self, f: &impl Fn(Slot) -> Slot) -> Atom {
        match self {
            Atom::Curv(s) => Atom::Curv(s.map(f)),
            Atom::A { index, ders } => Atom::A { index: f(*index), ders: ders.iter().map(|&d| f(d)).collect() },
            Atom::B { ders } => Atom::B { ders: ders.iter().map(|&d| f(d)).collect() },
        }
    }

    /// Representative under the slot symmetries.
    fn normalized(mut self) -> Atom {
        match &mut self {
            Atom::Curv(s) => {
                let first = if s[0] <= s[1] { [s[0], s[1]] } else { [s[1], s[0]] };
                let second = if s[2] <= s[3] { [s[2], s[3]] } else { [s[3], s[2]] };
                let (lo, hi) = if first <= second { (first, second) } else { (second, first) };
                *s = [lo[0], lo[1], hi[0], hi[1]];
            }
            Atom::A { ders, .. } | Atom::B { ders } => ders.sort(),
        }
        self
    }
}

/// Canonical monomial `p^dim ‖ξ‖^norm (ξ·x)^xi_x (x·x)^x_x · scalars · matrices`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Monomial {
    norm: i32,
    dim: u32,
    xi_x: u8,
    x_x: u8,
    scalars: Vec<Atom>,
    matrices: Vec<Atom>,
}

impl Monomial {
    pub fn new(norm: i32, scalars: Vec<Atom>, matrices: Vec<Atom>) -> Monomial {
        let raw = Monomial { norm, dim: 0, xi_x: 0, x_x: 0, scalars, matrices }.expand(Qi::one(), 0);
        canonicalize(raw).0
    }

    pub fn norm(&self) -> i32 {
        self.norm
    }

    pub fn dim_power(&self) -> u32 {
        self.dim
    }

    pub fn scalars(&self) -> &[Atom] {
        &self.scalars
    }

    pub fn matrices(&self) -> &[Atom] {
        &self.matrices
    }

    fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        self.scalars.iter().chain(&self.matrices).flat_map(|a| a.slots())
    }

    /// Number of slots contracted with `ξ`.
    pub fn xi_slots(&self) -> usize {
        self.slots().filter(|&s| s == Slot::Xi).count()
    }

    /// Homogeneity degree in `ξ`.
    pub fn degree(&self) -> i32 {
        self.norm + self.xi_slots() as i32 + self.xi_x as i32
    }

    /// Polynomial degree in `x`.
    pub fn x_degree(&self) -> i32 {
        self.slots().filter(|&s| s == Slot::X).count() as i32 + self.xi_x as i32 + 2 * self.x_x as i32
    }

    /// `degree − x_degree`: additive under composition and the lowest order the
    /// term can reach at the base point.
    pub fn potential(&self) -> i32 {
        self.degree() - self.x_degree()
    }

    fn dummies(&self) -> u8 {
        self.slots().filter_map(|s| if let Slot::Dummy(d) = s { Some(d + 1) } else { None }).max().unwrap_or(0)
    }

    fn with_norm(&self, norm: i32) -> Monomial {
        Monomial { norm, ..self.clone() }
    }

    /// Explicit form with labels starting at `base`; `ξ` and `x` become leaf atoms.
    fn expand(&self, coeff: Qi, base: Label) -> Raw {
        let mut next = base + self.dummies() as Label;
        let mut leaves = Vec::new();
        let mut label = |slot: Slot, leaves: &mut Vec<RawAtom>| -> Label {
            match slot {
                Slot::Dummy(d) => base + d as Label,
                Slot::Xi | Slot::X => {
                    let l = next;
                    next += 1;
                    leaves.push(if slot == Slot::Xi { RawAtom::Xi(l) } else { RawAtom::X(l) });
                    l
                }
            }
        };
        let mut convert = |atom: &Atom, leaves: &mut Vec<RawAtom>| match atom {
            Atom::Curv(s) => RawAtom::Curv(s.map(|x| label(x, leaves))),
            Atom::A { index, ders } => {
                RawAtom::A { index: label(*index, leaves), ders: ders.iter().map(|&d| label(d, leaves)).collect() }
            }
            Atom::B { ders } => RawAtom::B { ders: ders.iter().map(|&d| label(d, leaves)).collect() },
        };
        let mut scalars: Vec<RawAtom> = self.scalars.iter().map(|a| convert(a, &mut leaves)).collect();
        let matrices: Vec<RawAtom> = self.matrices.iter().map(|a| convert(a, &mut leaves)).collect();
        scalars.append(&mut leaves);
        for _ in 0..self.xi_x {
            scalars.extend([RawAtom::Xi(next), RawAtom::X(next)]);
            next += 1;
        }
        for _ in 0..self.x_x {
            scalars.extend([RawAtom::X(next), RawAtom::X(next)]);
            next += 1;
        }
        Raw { coeff, norm: self.norm, dim: self.dim, scalars, matrices, next }
    }
}

const GREEK: [&str; 8] = ["μ", "ν", "ρ", "σ", "α", "β", "κ", "λ"];

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Xi => write!(f, "ξ"),
            Slot::X => write!(f, "x"),
            Slot::Dummy(d) => match GREEK.get(*d as usize) {
                Some(g) => write!(f, "{g}"),
                None => write!(f, "i{d}"),
            },
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &[Slot]| s.iter().map(|x| x.to_string()).collect::<String>();
        match self {
            Atom::Curv(s) => write!(f, "R[{}|{}]", join(&s[..2]), join(&s[2..])),
            Atom::A { index, ders } if ders.is_empty() => write!(f, "a[{index}]"),
            Atom::A { index, ders } => write!(f, "a[{index};{}]", join(ders)),
            Atom::B { ders } if ders.is_empty() => write!(f, "b"),
            Atom::B { ders } => write!(f, "b[;{}]", join(ders)),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.dim > 0 {
            parts.push(format!("p^{}", self.dim));
        }
        parts.extend(self.scalars.iter().map(|a| a.to_string()));
        if self.xi_x > 0 {
            parts.push(format!("(ξ·x)^{}", self.xi_x));
        }
        if self.x_x > 0 {
            parts.push(format!("(x·x)^{}", self.x_x));
        }
        parts.extend(self.matrices.iter().map(|a| a.to_string()));
        if self.norm != 0 {
            parts.push(format!("|ξ|^{}", self.norm));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

type Label = u16;

#[derive(Clone, Debug)]
enum RawAtom {
    Xi(Label),
    X(Label),
    Delta(Label, Label),
    Curv([Label; 4]),
    A { index: Label, ders: Vec<Label> },
    B { ders: Vec<Label> },
}

impl RawAtom {
    fn labels_mut(&mut self) -> Vec<&mut Label> {
        match self {
            RawAtom::Xi(l) | RawAtom::X(l) => vec![l],
            RawAtom::Delta(i, j) => vec![i, j],
            RawAtom::Curv(s) => s.iter_mut().collect(),
            RawAtom::A { index, ders } => std::iter::once(index).chain(ders.iter_mut()).collect(),
            RawAtom::B { ders } => ders.iter_mut().collect(),
        }
    }

    fn labels(&self) -> Vec<Label> {
        self.clone().labels_mut().into_iter().map(|l| *l).collect()
    }
}

/// Term with explicit index labels; every label occurs exactly twice once all
/// derivative indices are paired.
#[derive(Clone, Debug)]
struct Raw {
    coeff: Qi,
    norm: i32,
    dim: u32,
    scalars: Vec<RawAtom>,
    matrices: Vec<RawAtom>,
    next: Label,
}

impl Raw {
    fn atoms_mut(&mut self) -> impl Iterator<Item = &mut RawAtom> {
        self.scalars.iter_mut().chain(self.matrices.iter_mut())
    }

    fn rename_one(&mut self, from: Label, to: Label) -> bool {
        for atom in self.atoms_mut() {
            for l in atom.labels_mut() {
                if *l == from {
                    *l = to;
                    return true;
                }
            }
        }
        false
    }

    /// `∂/∂ξ_μ`.
    fn d_xi(&self, mu: Label) -> Vec<Raw> {
        let mut out = Vec::new();
        if self.norm != 0 {
            let mut t = self.clone();
            t.coeff = &t.coeff * Qi::from(Rational::from_integer(self.norm.into()));
            t.norm -= 2;
            t.scalars.push(RawAtom::Xi(mu));
            out.push(t);
        }
        for (j, atom) in self.scalars.iter().enumerate() {
            if let RawAtom::Xi(l) = *atom {
                let mut t = self.clone();
                t.scalars[j] = RawAtom::Delta(mu, l);
                out.push(t);
            }
        }
        out
    }

    /// `∂/∂x^μ`; all coefficients are constants so only `x` leaves are hit.
    fn d_x(&self, mu: Label) -> Vec<Raw> {
        self.scalars
            .iter()
            .enumerate()
            .filter_map(|(j, atom)| match *atom {
                RawAtom::X(l) => {
                    let mut t = self.clone();
                    t.scalars[j] = RawAtom::Delta(mu, l);
                    Some(t)
                }
                _ => None,
            })
            .collect()
    }

    fn times(&self, other: &Raw) -> Raw {
        Raw {
            coeff: &self.coeff * &other.coeff,
            norm: self.norm + other.norm,
            dim: self.dim + other.dim,
            scalars: self.scalars.iter().chain(&other.scalars).cloned().collect(),
            matrices: self.matrices.iter().chain(&other.matrices).cloned().collect(),
            next: self.next.max(other.next),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Place {
    Scalar(usize, usize),
    Matrix(usize, usize),
}

/// Contracts deltas and leaves, then picks the lexicographically least dummy labelling.
fn canonicalize(mut raw: Raw) -> (Monomial, Qi) {
    while let Some(pos) = raw.scalars.iter().position(|a| matches!(a, RawAtom::Delta(..))) {
        let RawAtom::Delta(i, j) = raw.scalars.remove(pos) else { unreachable!() };
        if i == j {
            raw.dim += 1;
        } else if !raw.rename_one(j, i) {
            let found = raw.rename_one(i, j);
            debug_assert!(found, "delta with two free indices");
        }
    }

    let mut places: BTreeMap<Label, Vec<Place>> = BTreeMap::new();
    for (a, atom) in raw.scalars.iter().enumerate() {
        for (s, l) in atom.labels().into_iter().enumerate() {
            places.entry(l).or_default().push(Place::Scalar(a, s));
        }
    }
    for (a, atom) in raw.matrices.iter().enumerate() {
        for (s, l) in atom.labels().into_iter().enumerate() {
            places.entry(l).or_default().push(Place::Matrix(a, s));
        }
    }
    let leaf = |p: Place| match p {
        Place::Scalar(a, _) => match raw.scalars[a] {
            RawAtom::Xi(_) => Some(Slot::Xi),
            RawAtom::X(_) => Some(Slot::X),
            _ => None,
        },
        Place::Matrix(..) => None,
    };

    let (mut norm, mut xi_x, mut x_x) = (raw.norm, 0u8, 0u8);
    let mut slot_of: BTreeMap<Label, Slot> = BTreeMap::new();
    let mut dummies = 0u8;
    for (&label, ps) in &places {
        debug_assert_eq!(ps.len(), 2, "label {label} occurs {} times", ps.len());
        match (leaf(ps[0]), leaf(ps[1])) {
            (Some(Slot::Xi), Some(Slot::Xi)) => norm += 2,
            (Some(Slot::X), Some(Slot::X)) => x_x += 1,
            (Some(_), Some(_)) => xi_x += 1,
            (Some(k), None) | (None, Some(k)) => {
                slot_of.insert(label, k);
            }
            (None, None) => {
                slot_of.insert(label, Slot::Dummy(dummies));
                dummies += 1;
            }
        }
    }

    let to_atom = |atom: &RawAtom| -> Option<Atom> {
        let s = |l: &Label| slot_of[l];
        match atom {
            RawAtom::Xi(_) | RawAtom::X(_) | RawAtom::Delta(..) => None,
            RawAtom::Curv(ls) => Some(Atom::Curv([s(&ls[0]), s(&ls[1]), s(&ls[2]), s(&ls[3])])),
            RawAtom::A { index, ders } => Some(Atom::A { index: s(index), ders: ders.iter().map(s).collect() }),
            RawAtom::B { ders } => Some(Atom::B { ders: ders.iter().map(s).collect() }),
        }
    };
    let scalars: Vec<Atom> = raw.scalars.iter().filter_map(to_atom).collect();
    let matrices: Vec<Atom> = raw.matrices.iter().filter_map(to_atom).collect();

    let build = |perm: &[u8]| -> Monomial {
        let relabel = |s: Slot| match s {
            Slot::Dummy(d) => Slot::Dummy(perm[d as usize]),
            other => other,
        };
        let mut sc: Vec<Atom> = scalars.iter().map(|a| a.map_slots(&relabel).normalized()).collect();
        sc.sort();
        let mx = matrices.iter().map(|a| a.map_slots(&relabel).normalized()).collect();
        Monomial { norm, dim: raw.dim, xi_x, x_x, scalars: sc, matrices: mx }
    };
    let best = if dummies <= 1 {
        build(&[0])
    } else {
        (0..dummies).permutations(dummies as usize).map(|perm| build(&perm)).min().expect("non-empty")
    };
    (best, raw.coeff)
}

/// Sum of canonical monomials with Gaussian-rational coefficients.
///
/// Terms are Taylor polynomials in `x` about the base point of Riemann normal
/// coordinates. `exact_above` records truncation: Taylor data beyond the stored
/// jet only affects base-point components of order `≤ exact_above`. Equality
/// compares terms only.
#[derive(Clone, Debug)]
pub struct SymbolExpr {
    terms: BTreeMap<Monomial, Qi>,
    exact_above: Option<i32>,
}

impl PartialEq for SymbolExpr {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for SymbolExpr {}

impl Default for SymbolExpr {
    fn default() -> Self {
        Self::zero()
    }
}

fn max_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    Some(a? + b?)
}

fn merge(terms: &mut BTreeMap<Monomial, Qi>, key: Monomial, coeff: Qi) {
    if coeff.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl SymbolExpr {
    pub fn zero() -> Self {
        SymbolExpr { terms: BTreeMap::new(), exact_above: None }
    }

    pub fn one() -> Self {
        Self::term(Qi::one(), Monomial::new(0, vec![], vec![]))
    }

    pub fn term(coeff: Qi, monomial: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        merge(&mut terms, monomial, coeff);
        SymbolExpr { terms, exact_above: None }
    }

    /// Declares that components of order `≤ bound` are unreliable.
    pub fn truncated(mut self, bound: i32) -> Self {
        self.exact_above = max_opt(self.exact_above, Some(bound));
        self
    }

    pub fn exact_above(&self) -> Option<i32> {
        self.exact_above
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Qi)> {
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

    pub fn coefficient(&self, monomial: &Monomial) -> Qi {
        self.terms.get(monomial).cloned().unwrap_or_else(Qi::zero)
    }

    pub fn max_potential(&self) -> Option<i32> {
        self.terms.keys().map(Monomial::potential).max()
    }

    pub fn add(&self, other: &SymbolExpr) -> SymbolExpr {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            merge(&mut terms, k.clone(), c.clone());
        }
        SymbolExpr { terms, exact_above: max_opt(self.exact_above, other.exact_above) }
    }

    pub fn scale(&self, c: &Qi) -> SymbolExpr {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            merge(&mut terms, k.clone(), v * c);
        }
        SymbolExpr { terms, exact_above: self.exact_above }
    }

    pub fn sub(&self, other: &SymbolExpr) -> SymbolExpr {
        self.add(&other.scale(&-Qi::one()))
    }

    fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> SymbolExpr {
        let terms = self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect();
        SymbolExpr { terms, exact_above: self.exact_above }
    }

    /// All terms of `ξ`-degree `d`, as functions of `x`.
    pub fn component(&self, d: i32) -> SymbolExpr {
        self.filter(|k| k.degree() == d)
    }

    /// Value at the base point `x = 0`.
    pub fn at_base(&self) -> SymbolExpr {
        self.filter(|k| k.x_degree() == 0)
    }

    /// Base-point component of order `d`; errors if truncation reaches it.
    pub fn homogeneous(&self, d: i32) -> Result<SymbolExpr, WodzickiError> {
        if let Some(bound) = self.exact_above {
            if d <= bound {
                return Err(WodzickiError::JetExhausted { order: d, exact_above: bound });
            }
        }
        Ok(self.filter(|k| k.x_degree() == 0 && k.degree() == d))
    }

    /// Sub-sums keyed by `ξ`-degree.
    pub fn grading(&self) -> BTreeMap<i32, SymbolExpr> {
        let mut out: BTreeMap<i32, SymbolExpr> = BTreeMap::new();
        for (k, v) in &self.terms {
            let slot = out
                .entry(k.degree())
                .or_insert_with(|| SymbolExpr { terms: BTreeMap::new(), exact_above: self.exact_above });
            merge(&mut slot.terms, k.clone(), v.clone());
        }
        out
    }

    /// Sets `‖ξ‖ = 1`.
    pub fn mod_norm(&self) -> SymbolExpr {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            merge(&mut terms, k.with_norm(0), v.clone());
        }
        SymbolExpr { terms, exact_above: self.exact_above }
    }

    /// Substitutes a numeric dimension for `p`.
    pub fn with_dimension(&self, p: u32) -> SymbolExpr {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let factor = Qi::from(Rational::from_integer(p.into()).pow(k.dim as i32));
            merge(&mut terms, Monomial { dim: 0, ..k.clone() }, v * factor);
        }
        SymbolExpr { terms, exact_above: self.exact_above }
    }

    /// Pointwise product, keeping terms of potential `≥ cutoff`.
    pub fn multiply(&self, other: &SymbolExpr, cutoff: i32) -> SymbolExpr {
        self.combine(other, cutoff, false)
    }

    /// Composition `σ(P∘Q) = Σ_α (−i)^{|α|}/α! ∂_ξ^α σ(P) ∂_x^α σ(Q)`, keeping
    /// terms of potential `≥ cutoff` (so every base-point order `≥ cutoff`).
    pub fn compose(&self, other: &SymbolExpr, cutoff: i32) -> SymbolExpr {
        self.combine(other, cutoff, true)
    }

    fn combine(&self, other: &SymbolExpr, cutoff: i32, derivatives: bool) -> SymbolExpr {
        const BASE: Label = 16;
        let right: Vec<(&Monomial, &Qi)> = other.terms.iter().collect();
        let chunks: Vec<Vec<(Monomial, Qi)>> = self
            .terms
            .par_iter()
            .map(|(mp, cp)| {
                let mut out = Vec::new();
                for &(mq, cq) in &right {
                    if mp.potential() + mq.potential() < cutoff {
                        continue;
                    }
                    let rp = mp.expand(cp.clone(), BASE);
                    let rq = mq.expand(cq.clone(), rp.next);
                    let kmax = if derivatives { mq.x_degree() as Label } else { 0 };
                    let mut factor = Qi::one();
                    for k in 0..=kmax {
                        if k > 0 {
                            factor = factor * qi_int(0, -1) / Qi::from(Rational::from_integer(k.into()));
                        }
                        let mut ps = vec![rp.clone()];
                        let mut qs = vec![rq.clone()];
                        for mu in 0..k {
                            ps = ps.iter().flat_map(|t| t.d_xi(mu)).collect();
                            qs = qs.iter().flat_map(|t| t.d_x(mu)).collect();
                        }
                        for p in &ps {
                            for q in &qs {
                                let mut prod = p.times(q);
                                prod.coeff = &prod.coeff * &factor;
                                out.push(canonicalize(prod));
                            }
                        }
                    }
                }
                out
            })
            .collect();
        let mut terms = BTreeMap::new();
        for (k, c) in chunks.into_iter().flatten() {
            merge(&mut terms, k, c);
        }
        let exact_above = max_opt(
            Some(cutoff.saturating_sub(1)),
            max_opt(add_opt(self.exact_above, other.max_potential()), add_opt(other.exact_above, self.max_potential())),
        );
        SymbolExpr { terms, exact_above }
    }

    /// `ξ^μ ∂/∂x^μ` applied termwise to the Taylor polynomial.
    pub fn xi_dot_dx(&self) -> SymbolExpr {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let raw = k.expand(v.clone(), 1);
            for mut t in raw.d_x(0) {
                t.scalars.push(RawAtom::Xi(0));
                let (m, c) = canonicalize(t);
                merge(&mut terms, m, c);
            }
        }
        let exact_above = self.exact_above.map(|e| e + 1);
        SymbolExpr { terms, exact_above }
    }

    /// Renders each term as `coefficient · monomial`.
    pub fn render(&self) -> Vec<String> {
        self.terms.iter().map(|(k, v)| format!("({})·{}", fmt_qi(v), k)).collect()
    }

    /// Cosphere average over the `ξ`-slots: `ξ_aξ_b ↦ δ_ab/p`,
    /// `ξ_aξ_bξ_cξ_d ↦ (δδ + δδ + δδ)/(p(p+2))`, odd moments vanish.
    pub(crate) fn sphere_average(&self, p: u32) -> Result<SymbolExpr, WodzickiError> {
        let mut terms = BTreeMap::new();
        let p_r = Rational::from_integer(p.into());
        for (k, v) in &self.terms {
            if k.x_degree() != 0 {
                return Err(WodzickiError::NotAtBase(k.to_string()));
            }
            let raw = k.with_norm(0).expand(v.clone(), 0);
            let xi: Vec<Label> =
                raw.scalars.iter().filter_map(|a| if let RawAtom::Xi(l) = a { Some(*l) } else { None }).collect();
            let pairings: Vec<Vec<(Label, Label)>> = match xi.len() {
                0 => vec![vec![]],
                n if n % 2 == 1 => continue,
                2 => vec![vec![(xi[0], xi[1])]],
                4 => vec![
                    vec![(xi[0], xi[1]), (xi[2], xi[3])],
                    vec![(xi[0], xi[2]), (xi[1], xi[3])],
                    vec![(xi[0], xi[3]), (xi[1], xi[2])],
                ],
                n => return Err(WodzickiError::MomentTooHigh(n)),
            };
            let weight = match xi.len() {
                0 => Rational::one(),
                2 => Rational::one() / &p_r,
                _ => Rational::one() / (&p_r * (&p_r + Rational::from_integer(2.into()))),
            };
            for pairing in pairings {
                let mut t = raw.clone();
                t.scalars.retain(|a| !matches!(a, RawAtom::Xi(_)));
                t.scalars.extend(pairing.into_iter().map(|(a, b)| RawAtom::Delta(a, b)));
                t.coeff = &t.coeff * Qi::from(weight.clone());
                let (m, c) = canonicalize(t);
                merge(&mut terms, m, c);
            }
        }
        Ok(SymbolExpr { terms, exact_above: self.exact_above }.with_dimension(p))
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", self.render().join(" + "))
    }
}

/// Named base-point monomials used by the closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Basis {
    /// `1`
    One,
    /// `b`
    B,
    /// `a^μ ξ_μ`
    AXi,
    /// `a^μ ξ_μ a^ν ξ_ν`
    AXiSquared,
    /// `ξ^μ a^ρ_{,μ} ξ_ρ`
    XiDaXi,
    /// `a^μ_{,μ}`
    DivA,
    /// `δ^{μν} R^{ρσ}_{μν} ξ_ρ ξ_σ`
    TraceRXiXi,
    /// `ξ^μ ξ^ν R^{ρσ}_{μν} ξ_ρ ξ_σ`
    RXiXiXiXi,
}

impl Basis {
    pub const ALL: [Basis; 8] = [
        Basis::One,
        Basis::B,
        Basis::AXi,
        Basis::AXiSquared,
        Basis::XiDaXi,
        Basis::DivA,
        Basis::TraceRXiXi,
        Basis::RXiXiXiXi,
    ];

    /// The monomial times `‖ξ‖^norm`.
    pub fn monomial(self, norm: i32) -> Monomial {
        let xi = Slot::Xi;
        let d = Slot::Dummy(0);
        let a = |index, ders| Atom::A { index, ders };
        match self {
            Basis::One => Monomial::new(norm, vec![], vec![]),
            Basis::B => Monomial::new(norm, vec![], vec![Atom::B { ders: vec![] }]),
            Basis::AXi => Monomial::new(norm, vec![], vec![a(xi, vec![])]),
            Basis::AXiSquared => Monomial::new(norm, vec![], vec![a(xi, vec![]), a(xi, vec![])]),
            Basis::XiDaXi => Monomial::new(norm, vec![], vec![a(xi, vec![xi])]),
            Basis::DivA => Monomial::new(norm, vec![], vec![a(d, vec![d])]),
            Basis::TraceRXiXi => Monomial::new(norm, vec![Atom::Curv([xi, xi, d, d])], vec![]),
            Basis::RXiXiXiXi => Monomial::new(norm, vec![Atom::Curv([xi; 4])], vec![]),
        }
    }

    pub fn expr(self, coeff: Qi, norm: i32) -> SymbolExpr {
        SymbolExpr::term(coeff, self.monomial(norm))
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::One => "1",
            Basis::B => "b",
            Basis::AXi => "a.xi",
            Basis::AXiSquared => "(a.xi)^2",
            Basis::XiDaXi => "xi.da.xi",
            Basis::DivA => "div a",
            Basis::TraceRXiXi => "tr R xi xi",
            Basis::RXiXiXiXi => "R xi xi xi xi",
        }
    }

    fn classify(m: &Monomial) -> Option<(Basis, i32)> {
        if m.x_degree() != 0 || m.dim != 0 {
            return None;
        }
        Basis::ALL.into_iter().find(|b| b.monomial(m.norm) == *m).map(|b| (b, m.norm))
    }
}

impl SymbolExpr {
    /// Coefficients on `(basis element, ‖ξ‖ power)`; errors on anything outside the basis.
    pub fn basis_coefficients(&self) -> Result<BTreeMap<(Basis, i32), Qi>, WodzickiError> {
        self.terms
            .iter()
            .map(|(k, v)| {
                Basis::classify(k).map(|b| (b, v.clone())).ok_or_else(|| WodzickiError::NotInBasis(k.to_string()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dummy_renaming_is_canonical() {
        let d0 = Slot::Dummy(0);
        let d1 = Slot::Dummy(1);
        let a = Monomial::new(0, vec![Atom::Curv([d0, d1, d0, d1])], vec![]);
        let b = Monomial::new(0, vec![Atom::Curv([d1, d0, d0, d1])], vec![]);
        assert_eq!(a, b);
        let c = Monomial::new(0, vec![Atom::Curv([d0, d0, d1, d1])], vec![]);
        assert_ne!(a, c);
    }

    #[test]
    fn xi_contractions_become_norms() {
        let raw = Raw {
            coeff: Qi::one(),
            norm: -2,
            dim: 0,
            scalars: vec![RawAtom::Xi(1), RawAtom::Xi(1), RawAtom::Delta(2, 2)],
            matrices: vec![],
            next: 3,
        };
        let (m, _) = canonicalize(raw);
        assert_eq!(m.norm(), 0);
        assert_eq!(m.dim_power(), 1);
    }
}
