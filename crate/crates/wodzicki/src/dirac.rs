use std::collections::BTreeMap;
use std::fmt;

use clifford::{gamma_word_trace, GammaWord, Index};
use exact::{fmt_rational, Rational};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cosphere::{ser_rational, ScalarInvariant};
use crate::WodzickiError;

/// Label reserved for the free vector index of `a^ν`.
const FREE: u8 = u8::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Field {
    /// Spin connection `ω_μ`.
    Omega,
    /// Torsion endomorphism `T_μ = ½ t_{μab} γ^a γ^b`.
    Torsion,
}

/// Letter of an operator word; fields and brackets are spinor endomorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Letter {
    Partial(u8),
    Field {
        field: Field,
        index: u8,
        der: Option<u8>,
    },
    /// `½γ^{μν}[∇_μ, ∇_ν]`, rewritten to `¼R`.
    Curvature,
    /// `γ^{μν}[∇_μ, T_ν]`, a total divergence.
    TorsionGradient,
    /// `½γ^{μν}[T_μ, T_ν]`.
    TorsionBracket,
}

impl Letter {
    fn map_labels(self, f: &mut impl FnMut(u8) -> u8) -> Letter {
        match self {
            Letter::Partial(i) => Letter::Partial(f(i)),
            Letter::Field { field, index, der } => Letter::Field { field, index: f(index), der: der.map(f) },
            other => other,
        }
    }
}

type Word = Vec<Letter>;

/// Noncommutative polynomial in operator words with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpPoly {
    terms: BTreeMap<Word, Rational>,
}

/// Relabels dummies by first appearance, keeping the free label fixed.
fn relabel(word: &[Letter]) -> Word {
    let mut map: BTreeMap<u8, u8> = BTreeMap::new();
    let mut f = |l: u8| {
        if l == FREE {
            return FREE;
        }
        let n = map.len() as u8;
        *map.entry(l).or_insert(n)
    };
    word.iter().map(|x| x.map_labels(&mut f)).collect()
}

fn max_label(word: &[Letter]) -> u8 {
    let mut m = 0;
    for x in word {
        x.map_labels(&mut |l| {
            if l != FREE {
                m = m.max(l + 1);
            }
            l
        });
    }
    m
}

impl OpPoly {
    pub fn word(letters: Vec<Letter>, c: Rational) -> OpPoly {
        let mut p = OpPoly::default();
        p.add_term(letters, c);
        p
    }

    fn add_term(&mut self, word: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(relabel(&word)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[Letter]) -> Rational {
        self.terms.get(&relabel(word)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &OpPoly) -> OpPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> OpPoly {
        let mut out = OpPoly::default();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Product with the labels of each factor taken literally (shared labels contract).
    pub fn mul_literal(&self, other: &OpPoly) -> OpPoly {
        let mut out = OpPoly::default();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.iter().chain(w2).copied().collect(), c1 * c2);
            }
        }
        out
    }

    /// Moves every `∂` to the right with `∂_i X = X ∂_i + X_{,i}`.
    pub fn normal_ordered(&self) -> Result<OpPoly, WodzickiError> {
        let mut pending: Vec<(Word, Rational)> = self.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut out = OpPoly::default();
        while let Some((w, c)) = pending.pop() {
            let hit =
                w.windows(2).position(|p| matches!(p[0], Letter::Partial(_)) && !matches!(p[1], Letter::Partial(_)));
            let Some(j) = hit else {
                out.add_term(w, c);
                continue;
            };
            let Letter::Partial(i) = w[j] else { unreachable!() };
            let Letter::Field { field, index, der: None } = w[j + 1] else {
                return Err(WodzickiError::NotReducible(format!("derivative of {} not tracked", w[j + 1])));
            };
            let mut swapped = w.clone();
            swapped.swap(j, j + 1);
            pending.push((swapped, c.clone()));
            let mut hit = w.clone();
            hit.splice(j..j + 2, [Letter::Field { field, index, der: Some(i) }]);
            pending.push((hit, c));
        }
        Ok(out)
    }

    /// `∂_FREE` of every field, then contracts `FREE` with the derivative index.
    fn divergence(&self) -> Result<OpPoly, WodzickiError> {
        let mut out = OpPoly::default();
        for (w, c) in &self.terms {
            let fresh = max_label(w);
            for (j, x) in w.iter().enumerate() {
                if let Letter::Field { field, index, der } = *x {
                    if der.is_some() {
                        return Err(WodzickiError::NotReducible("second derivative in a^μ".into()));
                    }
                    let mut d = w.clone();
                    d[j] = Letter::Field { field, index, der: Some(FREE) };
                    let d: Word =
                        d.into_iter().map(|x| x.map_labels(&mut |l| if l == FREE { fresh } else { l })).collect();
                    out.add_term(d, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// `v^ν w_ν` for two polynomials carrying the free index.
    fn dot(&self, other: &OpPoly) -> OpPoly {
        let mut out = OpPoly::default();
        for (w1, c1) in &self.terms {
            let shift = max_label(w1);
            for (w2, c2) in &other.terms {
                let fresh = shift + max_label(w2);
                let mut f1 = |l: u8| if l == FREE { fresh } else { l };
                let mut f2 = |l: u8| if l == FREE { fresh } else { l + shift };
                let word: Word =
                    w1.iter().map(|x| x.map_labels(&mut f1)).chain(w2.iter().map(|x| x.map_labels(&mut f2))).collect();
                out.add_term(word, c1 * c2);
            }
        }
        out
    }

    pub fn render(&self) -> Vec<String> {
        self.terms.iter().map(|(w, c)| format!("({})·{}", fmt_rational(c), render_word(w))).collect()
    }
}

const NAMES: [&str; 6] = ["μ", "ν", "ρ", "σ", "α", "β"];

fn label_name(l: u8) -> String {
    if l == FREE {
        "ν".into()
    } else {
        NAMES.get(l as usize).map(|s| s.to_string()).unwrap_or(format!("i{l}"))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Partial(i) => write!(f, "∂_{}", label_name(*i)),
            Letter::Field { field, index, der } => {
                let name = if *field == Field::Omega { "ω" } else { "T" };
                match der {
                    None => write!(f, "{name}^{}", label_name(*index)),
                    Some(d) => write!(f, "{name}^{}_,{}", label_name(*index), label_name(*d)),
                }
            }
            Letter::Curvature => write!(f, "½γ^μν[∇_μ,∇_ν]"),
            Letter::TorsionGradient => write!(f, "γ^μν[∇_μ,T_ν]"),
            Letter::TorsionBracket => write!(f, "½γ^μν[T_μ,T_ν]"),
        }
    }
}

fn render_word(w: &[Letter]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// `D²` for `D = γ^μ(∇_μ + T_μ)` in elliptic form `−g^{μν}∂_μ∂_ν + a^μ∂_μ + b`.
#[derive(Clone, Debug)]
pub struct SquaredDirac {
    pub torsion: bool,
    /// Coefficient of `∂_μ∂_μ`; `−1` for a Laplace-type operator.
    pub principal: Rational,
    /// `a^ν`, carrying the free index.
    pub a: OpPoly,
    pub b: OpPoly,
    /// `b − ½a^μ_{,μ} + ¼a^μa_μ`.
    pub remainder: OpPoly,
}

fn field(f: Field, index: u8) -> Letter {
    Letter::Field { field: f, index, der: None }
}

impl SquaredDirac {
    /// `(ω, T)` coefficients in `a^ν`.
    pub fn a_coefficients(&self) -> (Rational, Rational) {
        (self.a.coefficient(&[field(Field::Omega, FREE)]), self.a.coefficient(&[field(Field::Torsion, FREE)]))
    }

    /// Coefficient of `T^μ_{,μ}` in the remainder.
    pub fn torsion_divergence(&self) -> Rational {
        self.remainder.coefficient(&[Letter::Field { field: Field::Torsion, index: 0, der: Some(0) }])
    }
}

/// Squares `D = γ^μ∇'_μ`, `∇' = ∂ + ω + T`, in Riemann normal coordinates at the
/// base point.
///
/// Starts from `D² = −g^{μν}∇'_μ∇'_ν + C^ν∇'_ν + ½γ^{μν}[∇'_μ,∇'_ν]` with the input
/// rewrite rules `C^ν = γ^μ[∇'_μ,γ^ν] = Γ^ν − 4T^ν`, `Γ^ν = 0`, and
/// `½γ^{μν}[∇'_μ,∇'_ν] = ½γ^{μν}[∇_μ,∇_ν] + γ^{μν}[∇_μ,T_ν] + ½γ^{μν}[T_μ,T_ν]`.
pub fn square_dirac(torsion: bool) -> Result<SquaredDirac, WodzickiError> {
    let one = Rational::one;
    let nabla = |i: u8| {
        let mut p =
            OpPoly::word(vec![Letter::Partial(i)], one()).add(&OpPoly::word(vec![field(Field::Omega, i)], one()));
        if torsion {
            p = p.add(&OpPoly::word(vec![field(Field::Torsion, i)], one()));
        }
        p
    };
    let mut d2 = nabla(0).mul_literal(&nabla(0)).scale(&-one());
    d2 = d2.add(&OpPoly::word(vec![Letter::Curvature], one()));
    if torsion {
        let c = OpPoly::word(vec![field(Field::Torsion, 1)], Rational::from_integer((-4).into()));
        d2 = d2.add(&c.mul_literal(&nabla(1)));
        d2 = d2.add(&OpPoly::word(vec![Letter::TorsionGradient], one()));
        d2 = d2.add(&OpPoly::word(vec![Letter::TorsionBracket], one()));
    }
    let d2 = d2.normal_ordered()?;

    let mut principal = Rational::zero();
    let mut a = OpPoly::default();
    let mut b = OpPoly::default();
    for (w, c) in d2.terms() {
        let partials: Vec<usize> = (0..w.len()).filter(|&j| matches!(w[j], Letter::Partial(_))).collect();
        match partials.as_slice() {
            [] => b.add_term(w.clone(), c.clone()),
            [j] if *j == w.len() - 1 => {
                let Letter::Partial(l) = w[*j] else { unreachable!() };
                let word: Word = w[..*j].iter().map(|x| x.map_labels(&mut |k| if k == l { FREE } else { k })).collect();
                a.add_term(word, c.clone());
            }
            [0, 1] if w.len() == 2 && w[0] == w[1] => principal += c,
            _ => return Err(WodzickiError::NotReducible(format!("unexpected operator word {}", render_word(w)))),
        }
    }
    let half = Rational::new(1.into(), 2.into());
    let quarter = Rational::new(1.into(), 4.into());
    let remainder = b.add(&a.divergence()?.scale(&-half)).add(&a.dot(&a).scale(&quarter));
    Ok(SquaredDirac { torsion, principal, a, b, remainder })
}

/// Spinor traces of the torsion terms, in units of `2^⌊p/2⌋ t_{abc}t^{abc}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionTraces {
    pub p: u32,
    /// `tr(T^μT_μ)`.
    #[serde(serialize_with = "ser_rational")]
    pub t_squared: Rational,
    /// `tr(½γ^{μν}[T_μ,T_ν])`.
    #[serde(serialize_with = "ser_rational")]
    pub bracket: Rational,
    /// `λ` in `γ^μ[T_μ,γ^ν] = λT^ν`, from `tr(γ^μ[T_μ,γ^ν]T_ν) / tr(T^νT_ν)`.
    #[serde(serialize_with = "ser_rational")]
    pub commutator: Rational,
}

/// Contracts a gamma-word trace against `t_{s₀s₁s₂} t_{u₀u₁u₂}` for totally
/// antisymmetric `t`; result is a multiple of `2^⌊p/2⌋ t_{abc}t^{abc}`.
fn torsion_pair_trace(word: &[u32], t1: [u32; 3], t2: [u32; 3], p: u32) -> Result<Rational, WodzickiError> {
    let trace = gamma_word_trace(&GammaWord::labels(word), p as usize)?;
    let mut total = Rational::zero();
    for (pairs, c) in trace.poly.terms() {
        let partner = |l: u32| -> u32 {
            if !word.contains(&l) {
                return l;
            }
            for &(x, y) in pairs {
                match (x, y) {
                    (Index::Sym(a), Index::Sym(b)) if a == l => return b,
                    (Index::Sym(a), Index::Sym(b)) if b == l => return a,
                    _ => {}
                }
            }
            unreachable!("label {l} unpaired")
        };
        let mut perm = [0usize; 3];
        let mut ok = true;
        for (i, &l) in t1.iter().enumerate() {
            let other = partner(l);
            match t2.iter().position(|&u| u == other) {
                Some(j) if !(t1.contains(&other) && word.contains(&l)) => perm[i] = j,
                _ => ok = false,
            }
        }
        let distinct = perm[0] != perm[1] && perm[1] != perm[2] && perm[0] != perm[2];
        if !ok || !distinct || !c.im.is_zero() {
            if !c.im.is_zero() {
                return Err(WodzickiError::NotReal(format!("trace of {word:?}")));
            }
            continue;
        }
        let inversions =
            (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        total += Rational::from_integer((sign * c.re).into());
    }
    Ok(total)
}

/// Evaluates the torsion traces with the Clifford trace engine.
pub fn torsion_traces(p: u32) -> Result<TorsionTraces, WodzickiError> {
    if !(2..=8).contains(&p) {
        return Err(WodzickiError::BadDimension { p, op: "torsion_traces" });
    }
    let quarter = Rational::new(1.into(), 4.into());
    let (mu, nu, a, b, c, d) = (0, 1, 2, 3, 4, 5);
    // T^μT_μ = ¼ t_{μab} t_{μcd} γ^aγ^bγ^cγ^d
    let t_squared = torsion_pair_trace(&[a, b, c, d], [mu, a, b], [mu, c, d], p)? * &quarter;
    // ½γ^{μν}[T_μ,T_ν] with γ^{μν} = ½[γ^μ,γ^ν]
    let words: [([u32; 6], i64); 4] =
        [([mu, nu, a, b, c, d], 1), ([mu, nu, c, d, a, b], -1), ([nu, mu, a, b, c, d], -1), ([nu, mu, c, d, a, b], 1)];
    let mut bracket = Rational::zero();
    for (w, s) in words {
        bracket += torsion_pair_trace(&w, [mu, a, b], [nu, c, d], p)? * Rational::from_integer(s.into());
    }
    bracket *= Rational::new(1.into(), 16.into());
    // γ^μ[T_μ,γ^ν]T_ν = ¼ t_{μab} t_{νcd} (γ^μγ^aγ^bγ^νγ^cγ^d − γ^μγ^νγ^aγ^bγ^cγ^d)
    let lhs = (torsion_pair_trace(&[mu, a, b, nu, c, d], [mu, a, b], [nu, c, d], p)?
        - torsion_pair_trace(&[mu, nu, a, b, c, d], [mu, a, b], [nu, c, d], p)?)
        * &quarter;
    let commutator = lhs / &t_squared;
    Ok(TorsionTraces { p, t_squared, bracket, commutator })
}

/// Spinor trace of the squared-Dirac remainder `b − ½a^μ_{,μ} + ¼a^μa_μ`.
///
/// Commutators drop by cyclicity, `½γ^{μν}[∇_μ,∇_ν] = ¼R`, torsion words go
/// through [`torsion_traces`], and `γ^{μν}[∇_μ,T_ν]` is kept as the boundary term.
pub fn trace_reduce(sq: &SquaredDirac, p: u32) -> Result<ScalarInvariant, WodzickiError> {
    let traces = torsion_traces(p)?;
    let mut classes: BTreeMap<Word, Rational> = BTreeMap::new();
    for (w, c) in sq.remainder.terms() {
        let rep = (0..w.len().max(1))
            .map(|k| {
                let mut r = w.clone();
                r.rotate_left(k.min(w.len()));
                relabel(&r)
            })
            .min()
            .unwrap_or_default();
        *classes.entry(rep).or_insert_with(Rational::zero) += c;
    }
    let mut out = ScalarInvariant { spinor_traced: true, ..Default::default() };
    let t = |i| field(Field::Torsion, i);
    for (w, c) in classes.into_iter().filter(|(_, c)| !c.is_zero()) {
        match w.as_slice() {
            [Letter::Curvature] => out.r += c * Rational::new(1.into(), 4.into()),
            [Letter::TorsionGradient] => out.boundary += c,
            [Letter::TorsionBracket] => out.t2 += c * &traces.bracket,
            [x, y] if *x == t(0) && *y == t(0) => out.t2 += c * &traces.t_squared,
            // tr(T^μ_{,μ}) = ½ t_{μab,μ} tr(γ^aγ^b) vanishes by antisymmetry
            [Letter::Field { field: Field::Torsion, index: 0, der: Some(0) }] => {}
            _ => return Err(WodzickiError::NotReducible(render_word(&w))),
        }
    }
    Ok(out)
}
