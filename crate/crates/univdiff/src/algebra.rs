use std::ops::Range;

use exact::{qi_int, QMatrix};

/// Basis element of a model algebra.
pub type Label = i64;

/// Commutative unital algebra with a monomial basis and a truncated representation.
pub trait ModelAlgebra: Sync {
    fn name(&self) -> &str;
    fn unit(&self) -> Label;
    /// Product of basis elements; `None` if it vanishes.
    fn mul(&self, a: Label, b: Label) -> Option<Label>;
    fn star(&self, a: Label) -> Label;
    /// Basis elements used to generate random chains and kernel searches.
    fn generators(&self) -> Vec<Label>;
    fn represent_element(&self, a: Label) -> QMatrix;
    fn dirac(&self) -> &QMatrix;
    /// Index range on which represented identities hold exactly.
    fn window(&self) -> Range<usize>;
}

/// Laurent polynomials `C[u, u⁻¹]` on `ℓ²(ℤ)` truncated to `|n| ≤ cutoff`,
/// with `u` the shift `eₙ ↦ eₙ₊₁` and `D = diag(n)`.
///
/// Label `k` stands for `uᵏ`.
#[derive(Clone, Debug)]
pub struct LaurentModel {
    cutoff: i64,
    margin: i64,
    max_power: i64,
    dirac: QMatrix,
}

impl LaurentModel {
    /// `max_power` bounds the generators `u^k`; `margin` is the distance from
    /// the truncation edge to the window and must cover the total shift of
    /// every represented word.
    pub fn new(cutoff: i64, margin: i64, max_power: i64) -> Self {
        assert!(margin < cutoff, "window must be nonempty");
        let size = (2 * cutoff + 1) as usize;
        let dirac =
            QMatrix::from_fn(size, size, |r, c| if r == c { qi_int(r as i64 - cutoff, 0) } else { qi_int(0, 0) });
        Self { cutoff, margin, max_power, dirac }
    }

    pub fn size(&self) -> usize {
        (2 * self.cutoff + 1) as usize
    }

    pub fn margin(&self) -> i64 {
        self.margin
    }
}

impl Default for LaurentModel {
    fn default() -> Self {
        Self::new(16, 10, 2)
    }
}

impl ModelAlgebra for LaurentModel {
    fn name(&self) -> &str {
        "circle"
    }

    fn unit(&self) -> Label {
        0
    }

    fn mul(&self, a: Label, b: Label) -> Option<Label> {
        Some(a + b)
    }

    fn star(&self, a: Label) -> Label {
        -a
    }

    fn generators(&self) -> Vec<Label> {
        (-self.max_power..=self.max_power).collect()
    }

    fn represent_element(&self, k: Label) -> QMatrix {
        let size = self.size();
        QMatrix::from_fn(size, size, |r, c| if r as i64 == c as i64 + k { qi_int(1, 0) } else { qi_int(0, 0) })
    }

    fn dirac(&self) -> &QMatrix {
        &self.dirac
    }

    fn window(&self) -> Range<usize> {
        self.margin as usize..(2 * self.cutoff + 1 - self.margin) as usize
    }
}

/// Functions on `n` points, `C^n`, acting diagonally.
///
/// Label `0` is the unit and label `k ∈ 1..n` the idempotent `e_k`; the last
/// idempotent is `1 - Σ e_k`.
#[derive(Clone, Debug)]
pub struct DiagonalModel {
    points: usize,
    dirac: QMatrix,
}

impl DiagonalModel {
    /// Model with a diagonal Dirac matrix with the given entries.
    pub fn new(eigenvalues: &[i64]) -> Self {
        let n = eigenvalues.len();
        let dirac = QMatrix::from_fn(n, n, |r, c| if r == c { qi_int(eigenvalues[r], 0) } else { qi_int(0, 0) });
        Self { points: n, dirac }
    }

    /// Model with an arbitrary Hermitian Dirac matrix.
    pub fn with_dirac(dirac: QMatrix) -> Self {
        assert_eq!(dirac, dirac.adjoint(), "Dirac matrix must be Hermitian");
        Self { points: dirac.rows(), dirac }
    }
}

impl Default for DiagonalModel {
    fn default() -> Self {
        Self::new(&[1, 2, 3, 5])
    }
}

impl ModelAlgebra for DiagonalModel {
    fn name(&self) -> &str {
        "diagonal"
    }

    fn unit(&self) -> Label {
        0
    }

    fn mul(&self, a: Label, b: Label) -> Option<Label> {
        match (a, b) {
            (0, x) | (x, 0) => Some(x),
            (x, y) if x == y => Some(x),
            _ => None,
        }
    }

    fn star(&self, a: Label) -> Label {
        a
    }

    fn generators(&self) -> Vec<Label> {
        (0..self.points as Label).collect()
    }

    fn represent_element(&self, a: Label) -> QMatrix {
        let n = self.points;
        QMatrix::from_fn(n, n, |r, c| {
            let on = r == c && (a == 0 || r as Label == a - 1);
            qi_int(i64::from(on), 0)
        })
    }

    fn dirac(&self) -> &QMatrix {
        &self.dirac
    }

    fn window(&self) -> Range<usize> {
        0..self.points
    }
}
