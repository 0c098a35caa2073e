use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::scalar::{qi_int, Qi};

/// Dense row-major matrix over the Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Qi>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Qi::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = qi_int(1, 0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Qi) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Qi) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| if x.is_zero() { Qi::zero() } else { x * s }).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Qi {
        (0..self.rows.min(self.cols)).fold(Qi::zero(), |acc, k| acc + &self[(k, k)])
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Principal block on the index range `lo..hi` (rows and columns).
    pub fn block(&self, lo: usize, hi: usize) -> Self {
        Self::from_fn(hi - lo, hi - lo, |r, c| self[(lo + r, lo + c)].clone())
    }

    /// Entries flattened row-major, for treating matrices as vectors.
    pub fn entries(&self) -> &[Qi] {
        &self.data
    }

    /// Reduced row-echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = qi_int(1, 0) / self[(row, col)].clone();
            for c in col..self.cols {
                let v = &self[(row, c)] * &inv;
                self[(row, c)] = v;
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let factor = self[(r, col)].clone();
                for c in col..self.cols {
                    let v = &self[(r, c)] - &(&factor * &self[(row, c)]);
                    self[(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Qi>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Qi::zero(); self.cols];
                x[f] = qi_int(1, 0);
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = -m[(r, f)].clone();
                }
                x
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Qi;
    fn index(&self, (r, c): (usize, usize)) -> &Qi {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Qi {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }
}

fn sum_sparse(a: &Qi, b: &Qi) -> Qi {
    match (a.is_zero(), b.is_zero()) {
        (true, _) => b.clone(),
        (_, true) => a.clone(),
        _ => a + b,
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| sum_sparse(a, b)).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| if b.is_zero() { a.clone() } else { a - b }).collect(),
        }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

/// Incrementally built linear span of vectors, kept in reduced echelon form.
#[derive(Clone, Debug, Default)]
pub struct Span {
    basis: Vec<(usize, Vec<Qi>)>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Adds `v` to the span; returns `true` if the dimension grew.
    pub fn insert(&mut self, v: &[Qi]) -> bool {
        let r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = qi_int(1, 0) / r[pivot].clone();
        let r: Vec<Qi> = r.iter().map(|x| x * &inv).collect();
        for (_, b) in &mut self.basis {
            if !b[pivot].is_zero() {
                let f = b[pivot].clone();
                for (bi, ri) in b.iter_mut().zip(&r) {
                    *bi -= &f * ri;
                }
            }
        }
        self.basis.push((pivot, r));
        true
    }

    pub fn contains(&self, v: &[Qi]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    fn reduce(&self, v: &[Qi]) -> Vec<Qi> {
        let mut r = v.to_vec();
        for (pivot, b) in &self.basis {
            if !r[*pivot].is_zero() {
                let f = r[*pivot].clone();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= &f * bi;
                }
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn m(rows: usize, cols: usize, v: &[i64]) -> QMatrix {
        QMatrix::from_fn(rows, cols, |r, c| qi_int(v[r * cols + c], 0))
    }

    #[test]
    fn nullspace_of_rank_one_matrix() {
        let a = m(2, 3, &[1, 2, 3, 2, 4, 6]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for x in ns {
            let col = QMatrix::from_fn(3, 1, |r, _| x[r].clone());
            assert!((&a * &col).is_zero());
        }
    }

    #[test]
    fn span_membership() {
        let mut s = Span::new();
        assert!(s.insert(&[qi_int(1, 0), qi_int(0, 1)]));
        assert!(!s.insert(&[qi_int(0, 2), qi_int(-2, 0)]));
        assert!(s.contains(&[qi_int(3, 0), qi_int(0, 3)]));
        assert!(!s.contains(&[qi_int(1, 0), qi_int(0, 0)]));
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn adjoint_and_trace() {
        let a = QMatrix::from_fn(2, 2, |r, c| qi_int(r as i64, c as i64));
        assert_eq!(a.adjoint()[(0, 1)], qi_int(1, 0));
        assert_eq!(a.trace(), qi_int(1, 1));
        assert_eq!(
            a.scale(&crate::qi(rational(1, 2), rational(0, 1)))[(1, 1)],
            crate::qi(rational(1, 2), rational(1, 2))
        );
    }
}
