use std::ops::{Add, Mul, Neg, Sub};

use exact::{qi_int, QMatrix};
use num_complex::Complex;
use num_traits::Zero;

/// Square matrix over the Gaussian integers.
///
/// Every matrix the gamma ladder produces has entries in `{0, ±1, ±i}`, so
/// machine integers keep all arithmetic exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex<i64>>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Complex::new(1, 0))
    }

    pub fn scalar(dim: usize, z: Complex<i64>) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.data[k * dim + k] = z;
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex<i64>]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self { dim, data: rows.iter().flat_map(|r| r.iter().copied()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<i64> {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, z: Complex<i64>) {
        self.data[r * self.dim + c] = z;
    }

    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim * other.dim;
        let mut out = Self::zeros(n);
        for (i, j) in (0..self.dim).flat_map(|i| (0..self.dim).map(move |j| (i, j))) {
            let a = self.get(i, j);
            if a.is_zero() {
                continue;
            }
            for (k, l) in (0..other.dim).flat_map(|k| (0..other.dim).map(move |l| (k, l))) {
                out.set(i * other.dim + k, j * other.dim + l, a * other.get(k, l));
            }
        }
        out
    }

    pub fn scale(&self, z: Complex<i64>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * z).collect() }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> Complex<i64> {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Returns `z` if the matrix equals `z · Id`.
    pub fn as_scalar(&self) -> Option<Complex<i64>> {
        let z = self.get(0, 0);
        (*self == Self::scalar(self.dim, z)).then_some(z)
    }

    pub fn first_nonzero(&self) -> Option<Complex<i64>> {
        self.data.iter().copied().find(|x| !x.is_zero())
    }

    /// Exact division by a Gaussian integer; `None` if some entry is not divisible.
    pub fn div_exact(&self, z: Complex<i64>) -> Option<Self> {
        let norm = z.norm_sqr();
        let data = self
            .data
            .iter()
            .map(|x| {
                let w = x * z.conj();
                (w.re % norm == 0 && w.im % norm == 0).then(|| Complex::new(w.re / norm, w.im / norm))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self { dim: self.dim, data })
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_fn(self.dim, self.dim, |r, c| {
            let z = self.get(r, c);
            qi_int(z.re, z.im)
        })
    }

    /// Rows as `[re, im]` pairs, for serialization.
    pub fn to_pairs(&self) -> Vec<Vec<[i64; 2]>> {
        (0..self.dim).map(|r| (0..self.dim).map(|c| [self.get(r, c).re, self.get(r, c).im]).collect()).collect()
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix size mismatch");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix size mismatch");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix size mismatch");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().map(|a| -a).collect() }
    }
}
