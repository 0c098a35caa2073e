use exact::{qi_int, QMatrix};
use num_complex::Complex;

use crate::{CMatrix, CliffordError, MAX_DIM};

/// Metric signature with `r` generators squaring to `-1` and `s` squaring to `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    r: usize,
    s: usize,
}

impl Signature {
    pub fn new(r: usize, s: usize) -> Result<Self, CliffordError> {
        match r + s {
            0 => Err(CliffordError::EmptySignature { r, s }),
            p if p > MAX_DIM => Err(CliffordError::TooLarge(p)),
            _ => Ok(Self { r, s }),
        }
    }

    pub fn euclidean(p: usize) -> Result<Self, CliffordError> {
        Self::new(p, 0)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn p(&self) -> usize {
        self.r + self.s
    }

    /// Diagonal entry `η^{aa}` for a zero-based generator index.
    pub fn eta(&self, a: usize) -> i64 {
        if a < self.r {
            1
        } else {
            -1
        }
    }
}

/// Generators `γ^a` with `γ^a γ^b + γ^b γ^a = -2 η^{ab}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSet {
    signature: Signature,
    gammas: Vec<CMatrix>,
}

impl GammaSet {
    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Spinor dimension `2^⌊p/2⌋`.
    pub fn dim(&self) -> usize {
        self.gammas[0].dim()
    }

    pub fn gammas(&self) -> &[CMatrix] {
        &self.gammas
    }

    /// Zero-based generator access.
    pub fn gamma(&self, a: usize) -> &CMatrix {
        &self.gammas[a]
    }

    /// Ordered product of generators, e.g. `&[0, 2]` gives `γ^1 γ^3`.
    pub fn product(&self, indices: &[usize]) -> CMatrix {
        indices.iter().fold(CMatrix::identity(self.dim()), |acc, &a| &acc * &self.gammas[a])
    }

    /// The sign convention: every anticommutator equals `-2 η^{ab}`.
    pub fn anticommutators_hold(&self) -> bool {
        let p = self.gammas.len();
        (0..p).all(|a| {
            (a..p).all(|b| {
                let ga = &self.gammas[a];
                let gb = &self.gammas[b];
                let anti = &(ga * gb) + &(gb * ga);
                let expected = if a == b { -2 * self.signature.eta(a) } else { 0 };
                anti == CMatrix::scalar(self.dim(), Complex::new(expected, 0))
            })
        })
    }

    /// Generators with `η = +1` are anti-Hermitian, the others Hermitian.
    pub fn hermiticity_holds(&self) -> bool {
        self.gammas.iter().enumerate().all(|(a, g)| {
            let adj = g.adjoint();
            if self.signature.eta(a) == 1 {
                adj == -g
            } else {
                adj == *g
            }
        })
    }
}

/// Builds the generators by the tensor ladder `p -> p + 2`.
///
/// The seed is `[i]` for odd `p` and the empty set for even `p`. Each step
/// maps `γ -> γ ⊗ σ₃` and appends `1 ⊗ iσ₁`, `1 ⊗ iσ₂`. The last `s`
/// generators are then multiplied by `i`.
pub fn build_gammas(sig: Signature) -> Result<GammaSet, CliffordError> {
    let p = sig.p();
    if p > MAX_DIM {
        return Err(CliffordError::TooLarge(p));
    }
    let c = |re, im| Complex::new(re, im);
    let zero = c(0, 0);
    let sigma3 = CMatrix::from_rows(&[&[c(1, 0), zero], &[zero, c(-1, 0)]]);
    let i_sigma1 = CMatrix::from_rows(&[&[zero, c(0, 1)], &[c(0, 1), zero]]);
    let i_sigma2 = CMatrix::from_rows(&[&[zero, c(1, 0)], &[c(-1, 0), zero]]);

    let mut gammas = if p % 2 == 1 { vec![CMatrix::scalar(1, c(0, 1))] } else { Vec::new() };
    let mut dim = 1;
    while gammas.len() < p {
        let id = CMatrix::identity(dim);
        gammas = gammas.iter().map(|g| g.kron(&sigma3)).collect();
        gammas.push(id.kron(&i_sigma1));
        gammas.push(id.kron(&i_sigma2));
        dim *= 2;
    }
    for g in gammas.iter_mut().skip(sig.r()) {
        *g = g.scale(c(0, 1));
    }
    Ok(GammaSet { signature: sig, gammas })
}

/// Complex volume form `ω_C = i^⌊(p+1)/2⌋ γ^1 ⋯ γ^p`.
pub fn chirality(g: &GammaSet) -> Result<CMatrix, CliffordError> {
    let sig = g.signature();
    if sig.s() != 0 {
        return Err(CliffordError::NotEuclidean(sig.s()));
    }
    let p = sig.p();
    let phase = match p.div_ceil(2) % 4 {
        0 => Complex::new(1, 0),
        1 => Complex::new(0, 1),
        2 => Complex::new(-1, 0),
        _ => Complex::new(0, -1),
    };
    Ok(g.product(&(0..p).collect::<Vec<_>>()).scale(phase))
}

/// Real 2×2 generators of `Cliff_{1,1}`: `v = v₁ e₁ + v₂ e₂ = [[v₂, v₁], [-v₁, -v₂]]`.
pub fn cliff11_reference() -> [CMatrix; 2] {
    let c = |re| Complex::new(re, 0);
    [CMatrix::from_rows(&[&[c(0), c(1)], &[c(-1), c(0)]]), CMatrix::from_rows(&[&[c(1), c(0)], &[c(0), c(-1)]])]
}

/// Invertible `S` with `S · from[a] = to[a] · S` for every generator, if one exists.
pub fn intertwiner(from: &[CMatrix], to: &[CMatrix]) -> Option<QMatrix> {
    assert_eq!(from.len(), to.len(), "generator count mismatch");
    let n = from.first()?.dim();
    let unknown = |i: usize, j: usize| i * n + j;
    let mut system = QMatrix::zeros(from.len() * n * n, n * n);
    for (a, (f, t)) in from.iter().zip(to).enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = (a * n + i) * n + j;
                for k in 0..n {
                    let fz = f.get(k, j);
                    system[(row, unknown(i, k))] += qi_int(fz.re, fz.im);
                    let tz = t.get(i, k);
                    system[(row, unknown(k, j))] -= qi_int(tz.re, tz.im);
                }
            }
        }
    }
    system.nullspace().into_iter().find_map(|v| {
        let s = QMatrix::from_fn(n, n, |i, j| v[unknown(i, j)].clone());
        (s.rank() == n).then_some(s)
    })
}
