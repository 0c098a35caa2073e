use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use dixmier::{Run, SingularValueSeq};

use crate::ModelError;

/// Spin structure along one circle direction: periodic or antiperiodic spinors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SpinOffset {
    #[default]
    Zero,
    Half,
}

impl SpinOffset {
    pub fn value(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Half => 0.5,
        }
    }

    /// `j`-th integer in order of increasing `|k + offset|`, ties by increasing `k`.
    fn kth(self, j: u32) -> i64 {
        let j = i64::from(j);
        match self {
            Self::Zero if j == 0 => 0,
            Self::Zero if j % 2 == 1 => -(j + 1) / 2,
            Self::Zero => j / 2,
            Self::Half if j % 2 == 0 => -(j / 2) - 1,
            Self::Half => (j - 1) / 2,
        }
    }
}

/// Circle of the given radius with Dirac operator `-i d/dθ` twisted by the offset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleSpec {
    pub spin_offset: SpinOffset,
    pub radius: f64,
}

impl Default for CircleSpec {
    fn default() -> Self {
        Self { spin_offset: SpinOffset::Zero, radius: 1.0 }
    }
}

/// Singular values `radius / |n + offset|` of `|D|⁻¹`, each with multiplicity 2
/// from the pair `±`; the kernel at offset 0 is dropped.
pub fn circle_singular_values(c: CircleSpec) -> Result<SingularValueSeq, ModelError> {
    if !(c.radius.is_finite() && c.radius > 0.0) {
        return Err(ModelError::BadRadius(c.radius));
    }
    let CircleSpec { spin_offset, radius } = c;
    let seq = match spin_offset {
        SpinOffset::Zero => {
            SingularValueSeq::from_run_fn("circle", move |k| Run::new(radius / (k as f64 + 1.0), 2)).with_kernel_dim(1)
        }
        SpinOffset::Half => SingularValueSeq::from_run_fn("circle", move |k| Run::new(radius / (k as f64 + 0.5), 2)),
    };
    Ok(seq)
}

/// Flat torus `∏ R/(2π rᵢ Z)` with a spin structure per direction.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSpec {
    p: usize,
    radii: Vec<f64>,
    offsets: Vec<SpinOffset>,
}

pub(crate) const MAX_TORUS_DIM: usize = 4;

impl TorusSpec {
    pub fn new(radii: Vec<f64>, offsets: Vec<SpinOffset>) -> Result<Self, ModelError> {
        let p = radii.len();
        if !(2..=MAX_TORUS_DIM).contains(&p) {
            return Err(ModelError::BadTorus(format!("dimension {p} outside 2..={MAX_TORUS_DIM}")));
        }
        if offsets.len() != p {
            return Err(ModelError::BadTorus(format!("{} offsets for dimension {p}", offsets.len())));
        }
        if let Some(&r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(ModelError::BadRadius(r));
        }
        Ok(Self { p, radii, offsets })
    }

    /// Unit radii, periodic spin structure.
    pub fn unit(p: usize) -> Result<Self, ModelError> {
        Self::new(vec![1.0; p], vec![SpinOffset::Zero; p])
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Spinor dimension `2^⌊p/2⌋`.
    pub fn spinor_dim(&self) -> u64 {
        1 << (self.p / 2)
    }

    fn coordinate_sq(&self, axis: usize, j: u32) -> (f64, i64) {
        let k = self.offsets[axis].kth(j);
        let x = (k as f64 + self.offsets[axis].value()) / self.radii[axis];
        (x * x, k)
    }
}

#[derive(Clone, Debug)]
struct Node {
    norm_sq: f64,
    k: [i64; MAX_TORUS_DIM],
    j: [u32; MAX_TORUS_DIM],
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm_sq.total_cmp(&other.norm_sq).then_with(|| self.k.cmp(&other.k))
    }
}

/// Dual-lattice points `(|ξ|², k)` with `ξᵢ = (kᵢ + offsetᵢ)/rᵢ`, ordered by
/// `|ξ|²` and then lexicographically by `k`.
///
/// Each axis is listed in increasing `|kᵢ + offsetᵢ|` (ties by increasing
/// `kᵢ`), so a point's key never decreases along an axis. A heap over index
/// tuples then yields the points in order; each tuple is reached exactly
/// once by only advancing axes at or after its last nonzero index.
pub fn torus_lattice(t: &TorusSpec) -> impl Iterator<Item = (f64, Vec<i64>)> {
    let p = t.p;
    let t = t.clone();
    let node = move |j: [u32; MAX_TORUS_DIM]| {
        let mut k = [0i64; MAX_TORUS_DIM];
        let mut norm_sq = 0.0;
        for axis in 0..t.p {
            let (sq, ki) = t.coordinate_sq(axis, j[axis]);
            norm_sq += sq;
            k[axis] = ki;
        }
        Node { norm_sq, k, j }
    };
    let mut heap = BinaryHeap::from([Reverse(node([0; MAX_TORUS_DIM]))]);
    std::iter::from_fn(move || {
        let Reverse(top) = heap.pop()?;
        let last_nonzero = (0..p).rev().find(|&a| top.j[a] != 0).unwrap_or(0);
        for axis in last_nonzero..p {
            let mut j = top.j;
            j[axis] += 1;
            heap.push(Reverse(node(j)));
        }
        Some((top.norm_sq, top.k[..p].to_vec()))
    })
}

/// Singular values of `|D|⁻¹` on the torus: `1/|ξ|` per dual-lattice point,
/// times the spinor dimension; the zero mode is dropped.
pub fn torus_singular_values(t: &TorusSpec) -> SingularValueSeq {
    let spinor = t.spinor_dim();
    let kernel = if t.offsets.iter().all(|&o| o == SpinOffset::Zero) { spinor } else { 0 };
    let spec = t.clone();
    SingularValueSeq::from_source("torus", move || {
        let mut points = torus_lattice(&spec).filter(|(n, _)| *n > 0.0).peekable();
        std::iter::from_fn(move || {
            let (norm_sq, _) = points.next()?;
            let mut count = 1;
            while points.next_if(|(n, _)| *n == norm_sq).is_some() {
                count += 1;
            }
            Some(Run::new(norm_sq.sqrt().recip(), count * spinor))
        })
    })
    .with_kernel_dim(kernel)
}

/// Round 2-sphere: `|D|` has eigenvalue `k+1` with multiplicity `4(k+1)`.
#[cfg(feature = "experimental")]
pub fn sphere_singular_values() -> SingularValueSeq {
    SingularValueSeq::from_run_fn("sphere", |k| Run::new(1.0 / (k as f64 + 1.0), 4 * (k + 1)))
}
