//! Canonical commutative spectral triples with closed-form spectra.
//!
//! Circle and flat-torus Dirac spectra are produced as singular-value run
//! streams for the `dixmier` estimators. The volume constant `c(p)` and the
//! sphere volume are evaluated in closed form, and the spectral distance is
//! computed on finite metric graphs both as a shortest path and as the
//! Lipschitz linear program it dualizes.

mod distance;
mod spectra;
mod volume;

pub use distance::{connes_distance, lp_distance, MetricGraph};
#[cfg(feature = "experimental")]
pub use spectra::sphere_singular_values;
pub use spectra::{circle_singular_values, torus_lattice, torus_singular_values, CircleSpec, SpinOffset, TorusSpec};
pub use volume::{
    c_p, circle_volume_check, sphere_volume, torus_volume_check, volume_identity, VolumeCheck, VolumeIdentity,
};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ModelError {
    #[error("invalid torus: {0}")]
    BadTorus(String),
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("dimension {0} is outside the supported range")]
    BadDimension(usize),
    #[error("edge ({0}, {1}) has invalid length {2}")]
    BadEdge(usize, usize, f64),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("vertices {0} and {1} lie in different components; the distance is unbounded")]
    Disconnected(usize, usize),
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error(transparent)]
    Dixmier(#[from] dixmier::DixmierError),
}
