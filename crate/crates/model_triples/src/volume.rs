use std::f64::consts::PI;

use dixmier::{dixmier_estimate, TraceEstimate};
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::{circle_singular_values, torus_singular_values, CircleSpec, ModelError, TorusSpec};

const MAX_VOLUME_DIM: usize = 12;

/// `c(p) = 2^⌊p/2⌋ / ((4π)^{p/2} Γ(p/2 + 1))`.
pub fn c_p(p: usize) -> f64 {
    let p_f = p as f64;
    (1u64 << (p / 2)) as f64 / ((4.0 * PI).powf(p_f / 2.0) * gamma(p_f / 2.0 + 1.0))
}

/// `Vol(S^{p-1}) = (4π)^{p/2} / (2^{p-1} Γ(p/2))`.
pub fn sphere_volume(p: usize) -> f64 {
    let p_f = p as f64;
    (4.0 * PI).powf(p_f / 2.0) / (2f64.powi(p as i32 - 1) * gamma(p_f / 2.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeIdentity {
    pub p: usize,
    /// `2^⌊p/2⌋ Vol(S^{p-1}) / (p (2π)^p)`.
    pub lhs: f64,
    /// `c(p)`.
    pub rhs: f64,
    pub relative_error: f64,
    pub equal: bool,
}

pub fn volume_identity(p: usize) -> Result<VolumeIdentity, ModelError> {
    if !(1..=MAX_VOLUME_DIM).contains(&p) {
        return Err(ModelError::BadDimension(p));
    }
    let lhs = (1u64 << (p / 2)) as f64 * sphere_volume(p) / (p as f64 * (2.0 * PI).powi(p as i32));
    let rhs = c_p(p);
    let relative_error = ((lhs - rhs) / rhs).abs();
    Ok(VolumeIdentity { p, lhs, rhs, relative_error, equal: relative_error <= 1e-12 })
}

/// Dixmier estimate of `|D|^{-p}` against `c(p) · Vol`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeCheck {
    pub estimate: TraceEstimate,
    pub c_p_vol: f64,
    pub ratio: f64,
}

pub fn circle_volume_check(c: CircleSpec, schedule: &[u64]) -> Result<VolumeCheck, ModelError> {
    let estimate = dixmier_estimate(&circle_singular_values(c)?, schedule)?;
    let c_p_vol = c_p(1) * 2.0 * PI * c.radius;
    Ok(VolumeCheck { ratio: estimate.value / c_p_vol, estimate, c_p_vol })
}

pub fn torus_volume_check(t: &TorusSpec, schedule: &[u64]) -> Result<VolumeCheck, ModelError> {
    let p = t.p();
    let seq = torus_singular_values(t).powered(p as f64);
    let estimate = dixmier_estimate(&seq, schedule)?;
    let c_p_vol = c_p(p) * t.radii().iter().map(|r| 2.0 * PI * r).product::<f64>();
    Ok(VolumeCheck { ratio: estimate.value / c_p_vol, estimate, c_p_vol })
}
