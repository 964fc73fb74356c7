//! Mode-wise projections: Leray projection, Biot-Savart, spectral cutoff.

use num_complex::Complex64;

use crate::field::SpectralField;
use crate::ops;
use crate::vector::SpectralVectorField;
use crate::Result;

/// Leray projection onto divergence-free fields: per mode,
/// `v^ -> v^ - xi (xi . v^) / |xi|^2`.
pub fn leray_project(v: &SpectralVectorField) -> SpectralVectorField {
    let mut out = v.clone();
    leray_project_in_place(&mut out);
    out
}

/// In-place variant of [`leray_project`], for callers that own the field and
/// want to avoid a full copy.
pub fn leray_project_in_place(v: &mut SpectralVectorField) {
    let grid = *v.grid();
    for (i1, i2, i3) in grid.indices() {
        if i1 == 0 && i2 == 0 && i3 == 0 {
            continue;
        }
        let idx = grid.flat(i1, i2, i3);
        let xi = grid.xi(i1, i2, i3);
        let m2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        let dot = (0..3).map(|c| v.component(c).coeffs()[idx] * xi[c]).sum::<Complex64>() / m2;
        for c in 0..3 {
            v.component_mut(c).coeffs[idx] -= dot * xi[c];
        }
    }
}

/// Inverse curl on divergence-free data: `B = (-Delta)^{-1} curl J`, so that
/// `curl B = J` whenever `div J = 0`.
pub fn biot_savart(j: &SpectralVectorField) -> SpectralVectorField {
    ops::curl(&ops::inverse_laplacian_vec(j))
}

/// Sharp annulus cutoff: keep modes with `1/n <= |xi| <= n`.
pub fn spectral_cutoff(field: &SpectralField, n: u32) -> Result<SpectralField> {
    let lo = 1.0 / n as f64;
    let hi = n as f64;
    ops::apply_radial_multiplier(field, |r| if r >= lo && r <= hi { 1.0 } else { 0.0 })
}

/// Component-wise annulus cutoff of a vector field.
pub fn spectral_cutoff_vec(v: &SpectralVectorField, n: u32) -> Result<SpectralVectorField> {
    ops::map_components(v, |c| spectral_cutoff(c, n))
}
