//! Fourier multipliers and the differential operators built from them.
//!
//! Odd symbols (single derivatives) have no conjugate partner on the Nyquist
//! planes `k = -N/2`, so those planes are zeroed to keep real fields real.
//! Even symbols act on the Nyquist planes as usual.

use num_complex::Complex64;

use crate::field::SpectralField;
use crate::vector::SpectralVectorField;
use crate::{Error, Result};

/// Apply a general Fourier multiplier `m(xi)` to every nonzero mode.
///
/// Returns an error if the symbol evaluates non-finite anywhere on the
/// lattice. The reality flag survives only if the symbol looks Hermitian
/// (`m(-xi) = conj m(xi)`) on a sampled set of modes. The carried mean is
/// dropped, since a general symbol need not be defined at the origin.
pub fn apply_multiplier<F>(field: &SpectralField, symbol: F) -> Result<SpectralField>
where
    F: Fn([f64; 3]) -> Complex64,
{
    let grid = field.grid;
    let mut out = field.clone();
    for (i1, i2, i3) in grid.indices() {
        if i1 == 0 && i2 == 0 && i3 == 0 {
            continue;
        }
        let idx = grid.flat(i1, i2, i3);
        let xi = grid.xi(i1, i2, i3);
        let m = symbol(xi);
        if !m.re.is_finite() || !m.im.is_finite() {
            return Err(Error::NonFiniteMultiplier { xi });
        }
        out.coeffs[idx] *= m;
    }
    if field.mean.norm() > 0.0 {
        out.mean_subtracted = true;
    }
    out.mean = Complex64::default();

    if out.real {
        // Spot-check Hermitian symmetry of the symbol on a few lattice modes.
        let probe = [[1.0, 0.0, 0.0], [0.0, 1.0, 2.0], [1.0, 1.0, 1.0], [2.0, 0.0, 1.0]];
        let l = grid.box_scale;
        for p in probe {
            let xi = [p[0] / l, p[1] / l, p[2] / l];
            let neg = [-xi[0], -xi[1], -xi[2]];
            let a = symbol(xi);
            let b = symbol(neg);
            if (a.conj() - b).norm() > 1e-12 * (1.0 + a.norm()) {
                out.real = false;
                break;
            }
        }
    }
    Ok(out)
}

/// Apply a radial real symbol `m(|xi|)`. Preserves reality exactly.
pub fn apply_radial_multiplier<F>(field: &SpectralField, symbol: F) -> Result<SpectralField>
where
    F: Fn(f64) -> f64,
{
    let grid = field.grid;
    let mut out = field.clone();
    for (i1, i2, i3) in grid.indices() {
        if i1 == 0 && i2 == 0 && i3 == 0 {
            continue;
        }
        let idx = grid.flat(i1, i2, i3);
        let xi = grid.xi(i1, i2, i3);
        let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let m = symbol(r);
        if !m.is_finite() {
            return Err(Error::NonFiniteMultiplier { xi });
        }
        out.coeffs[idx] *= m;
    }
    if field.mean.norm() > 0.0 {
        out.mean_subtracted = true;
    }
    out.mean = Complex64::default();
    Ok(out)
}

/// Partial derivative along `axis` (0, 1 or 2): symbol `i xi_axis`, Nyquist
/// plane along that axis zeroed.
pub fn derivative(field: &SpectralField, axis: usize) -> SpectralField {
    assert!(axis < 3);
    let grid = field.grid;
    let nyq = grid.n / 2;
    let mut out = field.clone();
    for (i1, i2, i3) in grid.indices() {
        let idx = grid.flat(i1, i2, i3);
        let i_axis = [i1, i2, i3][axis];
        if i_axis == nyq {
            out.coeffs[idx] = Complex64::default();
            continue;
        }
        let xi = grid.xi(i1, i2, i3)[axis];
        out.coeffs[idx] *= Complex64::new(0.0, xi);
    }
    // A derivative annihilates constants exactly; nothing was dropped.
    out.mean = Complex64::default();
    out
}

/// Gradient of a scalar field.
pub fn gradient(field: &SpectralField) -> SpectralVectorField {
    SpectralVectorField::new([
        derivative(field, 0),
        derivative(field, 1),
        derivative(field, 2),
    ])
    .expect("components share the input grid")
}

/// Laplacian: symbol `-|xi|^2`.
pub fn laplacian(field: &SpectralField) -> SpectralField {
    let grid = field.grid;
    let mut out = field.clone();
    for (i1, i2, i3) in grid.indices() {
        let idx = grid.flat(i1, i2, i3);
        let xi = grid.xi(i1, i2, i3);
        out.coeffs[idx] *= -(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    }
    out.mean = Complex64::default();
    out
}

/// Inverse Laplacian `(-Delta)^{-1}` on the mean-free part: symbol
/// `1/|xi|^2`. A carried mean has no preimage and is dropped with a flag.
pub fn inverse_laplacian(field: &SpectralField) -> SpectralField {
    let mut out = field.clone();
    inverse_laplacian_in_place(&mut out);
    out
}

/// In-place variant of [`inverse_laplacian`], for callers that own the field
/// and want to avoid a full copy.
pub fn inverse_laplacian_in_place(field: &mut SpectralField) {
    let grid = field.grid;
    for (i1, i2, i3) in grid.indices() {
        if i1 == 0 && i2 == 0 && i3 == 0 {
            continue;
        }
        let idx = grid.flat(i1, i2, i3);
        let xi = grid.xi(i1, i2, i3);
        field.coeffs[idx] /= xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    }
    if field.mean.norm() > 0.0 {
        field.mean_subtracted = true;
    }
    field.mean = Complex64::default();
}

/// Divergence of a vector field.
pub fn divergence(v: &SpectralVectorField) -> SpectralField {
    let d0 = derivative(v.component(0), 0);
    let d1 = derivative(v.component(1), 1);
    let d2 = derivative(v.component(2), 2);
    d0.add(&d1).and_then(|s| s.add(&d2)).expect("shared grid")
}

/// Curl of a vector field.
pub fn curl(v: &SpectralVectorField) -> SpectralVectorField {
    let c0 = derivative(v.component(2), 1)
        .sub(&derivative(v.component(1), 2))
        .expect("shared grid");
    let c1 = derivative(v.component(0), 2)
        .sub(&derivative(v.component(2), 0))
        .expect("shared grid");
    let c2 = derivative(v.component(1), 0)
        .sub(&derivative(v.component(0), 1))
        .expect("shared grid");
    SpectralVectorField::new([c0, c1, c2]).expect("shared grid")
}

/// Apply a scalar operation to each component of a vector field.
pub fn map_components<F>(v: &SpectralVectorField, mut op: F) -> Result<SpectralVectorField>
where
    F: FnMut(&SpectralField) -> Result<SpectralField>,
{
    SpectralVectorField::new([op(v.component(0))?, op(v.component(1))?, op(v.component(2))?])
}

/// Laplacian of each component.
pub fn laplacian_vec(v: &SpectralVectorField) -> SpectralVectorField {
    map_components(v, |c| Ok(laplacian(c))).expect("shared grid")
}

/// Inverse Laplacian of each component.
pub fn inverse_laplacian_vec(v: &SpectralVectorField) -> SpectralVectorField {
    map_components(v, |c| Ok(inverse_laplacian(c))).expect("shared grid")
}

/// In-place variant of [`inverse_laplacian_vec`].
pub fn inverse_laplacian_vec_in_place(v: &mut SpectralVectorField) {
    for c in 0..3 {
        inverse_laplacian_in_place(v.component_mut(c));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{DealiasRule, Grid};
    use crate::synth;

    fn grid(n: usize) -> Grid {
        Grid::new(n, 1.0, DealiasRule::TwoThirds).unwrap()
    }

    #[test]
    fn derivative_of_plane_wave() {
        // d/dx1 of cos(2 x1) = -2 sin(2 x1), on L = 1.
        let g = grid(16);
        let mut f = SpectralField::zero(g);
        f.set_coeff([2, 0, 0], Complex64::new(0.5, 0.0));
        f.set_coeff([-2, 0, 0], Complex64::new(0.5, 0.0));
        let d = derivative(&f, 0);
        assert!(d.is_real());
        let phys = d.to_physical_real().unwrap();
        for (i1, i2, i3) in g.indices() {
            let x = g.point(i1, i2, i3);
            let expect = -2.0 * (2.0 * x[0]).sin();
            assert!((phys[g.flat(i1, i2, i3)] - expect).abs() < 1e-11);
        }
    }

    #[test]
    fn laplacian_inverts() {
        let g = grid(16);
        let f = synth::random_field(g, 0xC0FFEE, 4);
        let lf = laplacian(&f);
        let back = inverse_laplacian(&lf).scale(-1.0);
        assert!(back.relative_error(&f).unwrap() < 1e-13);
    }

    #[test]
    fn derivative_zeroes_nyquist_and_stays_real() {
        let g = grid(8);
        let mut f = SpectralField::zero(g);
        // Nyquist mode k1 = -4 is self-conjugate; its derivative must vanish.
        f.set_coeff([-4, 1, 0], Complex64::new(1.0, 0.0));
        f.set_coeff([-4, -1, 0], Complex64::new(1.0, 0.0));
        let d = derivative(&f, 0);
        assert!(d.coeffs().iter().all(|c| c.norm() == 0.0));
        let d2 = derivative(&f, 1);
        assert!(d2.is_real());
        assert!(d2.check_reality() < 1e-13);
    }

    #[test]
    fn div_of_curl_vanishes() {
        let g = grid(16);
        let v = synth::random_vector_field(g, 42, 5);
        let dc = divergence(&curl(&v));
        assert!(dc.l2_norm() < 1e-12 * v.l2_norm().max(1.0));
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let g = grid(16);
        let f = synth::random_field(g, 7, 5);
        let cg = curl(&gradient(&f));
        assert!(cg.l2_norm() < 1e-12 * f.l2_norm().max(1.0));
    }

    #[test]
    fn multiplier_rejects_singular_symbols() {
        let g = grid(8);
        let f = synth::random_field(g, 1, 3);
        let err = apply_multiplier(&f, |xi| {
            Complex64::new(1.0 / (xi[0] - 1.0), 0.0) // blows up on the plane xi1 = 1
        });
        assert!(matches!(err, Err(Error::NonFiniteMultiplier { .. })));
    }

    #[test]
    fn non_hermitian_symbol_clears_real_flag() {
        let g = grid(8);
        let f = synth::random_field(g, 2, 3);
        assert!(f.is_real());
        let out = apply_multiplier(&f, |_| Complex64::new(0.0, 1.0)).unwrap();
        assert!(!out.is_real());
        let even = apply_multiplier(&f, |xi| Complex64::new(xi[0] * xi[0], 0.0)).unwrap();
        assert!(even.is_real());
    }
}
