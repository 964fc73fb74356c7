//! Pointwise products with dealiasing.
//!
//! Products are formed in physical space on the mean-free parts; the mean of
//! the product is moved into the result's mean slot and flagged. Two rules are
//! supported. The two-thirds rule zeroes every output mode with any
//! `|k_i| > N/3` after the product; it is exact when both inputs are
//! band-limited to that box, and the result is tagged `aliased` otherwise.
//! The zero-padding rule evaluates the product on a `3N/2` grid and truncates
//! back, which is exact on the whole resolved band for any inputs.

use num_complex::Complex64;

use crate::fft;
use crate::field::SpectralField;
use crate::grid::DealiasRule;
use crate::vector::SpectralVectorField;
use crate::{ops, Error, Result};

fn band_limited_two_thirds(field: &SpectralField) -> bool {
    let grid = field.grid;
    let lim = grid.dealias_limit();
    let peak = field.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return true;
    }
    for (i1, i2, i3) in grid.indices() {
        let k = [grid.wavenumber(i1), grid.wavenumber(i2), grid.wavenumber(i3)];
        if k.iter().any(|ki| ki.abs() > lim)
            && field.coeffs[grid.flat(i1, i2, i3)].norm() > 1e-13 * peak
        {
            return false;
        }
    }
    true
}

fn multiply_two_thirds(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let grid = a.grid;
    let mut pa = a.coeffs.clone();
    let mut pb = b.coeffs.clone();
    fft::inverse(grid.n, &mut pa);
    fft::inverse(grid.n, &mut pb);
    for (x, y) in pa.iter_mut().zip(&pb) {
        *x *= y;
    }
    fft::forward(grid.n, &mut pa);
    let lim = grid.dealias_limit();
    for (i1, i2, i3) in grid.indices() {
        let k = [grid.wavenumber(i1), grid.wavenumber(i2), grid.wavenumber(i3)];
        if k.iter().any(|ki| ki.abs() > lim) {
            pa[grid.flat(i1, i2, i3)] = Complex64::default();
        }
    }
    let aliased = !band_limited_two_thirds(a) || !band_limited_two_thirds(b);
    finish_product(grid, pa, a, b, aliased)
}

fn multiply_zero_pad(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let grid = a.grid;
    let n = grid.n;
    let m = 3 * n / 2;
    let pad = |f: &SpectralField| -> Vec<Complex64> {
        let mut big = vec![Complex64::default(); m * m * m];
        for (i1, i2, i3) in grid.indices() {
            let k = [grid.wavenumber(i1), grid.wavenumber(i2), grid.wavenumber(i3)];
            let j: Vec<usize> = k
                .iter()
                .map(|&ki| if ki >= 0 { ki as usize } else { (ki + m as i64) as usize })
                .collect();
            big[(j[0] * m + j[1]) * m + j[2]] = f.coeffs[grid.flat(i1, i2, i3)];
        }
        big
    };
    let mut pa = pad(a);
    let mut pb = pad(b);
    fft::inverse(m, &mut pa);
    fft::inverse(m, &mut pb);
    for (x, y) in pa.iter_mut().zip(&pb) {
        *x *= y;
    }
    fft::forward(m, &mut pa);
    let mut out = vec![Complex64::default(); grid.len()];
    for (i1, i2, i3) in grid.indices() {
        let k = [grid.wavenumber(i1), grid.wavenumber(i2), grid.wavenumber(i3)];
        let j: Vec<usize> = k
            .iter()
            .map(|&ki| if ki >= 0 { ki as usize } else { (ki + m as i64) as usize })
            .collect();
        out[grid.flat(i1, i2, i3)] = pa[(j[0] * m + j[1]) * m + j[2]];
    }
    finish_product(grid, out, a, b, false)
}

fn finish_product(
    grid: crate::Grid,
    mut coeffs: Vec<Complex64>,
    a: &SpectralField,
    b: &SpectralField,
    aliased: bool,
) -> SpectralField {
    let mean = coeffs[0];
    coeffs[0] = Complex64::default();
    let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    SpectralField {
        grid,
        coeffs,
        real: a.real && b.real,
        mean,
        aliased: aliased || a.aliased || b.aliased,
        mean_subtracted: mean.norm() > 1e-14 * peak.max(1.0)
            || a.mean_subtracted
            || b.mean_subtracted,
    }
}

/// Pointwise product of two scalar fields under the grid's dealiasing rule.
pub fn multiply(a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    Ok(match a.grid.dealias {
        DealiasRule::TwoThirds => multiply_two_thirds(a, b),
        DealiasRule::ZeroPad3Halves => multiply_zero_pad(a, b),
    })
}

/// Pointwise product of a scalar and each component of a vector field.
pub fn multiply_vec(a: &SpectralField, v: &SpectralVectorField) -> Result<SpectralVectorField> {
    ops::map_components(v, |c| multiply(a, c))
}

/// Pointwise dot product of two vector fields.
pub fn dot(u: &SpectralVectorField, v: &SpectralVectorField) -> Result<SpectralField> {
    let mut acc = multiply(u.component(0), v.component(0))?;
    for i in 1..3 {
        acc = acc.add(&multiply(u.component(i), v.component(i))?)?;
    }
    Ok(acc)
}

/// Pointwise cross product of two vector fields.
pub fn cross(u: &SpectralVectorField, v: &SpectralVectorField) -> Result<SpectralVectorField> {
    let c = |i: usize, j: usize| multiply(u.component(i), v.component(j));
    SpectralVectorField::new([
        c(1, 2)?.sub(&c(2, 1)?)?,
        c(2, 0)?.sub(&c(0, 2)?)?,
        c(0, 1)?.sub(&c(1, 0)?)?,
    ])
}

/// Divergence of the tensor product: `(div (u (x) v))_i = sum_j d_j (u_i v_j)`.
pub fn div_tensor(u: &SpectralVectorField, v: &SpectralVectorField) -> Result<SpectralVectorField> {
    let mut rows = Vec::with_capacity(3);
    for i in 0..3 {
        let mut acc: Option<SpectralField> = None;
        for j in 0..3 {
            let term = ops::derivative(&multiply(u.component(i), v.component(j))?, j);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        rows.push(acc.unwrap());
    }
    let [a, b, c]: [SpectralField; 3] = rows.try_into().map_err(|_| Error::GridMismatch)?;
    SpectralVectorField::new([a, b, c])
}

/// Advection term `(u . grad) v`, computed as `sum_j u_j d_j v_i`.
pub fn advect(u: &SpectralVectorField, v: &SpectralVectorField) -> Result<SpectralVectorField> {
    let mut rows = Vec::with_capacity(3);
    for i in 0..3 {
        let mut acc: Option<SpectralField> = None;
        for j in 0..3 {
            let term = multiply(u.component(j), &ops::derivative(v.component(i), j))?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        rows.push(acc.unwrap());
    }
    let [a, b, c]: [SpectralField; 3] = rows.try_into().map_err(|_| Error::GridMismatch)?;
    SpectralVectorField::new([a, b, c])
}
