use num_complex::Complex64;

use crate::exponent::Exponent;
use crate::fft;
use crate::grid::Grid;
use crate::{Error, Result};

/// A scalar field on the periodic box, stored by its Fourier coefficients.
///
/// The zero-mode coefficient is always held at exactly zero; any mean produced
/// by an operation (a product, or an inverse Laplacian applied to data with a
/// mean) is moved into the `mean` slot and flagged. Norms and all further
/// operations act on the mean-free part.
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub(crate) grid: Grid,
    pub(crate) coeffs: Vec<Complex64>,
    /// Whether the field represents a real-valued function (conjugate-symmetric
    /// coefficients). Tracked exactly through operations; spot-checked by
    /// `check_reality`.
    pub(crate) real: bool,
    /// Mean carried separately from the (zeroed) zero-mode coefficient.
    pub(crate) mean: Complex64,
    /// Set when a product was formed without the full dealiasing margin.
    pub(crate) aliased: bool,
    /// Set when an operation moved a nonzero mean out of the coefficient array.
    pub(crate) mean_subtracted: bool,
}

impl SpectralField {
    /// The zero field.
    pub fn zero(grid: Grid) -> SpectralField {
        SpectralField {
            grid,
            coeffs: vec![Complex64::default(); grid.len()],
            real: true,
            mean: Complex64::default(),
            aliased: false,
            mean_subtracted: false,
        }
    }

    /// Build from a coefficient array in FFT storage order.
    ///
    /// A nonzero zero-mode is moved into the mean slot. `real` asserts
    /// conjugate symmetry of the data; it is the caller's contract and is only
    /// spot-checked downstream.
    pub fn from_coeffs(grid: Grid, mut coeffs: Vec<Complex64>, real: bool) -> Result<SpectralField> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        let mean = coeffs[0];
        coeffs[0] = Complex64::default();
        Ok(SpectralField {
            grid,
            coeffs,
            real,
            mean,
            aliased: false,
            mean_subtracted: mean.norm() > 0.0,
        })
    }

    /// Build from physical samples on the grid's lattice (row-major).
    pub fn from_physical(grid: Grid, mut samples: Vec<Complex64>) -> Result<SpectralField> {
        if samples.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        let real = samples.iter().all(|c| c.im == 0.0);
        fft::forward(grid.n, &mut samples);
        let mut field = SpectralField::from_coeffs(grid, samples, real)?;
        // A forward transform of real noise leaves a roundoff zero mode; only
        // flag a genuinely dropped mean.
        if field.mean.norm() < 1e-13 {
            field.mean_subtracted = false;
        }
        Ok(field)
    }

    /// Build from real physical samples.
    pub fn from_physical_real(grid: Grid, samples: &[f64]) -> Result<SpectralField> {
        let complex: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        SpectralField::from_physical(grid, complex)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn mean(&self) -> Complex64 {
        self.mean
    }

    pub fn aliased(&self) -> bool {
        self.aliased
    }

    pub fn mean_subtracted(&self) -> bool {
        self.mean_subtracted
    }

    /// Coefficient at an integer frequency triple (zero for the zero mode).
    pub fn coeff(&self, k: [i64; 3]) -> Complex64 {
        self.coeffs[self.grid.flat_of(k)]
    }

    /// Set a coefficient; writing the zero mode routes to the mean slot.
    pub fn set_coeff(&mut self, k: [i64; 3], value: Complex64) {
        if k == [0, 0, 0] {
            self.mean = value;
        } else {
            self.coeffs[self.grid.flat_of(k)] = value;
        }
    }

    /// Physical samples of the mean-free part plus the carried mean.
    pub fn to_physical(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        data[0] = self.mean;
        fft::inverse(self.grid.n, &mut data);
        data
    }

    /// Real physical samples; errors if the field is not marked real.
    pub fn to_physical_real(&self) -> Result<Vec<f64>> {
        if !self.real {
            return Err(Error::Config(
                "field is not real-valued; use to_physical".into(),
            ));
        }
        Ok(self.to_physical().iter().map(|c| c.re).collect())
    }

    /// `L^2` norm of the mean-free part, via Parseval.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        (self.grid.volume() * sum).sqrt()
    }

    /// `L^p` norm of the mean-free part by the rectangle rule on the sampling
    /// lattice; `p = 2` uses Parseval and `p = inf` is the sample max.
    pub fn lp_norm(&self, p: Exponent) -> Result<f64> {
        p.validate()?;
        // A zero coefficient array needs no transform.
        if self.coeffs.iter().all(|c| *c == Complex64::default()) {
            return Ok(0.0);
        }
        match p {
            Exponent::Finite(p) if p == 2.0 => Ok(self.l2_norm()),
            Exponent::Finite(p) => {
                let mut data = self.coeffs.clone();
                fft::inverse(self.grid.n, &mut data);
                let sum: f64 = data.iter().map(|c| c.norm().powf(p)).sum();
                Ok((self.grid.cell_volume() * sum).powf(1.0 / p))
            }
            Exponent::Infinity => {
                let mut data = self.coeffs.clone();
                fft::inverse(self.grid.n, &mut data);
                Ok(data.iter().map(|c| c.norm()).fold(0.0, f64::max))
            }
        }
    }

    /// Homogeneous Sobolev seminorm: `(vol * sum |xi|^{2s} |c|^2)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let mut sum = 0.0;
        for (i1, i2, i3) in self.grid.indices() {
            let c = self.coeffs[self.grid.flat(i1, i2, i3)];
            if c == Complex64::default() {
                continue;
            }
            let xi = self.grid.xi(i1, i2, i3);
            let m = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            if m > 0.0 {
                sum += m.powf(2.0 * s) * c.norm_sqr();
            }
        }
        (self.grid.volume() * sum).sqrt()
    }

    fn check_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.check_grid(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SpectralField {
            grid: self.grid,
            coeffs,
            real: self.real && other.real,
            mean: self.mean + other.mean,
            aliased: self.aliased || other.aliased,
            mean_subtracted: self.mean_subtracted || other.mean_subtracted,
        })
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.check_grid(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(SpectralField {
            grid: self.grid,
            coeffs,
            real: self.real && other.real,
            mean: self.mean - other.mean,
            aliased: self.aliased || other.aliased,
            mean_subtracted: self.mean_subtracted || other.mean_subtracted,
        })
    }

    pub fn scale(&self, a: f64) -> SpectralField {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= a;
        }
        out.mean *= a;
        out
    }

    /// In-place variant of [`SpectralField::scale`].
    pub fn scale_in_place(&mut self, a: f64) {
        for c in self.coeffs.iter_mut() {
            *c *= a;
        }
        self.mean *= a;
    }

    pub fn scale_complex(&self, a: Complex64) -> SpectralField {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= a;
        }
        out.mean *= a;
        if a.im != 0.0 {
            out.real = false;
        }
        out
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> Result<SpectralField> {
        self.add(&other.scale(a))
    }

    /// Reinterpret the same coefficients on a box of a different scale.
    ///
    /// With `u(x) = sum_k c_k exp(i k.x / L)`, the dyadic dilation `u(2^s x)`
    /// has the same coefficient array read on a box of scale `L / 2^s`. No
    /// data moves; only the grid metadata changes.
    pub fn reinterpret_box_scale(&self, box_scale: f64) -> Result<SpectralField> {
        let grid = Grid::new(self.grid.n, box_scale, self.grid.dealias)?;
        let mut out = self.clone();
        out.grid = grid;
        Ok(out)
    }

    /// Largest violation of conjugate symmetry over a deterministic sample of
    /// mode pairs, relative to the largest sampled magnitude.
    pub fn check_reality(&self) -> f64 {
        let n = self.grid.n;
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        let step = (n / 8).max(1);
        for i1 in (0..n).step_by(step) {
            for i2 in (0..n).step_by(step) {
                for i3 in (0..n).step_by(step) {
                    let a = self.coeffs[self.grid.flat(i1, i2, i3)];
                    let b = self.coeffs[self.grid.flat(
                        self.grid.mirror(i1),
                        self.grid.mirror(i2),
                        self.grid.mirror(i3),
                    )];
                    worst = worst.max((a - b.conj()).norm());
                    scale = scale.max(a.norm());
                }
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }

    /// Relative root-mean-square difference of the coefficient arrays.
    pub fn relative_error(&self, reference: &SpectralField) -> Result<f64> {
        self.check_grid(reference)?;
        let num: f64 = self
            .coeffs
            .iter()
            .zip(&reference.coeffs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = reference.coeffs.iter().map(|c| c.norm_sqr()).sum();
        if den == 0.0 {
            Ok(num.sqrt())
        } else {
            Ok((num / den).sqrt())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DealiasRule;

    fn grid(n: usize) -> Grid {
        Grid::new(n, 1.0, DealiasRule::TwoThirds).unwrap()
    }

    #[test]
    fn zero_mode_is_routed_to_mean() {
        let g = grid(8);
        let mut coeffs = vec![Complex64::default(); g.len()];
        coeffs[0] = Complex64::new(2.5, 0.0);
        let f = SpectralField::from_coeffs(g, coeffs, true).unwrap();
        assert_eq!(f.coeffs()[0], Complex64::default());
        assert_eq!(f.mean(), Complex64::new(2.5, 0.0));
        assert!(f.mean_subtracted());
    }

    #[test]
    fn physical_roundtrip() {
        let g = grid(8);
        let samples: Vec<f64> = (0..g.len()).map(|i| (i as f64 * 0.13).sin()).collect();
        let mean: f64 = samples.iter().sum::<f64>() / g.len() as f64;
        let f = SpectralField::from_physical_real(g, &samples).unwrap();
        assert!((f.mean().re - mean).abs() < 1e-12);
        let back = f.to_physical_real().unwrap();
        for (a, b) in back.iter().zip(&samples) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn parseval_matches_quadrature() {
        let g = grid(16);
        let samples: Vec<f64> = (0..g.len())
            .map(|i| (i as f64 * 0.13).sin() * (i as f64 * 0.041).cos())
            .collect();
        let f = SpectralField::from_physical_real(g, &samples).unwrap();
        let l2 = f.l2_norm();
        // Quadrature on mean-free samples.
        let mean: f64 = samples.iter().sum::<f64>() / g.len() as f64;
        let sum: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
        let quad = (g.cell_volume() * sum).sqrt();
        assert!((l2 - quad).abs() < 1e-10 * quad.max(1.0));
        let lp2 = f.lp_norm(Exponent::finite(2.0)).unwrap();
        assert!((l2 - lp2).abs() < 1e-12 * l2.max(1.0));
    }

    #[test]
    fn lp_norm_of_plane_wave() {
        // |cos| has known L^p norms; cos(x1) = (e^{ix1} + e^{-ix1}) / 2.
        let g = grid(32);
        let mut f = SpectralField::zero(g);
        f.set_coeff([1, 0, 0], Complex64::new(0.5, 0.0));
        f.set_coeff([-1, 0, 0], Complex64::new(0.5, 0.0));
        let vol = g.volume();
        // L^2: sqrt(vol/2); L^4: (3/8 vol)^{1/4}; L^inf: 1.
        assert!((f.l2_norm() - (vol / 2.0).sqrt()).abs() < 1e-10);
        let l4 = f.lp_norm(Exponent::finite(4.0)).unwrap();
        assert!((l4 - (0.375 * vol).powf(0.25)).abs() < 1e-10);
        let linf = f.lp_norm(Exponent::INF).unwrap();
        assert!((linf - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sobolev_norm_of_single_shell() {
        let g = grid(16);
        let mut f = SpectralField::zero(g);
        f.set_coeff([2, 0, 0], Complex64::new(1.0, 0.0));
        f.set_coeff([-2, 0, 0], Complex64::new(1.0, 0.0));
        // |xi| = 2 on both modes.
        let expect = (g.volume() * 2.0 * 2.0f64.powf(2.0 * 0.5)).sqrt();
        assert!((f.sobolev_norm(0.5) - expect).abs() < 1e-10);
    }

    #[test]
    fn reinterpret_box_scale_keeps_coeffs() {
        let g = grid(8);
        let mut f = SpectralField::zero(g);
        f.set_coeff([1, 2, 3], Complex64::new(0.3, -0.1));
        let h = f.reinterpret_box_scale(0.5).unwrap();
        assert_eq!(h.grid().box_scale, 0.5);
        assert_eq!(h.coeff([1, 2, 3]), Complex64::new(0.3, -0.1));
    }

    #[test]
    fn arithmetic_respects_grids() {
        let f = SpectralField::zero(grid(8));
        let h = SpectralField::zero(grid(16));
        assert!(f.add(&h).is_err());
    }
}
