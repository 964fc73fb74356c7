use num_complex::Complex64;

use crate::exponent::Exponent;
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::{Error, Result};

/// A three-component vector field; all components share one grid.
#[derive(Debug, Clone)]
pub struct SpectralVectorField {
    components: [SpectralField; 3],
}

impl SpectralVectorField {
    pub fn new(components: [SpectralField; 3]) -> Result<SpectralVectorField> {
        if components[0].grid != components[1].grid || components[0].grid != components[2].grid {
            return Err(Error::GridMismatch);
        }
        Ok(SpectralVectorField { components })
    }

    pub fn zero(grid: Grid) -> SpectralVectorField {
        SpectralVectorField {
            components: [
                SpectralField::zero(grid),
                SpectralField::zero(grid),
                SpectralField::zero(grid),
            ],
        }
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn component(&self, i: usize) -> &SpectralField {
        &self.components[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut SpectralField {
        &mut self.components[i]
    }

    pub fn components(&self) -> &[SpectralField; 3] {
        &self.components
    }

    pub fn into_components(self) -> [SpectralField; 3] {
        self.components
    }

    pub fn is_real(&self) -> bool {
        self.components.iter().all(|c| c.is_real())
    }

    pub fn aliased(&self) -> bool {
        self.components.iter().any(|c| c.aliased())
    }

    pub fn add(&self, other: &SpectralVectorField) -> Result<SpectralVectorField> {
        Ok(SpectralVectorField {
            components: [
                self.components[0].add(&other.components[0])?,
                self.components[1].add(&other.components[1])?,
                self.components[2].add(&other.components[2])?,
            ],
        })
    }

    pub fn sub(&self, other: &SpectralVectorField) -> Result<SpectralVectorField> {
        Ok(SpectralVectorField {
            components: [
                self.components[0].sub(&other.components[0])?,
                self.components[1].sub(&other.components[1])?,
                self.components[2].sub(&other.components[2])?,
            ],
        })
    }

    pub fn scale(&self, a: f64) -> SpectralVectorField {
        SpectralVectorField {
            components: [
                self.components[0].scale(a),
                self.components[1].scale(a),
                self.components[2].scale(a),
            ],
        }
    }

    /// In-place variant of [`SpectralVectorField::scale`].
    pub fn scale_in_place(&mut self, a: f64) {
        for c in self.components.iter_mut() {
            c.scale_in_place(a);
        }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &SpectralVectorField) -> Result<SpectralVectorField> {
        self.add(&other.scale(a))
    }

    /// Euclidean-in-components `L^2` norm.
    pub fn l2_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.l2_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `L^p` norm of the pointwise Euclidean magnitude.
    pub fn lp_norm(&self, p: Exponent) -> Result<f64> {
        p.validate()?;
        if self.l2_norm() == 0.0 && self.components.iter().all(|c| c.mean() == Complex64::default())
        {
            return Ok(0.0);
        }
        match p {
            Exponent::Finite(q) if q == 2.0 => Ok(self.l2_norm()),
            _ => {
                let phys: Vec<Vec<Complex64>> =
                    self.components.iter().map(|c| c.to_physical()).collect();
                let mags = (0..self.grid().len()).map(|i| {
                    (phys[0][i].norm_sqr() + phys[1][i].norm_sqr() + phys[2][i].norm_sqr()).sqrt()
                });
                match p {
                    Exponent::Infinity => Ok(mags.fold(0.0, f64::max)),
                    Exponent::Finite(q) => {
                        let sum: f64 = mags.map(|m| m.powf(q)).sum();
                        Ok((self.grid().cell_volume() * sum).powf(1.0 / q))
                    }
                }
            }
        }
    }

    /// Euclidean-in-components homogeneous Sobolev seminorm.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.sobolev_norm(s).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Relative divergence residual `||xi . v^||_2 / || |xi| v^ ||_2`.
    ///
    /// Zero (to roundoff) certifies the field is divergence-free; the
    /// denominator makes the number scale-invariant.
    pub fn divergence_residual(&self) -> f64 {
        let grid = *self.grid();
        let mut num = 0.0;
        let mut den = 0.0;
        for (i1, i2, i3) in grid.indices() {
            let idx = grid.flat(i1, i2, i3);
            let xi = grid.xi(i1, i2, i3);
            let v = [
                self.components[0].coeffs[idx],
                self.components[1].coeffs[idx],
                self.components[2].coeffs[idx],
            ];
            let dot = v[0] * xi[0] + v[1] * xi[1] + v[2] * xi[2];
            let m2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            num += dot.norm_sqr();
            den += m2 * (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr());
        }
        if den > 0.0 {
            (num / den).sqrt()
        } else {
            0.0
        }
    }

    /// Relative root-mean-square coefficient difference against a reference.
    pub fn relative_error(&self, reference: &SpectralVectorField) -> Result<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..3 {
            if self.components[i].grid != reference.components[i].grid {
                return Err(Error::GridMismatch);
            }
            for (a, b) in self.components[i]
                .coeffs
                .iter()
                .zip(&reference.components[i].coeffs)
            {
                num += (a - b).norm_sqr();
            }
            for c in &reference.components[i].coeffs {
                den += c.norm_sqr();
            }
        }
        if den == 0.0 {
            Ok(num.sqrt())
        } else {
            Ok((num / den).sqrt())
        }
    }

    /// See [`SpectralField::reinterpret_box_scale`].
    pub fn reinterpret_box_scale(&self, box_scale: f64) -> Result<SpectralVectorField> {
        Ok(SpectralVectorField {
            components: [
                self.components[0].reinterpret_box_scale(box_scale)?,
                self.components[1].reinterpret_box_scale(box_scale)?,
                self.components[2].reinterpret_box_scale(box_scale)?,
            ],
        })
    }
}
