use serde::Serialize;
use spectral_core::{ops, Grid, SpectralVectorField};
use thiserror::Error;

/// Fluid viscosity, magnetic resistivity, and Hall coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    pub mu: f64,
    pub nu: f64,
    pub hall: f64,
}

impl PhysicalParams {
    pub fn new(mu: f64, nu: f64, hall: f64) -> Result<PhysicalParams, SolveError> {
        if !(mu > 0.0 && nu > 0.0 && hall > 0.0) {
            return Err(SolveError::Parameter(format!(
                "viscosity, resistivity and Hall coefficient must be positive, got ({mu}, {nu}, {hall})"
            )));
        }
        Ok(PhysicalParams { mu, nu, hall })
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error(transparent)]
    Field(#[from] spectral_core::Error),

    #[error("iteration diverged: {message}")]
    Diverged {
        message: String,
        report: Box<SolveReport>,
    },

    #[error("contraction precondition violated: {0}")]
    Precondition(String),
}

/// Whether the third force component was derived as `curl g` or supplied
/// independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurlGProvenance {
    Derived,
    Supplied,
}

/// The data triple `(f, g, curl g)`. The third slot is the paper's `h`
/// datum, renamed to avoid clashing with the Hall coefficient.
#[derive(Debug, Clone)]
pub struct ForceTriple {
    pub f: SpectralVectorField,
    pub g: SpectralVectorField,
    pub curl_g: SpectralVectorField,
    pub provenance: CurlGProvenance,
}

impl ForceTriple {
    /// Build from `(f, g)`, deriving the third component as `curl g`.
    /// Requires `div g = 0`.
    pub fn from_fg(
        f: SpectralVectorField,
        g: SpectralVectorField,
    ) -> Result<ForceTriple, SolveError> {
        let div_res = g.divergence_residual();
        if div_res > 1e-12 {
            return Err(SolveError::Parameter(format!(
                "g must be divergence-free, relative residual {div_res:e}"
            )));
        }
        let curl_g = ops::curl(&g);
        Ok(ForceTriple {
            f,
            g,
            curl_g,
            provenance: CurlGProvenance::Derived,
        })
    }

    /// Build with an independently supplied third component.
    pub fn with_supplied(
        f: SpectralVectorField,
        g: SpectralVectorField,
        curl_g_data: SpectralVectorField,
    ) -> Result<ForceTriple, SolveError> {
        let div_res = g.divergence_residual();
        if div_res > 1e-12 {
            return Err(SolveError::Parameter(format!(
                "g must be divergence-free, relative residual {div_res:e}"
            )));
        }
        Ok(ForceTriple {
            f,
            g,
            curl_g: curl_g_data,
            provenance: CurlGProvenance::Supplied,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.f.grid()
    }

    pub fn zero(grid: Grid) -> ForceTriple {
        ForceTriple {
            f: SpectralVectorField::zero(grid),
            g: SpectralVectorField::zero(grid),
            curl_g: SpectralVectorField::zero(grid),
            provenance: CurlGProvenance::Derived,
        }
    }

    pub fn scale(&self, a: f64) -> ForceTriple {
        ForceTriple {
            f: self.f.scale(a),
            g: self.g.scale(a),
            curl_g: self.curl_g.scale(a),
            provenance: self.provenance,
        }
    }
}

/// The extended state `(u, B, J)` with `J` standing in for `curl B`.
#[derive(Debug, Clone)]
pub struct HallState {
    pub u: SpectralVectorField,
    pub b: SpectralVectorField,
    pub j: SpectralVectorField,
}

impl HallState {
    pub fn zero(grid: Grid) -> HallState {
        HallState {
            u: SpectralVectorField::zero(grid),
            b: SpectralVectorField::zero(grid),
            j: SpectralVectorField::zero(grid),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn add(&self, other: &HallState) -> Result<HallState, SolveError> {
        Ok(HallState {
            u: self.u.add(&other.u)?,
            b: self.b.add(&other.b)?,
            j: self.j.add(&other.j)?,
        })
    }

    pub fn sub(&self, other: &HallState) -> Result<HallState, SolveError> {
        Ok(HallState {
            u: self.u.sub(&other.u)?,
            b: self.b.sub(&other.b)?,
            j: self.j.sub(&other.j)?,
        })
    }

    pub fn scale(&self, a: f64) -> HallState {
        HallState {
            u: self.u.scale(a),
            b: self.b.scale(a),
            j: self.j.scale(a),
        }
    }

    /// Worst relative divergence residual over the three fields.
    pub fn divergence_residual(&self) -> f64 {
        self.u
            .divergence_residual()
            .max(self.b.divergence_residual())
            .max(self.j.divergence_residual())
    }

    /// Relative extended-system consistency: `||J - curl B|| / ||J||` in `L^2`.
    pub fn j_consistency(&self) -> f64 {
        let curl_b = ops::curl(&self.b);
        let diff = self.j.sub(&curl_b).expect("shared grid");
        let scale = self.j.l2_norm().max(curl_b.l2_norm());
        if scale > 0.0 {
            diff.l2_norm() / scale
        } else {
            0.0
        }
    }

    /// Stacked homogeneous Sobolev norm of `(u, B, J)`; the solvers use
    /// `s = 1/2` for iteration control.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        (self.u.sobolev_norm(s).powi(2)
            + self.b.sobolev_norm(s).powi(2)
            + self.j.sobolev_norm(s).powi(2))
        .sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.u.l2_norm().powi(2) + self.b.l2_norm().powi(2) + self.j.l2_norm().powi(2)).sqrt()
    }
}

/// One reported Besov norm `(s, p, r) -> value`.
#[derive(Debug, Clone, Serialize)]
pub struct BesovReading {
    pub field: String,
    pub s: f64,
    pub p: String,
    pub r: String,
    pub value: f64,
}

/// What a solver did: iteration history, series norms, reported norms.
#[derive(Debug, Clone, Serialize, Default)]
pub struct SolveReport {
    pub mode: String,
    pub iterations: usize,
    pub converged: bool,
    /// Relative update/residual per iteration (fixed-point mode) or relative
    /// term size per order (series mode).
    pub residuals: Vec<f64>,
    /// `||A_m||` in the homogeneous `H^{1/2}` norm, series mode only.
    pub series_norms: Vec<f64>,
    /// Whether the residual sequence was monotonically non-increasing.
    pub residuals_monotone: bool,
    pub besov: Vec<BesovReading>,
    pub warnings: Vec<String>,
}
