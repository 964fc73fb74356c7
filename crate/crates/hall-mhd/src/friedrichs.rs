//! The spectral-cutoff (Friedrichs) approximation scheme: solve the `(u, B)`
//! system with every nonlinear input and output filtered to an annulus of
//! frequencies `1/n <= |xi| <= n`, after checking the contraction
//! precondition on the filtered data.

use littlewood_paley::besov::besov_norm_components;
use littlewood_paley::partition::DyadicPartition;
use littlewood_paley::BesovIndex;
use serde::Serialize;
use spectral_core::{ops, product, project, synth, Exponent, Grid, SpectralVectorField};

use crate::state::{BesovReading, ForceTriple, PhysicalParams, SolveError};

/// A cutoff pair `(u, B)` with the auxiliary field `v = u - h curl B` and the
/// run record.
#[derive(Debug, Clone)]
pub struct FriedrichsSolution {
    pub u: SpectralVectorField,
    pub b: SpectralVectorField,
    pub v: SpectralVectorField,
    pub report: FriedrichsReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct FriedrichsReport {
    pub cutoff: u32,
    pub iterations: usize,
    pub converged: bool,
    /// Probed bound on the bilinear map in the `L^2` pair norm, including the
    /// safety factor.
    pub bilinear_bound: f64,
    /// `L^2` pair norm of the filtered linear part.
    pub data_norm: f64,
    /// Relative update per iteration.
    pub residuals: Vec<f64>,
    /// Stacked `(u, B, v)` Besov readings at `s = 1/2`, `p = 2`.
    pub besov: Vec<BesovReading>,
    /// Worst relative coefficient mass outside the cutoff annulus.
    pub support_leakage: f64,
    pub divergence_residual: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
struct Pair {
    u: SpectralVectorField,
    b: SpectralVectorField,
}

impl Pair {
    fn zero(grid: Grid) -> Pair {
        Pair {
            u: SpectralVectorField::zero(grid),
            b: SpectralVectorField::zero(grid),
        }
    }

    fn add(&self, other: &Pair) -> Result<Pair, SolveError> {
        Ok(Pair {
            u: self.u.add(&other.u)?,
            b: self.b.add(&other.b)?,
        })
    }

    fn sub(&self, other: &Pair) -> Result<Pair, SolveError> {
        Ok(Pair {
            u: self.u.sub(&other.u)?,
            b: self.b.sub(&other.b)?,
        })
    }

    fn norm(&self) -> f64 {
        (self.u.l2_norm().powi(2) + self.b.l2_norm().powi(2)).sqrt()
    }
}

fn cutoff(v: &SpectralVectorField, n: u32) -> SpectralVectorField {
    project::spectral_cutoff_vec(v, n).expect("cutoff multiplier is finite")
}

/// The filtered linear part `a`.
fn linear_part(force: &ForceTriple, params: &PhysicalParams, n: u32) -> Pair {
    let solve = |v: &SpectralVectorField, visc: f64| {
        ops::inverse_laplacian_vec(&cutoff(&project::leray_project(v), n)).scale(1.0 / visc)
    };
    Pair {
        u: solve(&force.f, params.mu),
        b: solve(&force.g, params.nu),
    }
}

/// The filtered bilinear map, with `x` supplying the first factor of every
/// product and `y` the second.
fn bilinear(x: &Pair, y: &Pair, params: &PhysicalParams, n: u32) -> Result<Pair, SolveError> {
    let xu = cutoff(&x.u, n);
    let xb = cutoff(&x.b, n);
    let yu = cutoff(&y.u, n);
    let yb = cutoff(&y.b, n);

    let bb = product::advect(&xb, &yb)?;
    let uu = product::advect(&xu, &yu)?;
    let u_part = ops::inverse_laplacian_vec(&cutoff(&project::leray_project(&bb.sub(&uu)?), n))
        .scale(1.0 / params.mu);

    let w = xu.axpy(-params.hall, &ops::curl(&xb))?;
    let wxb = product::cross(&w, &yb)?;
    let b_part =
        ops::inverse_laplacian_vec(&ops::curl(&cutoff(&wxb, n))).scale(1.0 / params.nu);

    Ok(Pair { u: u_part, b: b_part })
}

/// Probe the operator bound of the bilinear map on the cutoff space with
/// seeded random pairs, then apply a safety factor.
fn probe_bilinear_bound(
    grid: Grid,
    params: &PhysicalParams,
    n: u32,
    n_pairs: usize,
    seed: u64,
) -> Result<f64, SolveError> {
    let band = (grid.n as i64 / 4).max(2);
    let mut worst: f64 = 0.0;
    for i in 0..n_pairs {
        let base = seed.wrapping_add(4 * i as u64);
        let x = Pair {
            u: cutoff(&synth::random_divfree_field(grid, base, band), n),
            b: cutoff(&synth::random_divfree_field(grid, base + 1, band), n),
        };
        let y = Pair {
            u: cutoff(&synth::random_divfree_field(grid, base + 2, band), n),
            b: cutoff(&synth::random_divfree_field(grid, base + 3, band), n),
        };
        let denom = x.norm() * y.norm();
        if denom == 0.0 {
            continue;
        }
        let image = bilinear(&x, &y, params, n)?;
        worst = worst.max(image.norm() / denom);
    }
    Ok(worst * 1.5)
}

/// Fraction of squared coefficient mass outside the annulus `1/n <= |xi| <= n`.
fn support_leakage(v: &SpectralVectorField, n: u32) -> f64 {
    let inside = cutoff(v, n);
    let total = v.l2_norm();
    if total == 0.0 {
        return 0.0;
    }
    let diff = v.sub(&inside).expect("shared grid");
    diff.l2_norm() / total
}

/// Run the cutoff scheme at level `n`. `report_r` lists the `l^r` exponents
/// for the stacked `(u, B, v)` Besov readings; `delta` is an optional
/// smallness threshold checked against `2 delta`.
#[allow(clippy::too_many_arguments)]
pub fn friedrichs_solve(
    force: &ForceTriple,
    params: &PhysicalParams,
    n: u32,
    max_iters: usize,
    tol: f64,
    report_r: &[Exponent],
    delta: Option<f64>,
    probe_seed: u64,
) -> Result<FriedrichsSolution, SolveError> {
    if n == 0 {
        return Err(SolveError::Parameter("cutoff level must be positive".into()));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(SolveError::Parameter(format!(
            "tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let grid = *force.grid();
    let a = linear_part(force, params, n);
    let data_norm = a.norm();
    let bound = probe_bilinear_bound(grid, params, n, 8, probe_seed)?;
    if 4.0 * bound * data_norm >= 1.0 {
        return Err(SolveError::Precondition(format!(
            "4 K ||a|| = {:.3e} >= 1 at cutoff {n} (K = {bound:.3e}, ||a|| = {data_norm:.3e})",
            4.0 * bound * data_norm
        )));
    }

    let mut report = FriedrichsReport {
        cutoff: n,
        iterations: 0,
        converged: false,
        bilinear_bound: bound,
        data_norm,
        residuals: Vec::new(),
        besov: Vec::new(),
        support_leakage: 0.0,
        divergence_residual: 0.0,
        warnings: Vec::new(),
    };

    let mut current = if data_norm == 0.0 {
        report.converged = true;
        report.iterations = 1;
        Pair::zero(grid)
    } else {
        let mut x = a.clone();
        let mut done = false;
        for it in 1..=max_iters {
            let next = a.add(&bilinear(&x, &x, params, n)?)?;
            let update = next.sub(&x)?.norm() / data_norm;
            report.residuals.push(update);
            x = next;
            if update < tol {
                report.iterations = it;
                report.converged = true;
                done = true;
                break;
            }
        }
        if !done {
            report.iterations = max_iters;
            return Err(SolveError::Diverged {
                message: format!(
                    "cutoff iteration at level {n} did not converge within {max_iters} iterations"
                ),
                report: Box::new(crate::state::SolveReport {
                    mode: format!("friedrichs_{n}"),
                    iterations: max_iters,
                    converged: false,
                    residuals: report.residuals.clone(),
                    ..Default::default()
                }),
            });
        }
        x
    };

    // Re-filter once so reported fields live exactly on the annulus.
    current.u = cutoff(&current.u, n);
    current.b = cutoff(&current.b, n);

    let v = current.u.axpy(-params.hall, &ops::curl(&current.b))?;
    report.support_leakage = support_leakage(&current.u, n)
        .max(support_leakage(&current.b, n))
        .max(support_leakage(&v, n));
    report.divergence_residual = current
        .u
        .divergence_residual()
        .max(current.b.divergence_residual())
        .max(v.divergence_residual());

    let part = DyadicPartition::for_grid(&grid, 2)?;
    let comps: Vec<&spectral_core::SpectralField> = current
        .u
        .components()
        .iter()
        .chain(current.b.components().iter())
        .chain(v.components().iter())
        .collect();
    for &r in report_r {
        let idx = BesovIndex::new(0.5, Exponent::Finite(2.0), r)?;
        let value = besov_norm_components(&part, &comps, idx)?;
        report.besov.push(BesovReading {
            field: "(u,B,v)".into(),
            s: 0.5,
            p: "2".into(),
            r: r.to_string(),
            value,
        });
        if let Some(d) = delta {
            if value >= 2.0 * d {
                report.warnings.push(format!(
                    "stacked Besov reading {value:.3e} at r = {r} exceeds 2 delta = {:.3e}",
                    2.0 * d
                ));
            }
        }
    }

    Ok(FriedrichsSolution {
        u: current.u,
        b: current.b,
        v,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectral_core::DealiasRule;

    fn grid(n: usize) -> Grid {
        Grid::new(n, 1.0, DealiasRule::TwoThirds).unwrap()
    }

    fn small_force(grid: Grid, amp: f64) -> ForceTriple {
        let f = synth::random_divfree_field(grid, 300, 3).scale(amp);
        let g = synth::random_divfree_field(grid, 301, 3).scale(amp);
        ForceTriple::from_fg(f, g).unwrap()
    }

    #[test]
    fn converges_and_stays_on_the_annulus() {
        let g = grid(16);
        let p = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
        let force = small_force(g, 1e-3);
        let sol = friedrichs_solve(
            &force,
            &p,
            4,
            100,
            1e-12,
            &[Exponent::Finite(2.0)],
            None,
            900,
        )
        .unwrap();
        assert!(sol.report.converged);
        assert!(sol.report.support_leakage < 1e-13);
        assert!(sol.report.divergence_residual < 1e-12);
        assert_eq!(sol.report.besov.len(), 1);
        assert!(sol.report.besov[0].value > 0.0);
    }

    #[test]
    fn oversized_data_fails_the_precondition() {
        let g = grid(16);
        let p = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
        let force = small_force(g, 1e6);
        let err = friedrichs_solve(&force, &p, 4, 100, 1e-10, &[], None, 900);
        assert!(matches!(err, Err(SolveError::Precondition(_))));
    }

    #[test]
    fn solution_solves_the_filtered_fixed_point_equation() {
        let g = grid(16);
        let p = PhysicalParams::new(1.0, 2.0, 0.5).unwrap();
        let force = small_force(g, 1e-3);
        let sol =
            friedrichs_solve(&force, &p, 6, 100, 1e-13, &[], None, 901).unwrap();
        let x = Pair {
            u: sol.u.clone(),
            b: sol.b.clone(),
        };
        let rhs = linear_part(&force, &p, 6)
            .add(&bilinear(&x, &x, &p, 6).unwrap())
            .unwrap();
        let res = rhs.sub(&x).unwrap().norm() / x.norm();
        assert!(res < 1e-11, "fixed-point residual {res:e}");
    }

    #[test]
    fn readings_are_monotone_in_r() {
        // l^1 dominates l^2 dominates l^inf over the same block norms.
        let g = grid(16);
        let p = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
        let force = small_force(g, 1e-3);
        let rs = [
            Exponent::Finite(1.0),
            Exponent::Finite(2.0),
            Exponent::Infinity,
        ];
        let sol = friedrichs_solve(&force, &p, 8, 100, 1e-12, &rs, None, 902).unwrap();
        let vals: Vec<f64> = sol.report.besov.iter().map(|b| b.value).collect();
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
    }
}
