//! Picard solvers: the explicit series of bilinear iterates and the direct
//! fixed-point iteration, with divergence detection instead of assumed
//! smallness.

use crate::operators::{linear_solve, nonlinear_raw};
use crate::state::{ForceTriple, HallState, PhysicalParams, SolveError, SolveReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Accumulate `sum_m A_m F` with `A_1 = L F` and
    /// `A_m = sum_{k+l=m} N(A_k, A_l)`.
    Series,
    /// Iterate `U <- L F + N(U, U)` to a fixed point.
    FixedPoint,
}

/// Iteration-control norm: the stacked homogeneous `H^{1/2}` norm.
fn control_norm(state: &HallState) -> f64 {
    state.sobolev_norm(0.5)
}

fn check_monotone(residuals: &[f64]) -> bool {
    residuals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
}

/// Solve by the requested mode. `tol` is relative to the linear part's norm;
/// `max_m` caps series orders or fixed-point iterations.
pub fn picard_solve(
    force: &ForceTriple,
    params: &PhysicalParams,
    mode: SolveMode,
    max_m: usize,
    tol: f64,
) -> Result<(HallState, SolveReport), SolveError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(SolveError::Parameter(format!(
            "tolerance must lie in (0, 1), got {tol}"
        )));
    }
    if max_m == 0 {
        return Err(SolveError::Parameter("max_m must be positive".into()));
    }
    match mode {
        SolveMode::Series => solve_series(force, params, max_m, tol),
        SolveMode::FixedPoint => solve_fixed_point(force, params, max_m, tol),
    }
}

fn solve_series(
    force: &ForceTriple,
    params: &PhysicalParams,
    max_m: usize,
    tol: f64,
) -> Result<(HallState, SolveReport), SolveError> {
    let a1 = linear_solve(force, params);
    let scale = control_norm(&a1);
    let mut report = SolveReport {
        mode: "series".into(),
        ..Default::default()
    };
    if scale == 0.0 {
        report.converged = true;
        report.iterations = 1;
        report.residuals_monotone = true;
        return Ok((a1, report));
    }

    let mut terms: Vec<HallState> = vec![a1.clone()];
    let mut sum = a1;
    report.series_norms.push(scale);
    report.residuals.push(1.0);

    let mut growth_streak = 0usize;
    for m in 2..=max_m {
        // A_m = sum over k + l = m of the symmetrized bilinear map; pairing
        // (k, l) with (l, k) makes each raw evaluation count once.
        let mut a_m = HallState::zero(*force.grid());
        for k in 1..m {
            let l = m - k;
            if k > l {
                break;
            }
            let term = nonlinear_raw(&terms[k - 1], &terms[l - 1], params)?;
            a_m = a_m.add(&term)?;
            if k < l {
                a_m = a_m.add(&nonlinear_raw(&terms[l - 1], &terms[k - 1], params)?)?;
            }
        }
        let norm = control_norm(&a_m);
        report.series_norms.push(norm);
        report.residuals.push(norm / scale);
        sum = sum.add(&a_m)?;
        terms.push(a_m);

        if norm > report.series_norms[m - 2] {
            growth_streak += 1;
        } else {
            growth_streak = 0;
        }
        if growth_streak >= 3 {
            report.iterations = m;
            report.residuals_monotone = check_monotone(&report.residuals);
            return Err(SolveError::Diverged {
                message: format!("series terms grew for 3 consecutive orders (through m = {m})"),
                report: Box::new(report),
            });
        }
        if norm / scale < tol {
            report.iterations = m;
            report.converged = true;
            report.residuals_monotone = check_monotone(&report.residuals);
            return Ok((sum, report));
        }
    }
    report.iterations = max_m;
    report.residuals_monotone = check_monotone(&report.residuals);
    Err(SolveError::Diverged {
        message: format!("series did not reach tolerance within {max_m} orders"),
        report: Box::new(report),
    })
}

fn solve_fixed_point(
    force: &ForceTriple,
    params: &PhysicalParams,
    max_iters: usize,
    tol: f64,
) -> Result<(HallState, SolveReport), SolveError> {
    let lf = linear_solve(force, params);
    let scale = control_norm(&lf);
    let mut report = SolveReport {
        mode: "fixed_point".into(),
        ..Default::default()
    };
    if scale == 0.0 {
        report.converged = true;
        report.iterations = 1;
        report.residuals_monotone = true;
        return Ok((lf, report));
    }

    let mut current = lf.clone();
    let mut growth_streak = 0usize;
    let mut last = f64::INFINITY;
    for it in 1..=max_iters {
        // On the diagonal the symmetrized map coincides with the raw map.
        let next = lf.add(&nonlinear_raw(&current, &current, params)?)?;
        let update = control_norm(&next.sub(&current)?) / scale;
        report.residuals.push(update);
        current = next;

        if update > last {
            growth_streak += 1;
        } else {
            growth_streak = 0;
        }
        if growth_streak >= 3 {
            report.iterations = it;
            report.residuals_monotone = check_monotone(&report.residuals);
            return Err(SolveError::Diverged {
                message: format!("update norms grew for 3 consecutive iterations (through {it})"),
                report: Box::new(report),
            });
        }
        last = update;

        if update < tol {
            report.iterations = it;
            report.converged = true;
            report.residuals_monotone = check_monotone(&report.residuals);
            return Ok((current, report));
        }
    }
    report.iterations = max_iters;
    report.residuals_monotone = check_monotone(&report.residuals);
    Err(SolveError::Diverged {
        message: format!("fixed-point iteration did not converge within {max_iters} iterations"),
        report: Box::new(report),
    })
}
