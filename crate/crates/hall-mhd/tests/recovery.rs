//! End-to-end recovery: manufacture an exact stationary solution, solve from
//! the forcing alone in both modes, and run the full diagnostic suite on the
//! recovered state.

use hall_mhd::diagnostics::{
    cancellation_check, fixed_point_residual, original_system_residual, v_field_diagnostics,
};
use hall_mhd::manufactured::manufactured_case;
use hall_mhd::picard::{picard_solve, SolveMode};
use hall_mhd::scaling::{dilate_force, dilate_state};
use hall_mhd::PhysicalParams;
use spectral_core::{DealiasRule, Grid};

fn recover_and_check(params: PhysicalParams, seed: u64) {
    let grid = Grid::new(32, 1.0, DealiasRule::TwoThirds).unwrap();
    let case = manufactured_case(grid, &params, seed, 4, 5e-3).unwrap();

    let (series, series_report) =
        picard_solve(&case.force, &params, SolveMode::Series, 50, 1e-12).unwrap();
    let (fixed, fixed_report) =
        picard_solve(&case.force, &params, SolveMode::FixedPoint, 100, 1e-12).unwrap();
    assert!(series_report.converged && fixed_report.converged);

    let err_series = series.sub(&case.target).unwrap().sobolev_norm(0.5)
        / case.target.sobolev_norm(0.5);
    let err_fixed =
        fixed.sub(&case.target).unwrap().sobolev_norm(0.5) / case.target.sobolev_norm(0.5);
    assert!(err_series < 1e-10, "series recovery error {err_series:e}");
    assert!(err_fixed < 1e-10, "fixed-point recovery error {err_fixed:e}");

    let agree = series.sub(&fixed).unwrap().sobolev_norm(0.5) / case.target.sobolev_norm(0.5);
    assert!(agree < 1e-10, "mode disagreement {agree:e}");

    // Diagnostics on the recovered state.
    let res = fixed_point_residual(&fixed, &case.force, &params).unwrap();
    assert!(res < 1e-11, "fixed-point residual {res:e}");
    let orig = original_system_residual(&fixed.u, &fixed.b, &case.force, &params).unwrap();
    assert!(orig.momentum < 1e-10 && orig.induction < 1e-10, "{orig:?}");
    let vrep = v_field_diagnostics(&fixed, &case.force, &params).unwrap();
    assert!(vrep.residual < 1e-9, "v-equation residual {:e}", vrep.residual);
    let cancel = cancellation_check(&fixed, &params).unwrap();
    assert!(cancel.hall_curl_route < 1e-11);
    assert!(cancel.hall_pointwise_route < 1e-11);
    assert!(cancel.quasilinear_pairing < 1e-11);
}

#[test]
fn recovers_with_equal_parameters() {
    recover_and_check(PhysicalParams::new(1.0, 1.0, 1.0).unwrap(), 31);
}

#[test]
fn recovers_with_distinct_parameters() {
    recover_and_check(PhysicalParams::new(1.0, 2.0, 0.5).unwrap(), 37);
}

#[test]
fn recovery_commutes_with_dilation() {
    let grid = Grid::new(32, 1.0, DealiasRule::TwoThirds).unwrap();
    let params = PhysicalParams::new(1.0, 2.0, 0.5).unwrap();
    let case = manufactured_case(grid, &params, 41, 4, 5e-3).unwrap();

    let (sol, _) = picard_solve(&case.force, &params, SolveMode::FixedPoint, 100, 1e-13).unwrap();
    let route_a = dilate_state(&sol, 2.0).unwrap();
    let dilated = dilate_force(&case.force, 2.0).unwrap();
    let (route_b, _) = picard_solve(&dilated, &params, SolveMode::FixedPoint, 100, 1e-13).unwrap();
    let diff = route_a.sub(&route_b).unwrap().l2_norm() / route_a.l2_norm();
    assert!(diff < 1e-10, "equivariance defect {diff:e}");
}
