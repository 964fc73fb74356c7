//! The scaling symmetry of the system: dilating the data by
//! `F -> lambda^3 F(lambda x)` sends solutions to `lambda U(lambda x)`. On
//! the discrete side a dilation is a coefficient rescale plus a
//! reinterpretation of the box scale `L -> L / lambda`.

use spectral_core::SpectralVectorField;

use crate::state::{ForceTriple, HallState, SolveError};

/// `v -> lambda^degree v(lambda x)`: multiply coefficients by
/// `lambda^degree` and shrink the box by `lambda`.
pub fn dilate_vector(
    v: &SpectralVectorField,
    lambda: f64,
    degree: i32,
) -> Result<SpectralVectorField, SolveError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(SolveError::Parameter(format!(
            "dilation factor must be positive and finite, got {lambda}"
        )));
    }
    let new_l = v.grid().box_scale / lambda;
    Ok(v.scale(lambda.powi(degree)).reinterpret_box_scale(new_l)?)
}

/// Dilate the data triple. In the extended formulation all three data slots
/// carry degree 3, the curl datum included: it transforms as an independent
/// datum, so a dilated triple no longer satisfies `curl_g = curl g` and is
/// marked as supplied.
pub fn dilate_force(force: &ForceTriple, lambda: f64) -> Result<ForceTriple, SolveError> {
    Ok(ForceTriple {
        f: dilate_vector(&force.f, lambda, 3)?,
        g: dilate_vector(&force.g, lambda, 3)?,
        curl_g: dilate_vector(&force.curl_g, lambda, 3)?,
        provenance: crate::state::CurlGProvenance::Supplied,
    })
}

/// Dilate a state: `u`, `B` and `J` all carry degree 1 in the extended
/// formulation.
pub fn dilate_state(state: &HallState, lambda: f64) -> Result<HallState, SolveError> {
    Ok(HallState {
        u: dilate_vector(&state.u, lambda, 1)?,
        b: dilate_vector(&state.b, lambda, 1)?,
        j: dilate_vector(&state.j, lambda, 1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::{picard_solve, SolveMode};
    use crate::state::PhysicalParams;
    use spectral_core::{synth, DealiasRule, Grid};

    fn small_force(grid: Grid, amp: f64) -> ForceTriple {
        let f = synth::random_divfree_field(grid, 500, 3).scale(amp);
        let g = synth::random_divfree_field(grid, 501, 3).scale(amp);
        ForceTriple::from_fg(f, g).unwrap()
    }

    #[test]
    fn linear_solve_commutes_with_dilation() {
        let g = Grid::new(16, 1.0, DealiasRule::TwoThirds).unwrap();
        let p = PhysicalParams::new(1.0, 2.0, 0.5).unwrap();
        let force = small_force(g, 1e-2);
        let route_a = dilate_state(&crate::operators::linear_solve(&force, &p), 2.0).unwrap();
        let route_b = crate::operators::linear_solve(&dilate_force(&force, 2.0).unwrap(), &p);
        let diff = route_a.sub(&route_b).unwrap();
        assert!(diff.l2_norm() < 1e-13 * route_a.l2_norm());
    }

    #[test]
    fn solve_then_dilate_equals_dilate_then_solve() {
        let g = Grid::new(16, 1.0, DealiasRule::TwoThirds).unwrap();
        let p = PhysicalParams::new(1.0, 2.0, 0.5).unwrap();
        let force = small_force(g, 1e-3);
        let lambda = 2.0;

        let (sol, _) = picard_solve(&force, &p, SolveMode::FixedPoint, 100, 1e-13).unwrap();
        let route_a = dilate_state(&sol, lambda).unwrap();

        let dilated = dilate_force(&force, lambda).unwrap();
        let (route_b, _) =
            picard_solve(&dilated, &p, SolveMode::FixedPoint, 100, 1e-13).unwrap();

        let diff = route_a.sub(&route_b).unwrap();
        assert!(diff.l2_norm() < 1e-10 * route_a.l2_norm());
    }

    #[test]
    fn dilation_is_invertible() {
        let g = Grid::new(16, 1.0, DealiasRule::TwoThirds).unwrap();
        let v = synth::random_divfree_field(g, 7, 4);
        let back = dilate_vector(&dilate_vector(&v, 2.0, 1).unwrap(), 0.5, 1).unwrap();
        assert!(v.sub(&back).unwrap().l2_norm() < 1e-14 * v.l2_norm());
        assert_eq!(back.grid().box_scale, 1.0);
    }
}
