//! Manufactured stationary solutions: pick a smooth divergence-free target
//! state, then construct forcing data for which it solves the system exactly.

use spectral_core::{ops, synth, Grid};

use crate::operators::nonlinear_raw;
use crate::state::{CurlGProvenance, ForceTriple, HallState, PhysicalParams, SolveError};

/// A target state together with the forcing that makes it an exact solution.
#[derive(Debug, Clone)]
pub struct ManufacturedCase {
    pub target: HallState,
    pub force: ForceTriple,
}

/// Build a manufactured case from a random band-limited divergence-free
/// target. The fixed-point equation `U = L F + N(U, U)` is solved exactly by
/// `target` when
///
/// ```text
/// f      = -mu Delta (u* - N1(U*, U*))
/// g      = -nu Delta (B* - N2(U*, U*))
/// curl g = -nu Delta (J* - N3(U*, U*))
/// ```
///
/// With `J* = curl B*` the third datum is automatically the curl of the
/// second, so the triple is internally consistent.
pub fn manufactured_case(
    grid: Grid,
    params: &PhysicalParams,
    seed: u64,
    band: i64,
    amplitude: f64,
) -> Result<ManufacturedCase, SolveError> {
    if amplitude <= 0.0 {
        return Err(SolveError::Parameter(format!(
            "amplitude must be positive, got {amplitude}"
        )));
    }
    let u_star = synth::random_divfree_field(grid, seed, band).scale(amplitude);
    let b_star = synth::random_divfree_field(grid, seed.wrapping_add(1), band).scale(amplitude);
    let j_star = ops::curl(&b_star);
    let target = HallState {
        u: u_star,
        b: b_star,
        j: j_star,
    };

    let n = nonlinear_raw(&target, &target, params)?;
    let f = ops::laplacian_vec(&target.u.sub(&n.u)?).scale(-params.mu);
    let g = ops::laplacian_vec(&target.b.sub(&n.b)?).scale(-params.nu);
    let curl_g = ops::laplacian_vec(&target.j.sub(&n.j)?).scale(-params.nu);
    let force = ForceTriple {
        f,
        g,
        curl_g,
        provenance: CurlGProvenance::Supplied,
    };
    Ok(ManufacturedCase { target, force })
}
