//! The linear data-to-state map and the bilinear nonlinearities of the
//! extended system in its solved (pressure-free) form:
//!
//! ```text
//! u = (-mu Delta)^{-1} P f + N1,   N1 = (-mu Delta)^{-1} P div(-u (x) u + B (x) B)
//! B = (-nu Delta)^{-1} P g + N2,   N2 = (-nu Delta)^{-1} curl((u - h J) x B)
//! J = (-nu Delta)^{-1} P curl g + N3,
//!                                  N3 = (-nu Delta)^{-1} curl curl((u - h J) x curl^{-1} J)
//! ```

use spectral_core::{ops, product, project, SpectralVectorField};

use crate::state::{ForceTriple, HallState, PhysicalParams, SolveError};

/// The linear part: componentwise inverse Laplacians of the projected data.
pub fn linear_solve(force: &ForceTriple, params: &PhysicalParams) -> HallState {
    let solve = |v: &SpectralVectorField, visc: f64| {
        ops::inverse_laplacian_vec(&project::leray_project(v)).scale(1.0 / visc)
    };
    HallState {
        u: solve(&force.f, params.mu),
        b: solve(&force.g, params.nu),
        j: solve(&force.curl_g, params.nu),
    }
}

/// The raw (non-symmetric) bilinear map, with the left state supplying the
/// first factor of every product and the right state the second.
pub fn nonlinear_raw(
    left: &HallState,
    right: &HallState,
    params: &PhysicalParams,
) -> Result<HallState, SolveError> {
    // N1: (-mu Delta)^{-1} P div(-u (x) u + B (x) B).
    let uu = product::div_tensor(&left.u, &right.u)?;
    let bb = product::div_tensor(&left.b, &right.b)?;
    let n1 = ops::inverse_laplacian_vec(&project::leray_project(&bb.sub(&uu)?))
        .scale(1.0 / params.mu);

    // The shared factor u - h J from the left state.
    let w = left.u.axpy(-params.hall, &left.j)?;

    // N2: (-nu Delta)^{-1} curl((u - h J) x B).
    let wxb = product::cross(&w, &right.b)?;
    let n2 = ops::inverse_laplacian_vec(&ops::curl(&wxb)).scale(1.0 / params.nu);

    // N3: (-nu Delta)^{-1} curl curl((u - h J) x curl^{-1} J).
    let cinv_j = project::biot_savart(&right.j);
    let wxj = product::cross(&w, &cinv_j)?;
    let n3 = ops::inverse_laplacian_vec(&ops::curl(&ops::curl(&wxj))).scale(1.0 / params.nu);

    Ok(HallState { u: n1, b: n2, j: n3 })
}

/// The symmetrized bilinear map `N(U, V) = (raw(U,V) + raw(V,U)) / 2`, which
/// agrees with the paper's `N(U, U)` on the diagonal.
pub fn nonlinear_n(
    left: &HallState,
    right: &HallState,
    params: &PhysicalParams,
) -> Result<HallState, SolveError> {
    let a = nonlinear_raw(left, right, params)?;
    let b = nonlinear_raw(right, left, params)?;
    Ok(a.add(&b)?.scale(0.5))
}
