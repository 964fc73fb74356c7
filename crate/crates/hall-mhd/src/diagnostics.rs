//! Identity and residual diagnostics: fixed-point residuals, residuals of the
//! original velocity-magnetic system, the energy-pairing cancellations, and
//! the term-by-term balance of the auxiliary `v = u - h J` equation.

use serde::Serialize;
use spectral_core::{ops, product, project, SpectralVectorField};

use crate::operators::{linear_solve, nonlinear_n};
use crate::state::{ForceTriple, HallState, PhysicalParams, SolveError};

/// `L^2` inner product of two vector fields via Parseval.
pub fn inner_product(a: &SpectralVectorField, b: &SpectralVectorField) -> f64 {
    let volume = a.grid().volume();
    let mut acc = 0.0;
    for c in 0..3 {
        let fa = a.component(c);
        let fb = b.component(c);
        acc += fa
            .coeffs()
            .iter()
            .zip(fb.coeffs())
            .map(|(x, y)| (x * y.conj()).re)
            .sum::<f64>();
        acc += (fa.mean() * fb.mean().conj()).re;
    }
    acc * volume
}

/// Relative residual of `U = L F + N(U, U)` in the stacked `L^2` norm.
pub fn fixed_point_residual(
    state: &HallState,
    force: &ForceTriple,
    params: &PhysicalParams,
) -> Result<f64, SolveError> {
    let rhs = linear_solve(force, params).add(&nonlinear_n(state, state, params)?)?;
    let diff = rhs.sub(state)?;
    let scale = state.l2_norm().max(rhs.l2_norm());
    Ok(if scale > 0.0 { diff.l2_norm() / scale } else { 0.0 })
}

/// Residuals of the original two-field system, projected to remove the
/// pressure gradient, each normalized by the largest participating term.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OriginalResiduals {
    pub momentum: f64,
    pub induction: f64,
}

pub fn original_system_residual(
    u: &SpectralVectorField,
    b: &SpectralVectorField,
    force: &ForceTriple,
    params: &PhysicalParams,
) -> Result<OriginalResiduals, SolveError> {
    let curl_b = ops::curl(b);

    // P(u . grad u) - mu Delta u - P((curl B) x B) = P f.
    let advection = project::leray_project(&product::advect(u, u)?);
    let viscous = ops::laplacian_vec(u).scale(-params.mu);
    let lorentz = project::leray_project(&product::cross(&curl_b, b)?);
    let pf = project::leray_project(&force.f);
    let momentum_res = advection.add(&viscous)?.sub(&lorentz)?.sub(&pf)?;
    let momentum_scale = advection
        .l2_norm()
        .max(viscous.l2_norm())
        .max(lorentz.l2_norm())
        .max(pf.l2_norm());

    // -nu Delta B - curl((u - h curl B) x B) = g.
    let resistive = ops::laplacian_vec(b).scale(-params.nu);
    let w = u.axpy(-params.hall, &curl_b)?;
    let hall_term = ops::curl(&product::cross(&w, b)?);
    let induction_res = resistive.sub(&hall_term)?.sub(&force.g)?;
    let induction_scale = resistive
        .l2_norm()
        .max(hall_term.l2_norm())
        .max(force.g.l2_norm());

    Ok(OriginalResiduals {
        momentum: if momentum_scale > 0.0 {
            momentum_res.l2_norm() / momentum_scale
        } else {
            0.0
        },
        induction: if induction_scale > 0.0 {
            induction_res.l2_norm() / induction_scale
        } else {
            0.0
        },
    })
}

/// The energy-pairing cancellations. Both pairings of the Hall term with `B`
/// vanish identically, as does the pairing of the quasilinear term with `v`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CancellationReport {
    /// `((curl((curl B) x B), B))`, via the spectral curl.
    pub hall_curl_route: f64,
    /// `(((curl B) x B, curl B))`, via the pointwise triple product.
    pub hall_pointwise_route: f64,
    /// `((curl((curl v) x B), v))` for `v = u - h J`.
    pub quasilinear_pairing: f64,
}

/// Pointwise rectangle-rule integral of `(a x b) . a` in physical space. The
/// integrand vanishes identically, so the value measures pure roundoff.
fn pointwise_triple_integral(
    a: &SpectralVectorField,
    b: &SpectralVectorField,
) -> Result<f64, SolveError> {
    let grid = a.grid();
    let (a0, a1, a2) = (
        a.component(0).to_physical_real()?,
        a.component(1).to_physical_real()?,
        a.component(2).to_physical_real()?,
    );
    let (b0, b1, b2) = (
        b.component(0).to_physical_real()?,
        b.component(1).to_physical_real()?,
        b.component(2).to_physical_real()?,
    );
    let mut acc = 0.0;
    for i in 0..a0.len() {
        let cross = [
            a1[i] * b2[i] - a2[i] * b1[i],
            a2[i] * b0[i] - a0[i] * b2[i],
            a0[i] * b1[i] - a1[i] * b0[i],
        ];
        acc += cross[0] * a0[i] + cross[1] * a1[i] + cross[2] * a2[i];
    }
    Ok(acc * grid.cell_volume())
}

pub fn cancellation_check(
    state: &HallState,
    params: &PhysicalParams,
) -> Result<CancellationReport, SolveError> {
    let curl_b = ops::curl(&state.b);
    let jxb = product::cross(&curl_b, &state.b)?;
    let scale_b = (jxb.l2_norm() * state.b.l2_norm()).max(f64::MIN_POSITIVE);
    let hall_curl_route = inner_product(&ops::curl(&jxb), &state.b).abs() / scale_b;
    let scale_j = (jxb.l2_norm() * curl_b.l2_norm()).max(f64::MIN_POSITIVE);
    let hall_pointwise_route =
        pointwise_triple_integral(&curl_b, &state.b)?.abs() / scale_j;

    let v = state.u.axpy(-params.hall, &state.j)?;
    let curl_v = ops::curl(&v);
    let cvxb = product::cross(&curl_v, &state.b)?;
    let scale_v = (cvxb.l2_norm() * v.l2_norm()).max(f64::MIN_POSITIVE);
    let quasilinear_pairing = inner_product(&ops::curl(&cvxb), &v).abs() / scale_v;

    Ok(CancellationReport {
        hall_curl_route,
        hall_pointwise_route,
        quasilinear_pairing,
    })
}

/// Term-by-term balance of the auxiliary-field equation. Each named term is
/// Leray-projected; the residual is normalized by the largest term norm.
#[derive(Debug, Clone, Serialize)]
pub struct VFieldReport {
    pub residual: f64,
    pub term_norms: Vec<(String, f64)>,
}

pub fn v_field_diagnostics(
    state: &HallState,
    force: &ForceTriple,
    params: &PhysicalParams,
) -> Result<VFieldReport, SolveError> {
    let h = params.hall;
    let v = state.u.axpy(-h, &state.j)?;

    // Left side: -nu Delta v.
    let lhs = ops::laplacian_vec(&v).scale(-params.nu);

    // Right side, projected term by term:
    // B . grad B - u . grad u - h curl((curl v) x B) + f - h curl g
    // + curl(v x u) + 2 curl((v . grad) curl^{-1}(u - v)) + (mu - nu) Delta u.
    let mut terms: Vec<(String, SpectralVectorField)> = Vec::new();
    terms.push((
        "B.grad B".into(),
        project::leray_project(&product::advect(&state.b, &state.b)?),
    ));
    terms.push((
        "-u.grad u".into(),
        project::leray_project(&product::advect(&state.u, &state.u)?).scale(-1.0),
    ));
    let curl_v = ops::curl(&v);
    terms.push((
        "-h curl((curl v) x B)".into(),
        ops::curl(&product::cross(&curl_v, &state.b)?).scale(-h),
    ));
    terms.push(("f".into(), project::leray_project(&force.f)));
    terms.push(("-h curl g".into(), force.curl_g.scale(-h)));
    terms.push(("curl(v x u)".into(), ops::curl(&product::cross(&v, &state.u)?)));
    let anti = project::biot_savart(&state.u.sub(&v)?);
    terms.push((
        "2 curl((v.grad) curl^{-1}(u - v))".into(),
        ops::curl(&product::advect(&v, &anti)?).scale(2.0),
    ));
    terms.push((
        "(mu - nu) Delta u".into(),
        ops::laplacian_vec(&state.u).scale(params.mu - params.nu),
    ));

    let mut rhs = SpectralVectorField::zero(*state.grid());
    let mut scale = lhs.l2_norm();
    let mut term_norms = vec![("-nu Delta v".to_string(), lhs.l2_norm())];
    for (name, term) in terms {
        scale = scale.max(term.l2_norm());
        term_norms.push((name, term.l2_norm()));
        rhs = rhs.add(&term)?;
    }
    let residual = lhs.sub(&rhs)?.l2_norm() / scale.max(f64::MIN_POSITIVE);
    Ok(VFieldReport {
        residual,
        term_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manufactured::manufactured_case;
    use spectral_core::{synth, DealiasRule, Grid};

    fn grid(n: usize) -> Grid {
        Grid::new(n, 1.0, DealiasRule::TwoThirds).unwrap()
    }

    #[test]
    fn inner_product_matches_norm() {
        let g = grid(16);
        let a = synth::random_vector_field(g, 5, 4);
        let ip = inner_product(&a, &a);
        assert!((ip.sqrt() - a.l2_norm()).abs() < 1e-10 * a.l2_norm());
    }

    #[test]
    fn cancellations_vanish_for_random_fields() {
        let g = grid(32);
        let state = HallState {
            u: synth::random_divfree_field(g, 41, 5),
            b: synth::random_divfree_field(g, 42, 5),
            j: synth::random_divfree_field(g, 43, 5),
        };
        let p = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
        let report = cancellation_check(&state, &p).unwrap();
        assert!(report.hall_curl_route < 1e-12, "{:?}", report);
        assert!(report.hall_pointwise_route < 1e-12, "{:?}", report);
        assert!(report.quasilinear_pairing < 1e-12, "{:?}", report);
    }

    #[test]
    fn manufactured_solution_balances_the_original_system() {
        let g = grid(32);
        let p = PhysicalParams::new(1.0, 2.0, 0.5).unwrap();
        let case = manufactured_case(g, &p, 17, 4, 1e-2).unwrap();
        let res = fixed_point_residual(&case.target, &case.force, &p).unwrap();
        assert!(res < 1e-12, "fixed-point residual {res:e}");
        let orig =
            original_system_residual(&case.target.u, &case.target.b, &case.force, &p).unwrap();
        assert!(orig.momentum < 1e-11, "momentum residual {:e}", orig.momentum);
        assert!(orig.induction < 1e-11, "induction residual {:e}", orig.induction);
    }

    #[test]
    fn manufactured_solution_balances_the_v_equation() {
        let g = grid(32);
        let p = PhysicalParams::new(1.0, 2.0, 0.5).unwrap();
        let case = manufactured_case(g, &p, 19, 4, 1e-2).unwrap();
        let report = v_field_diagnostics(&case.target, &case.force, &p).unwrap();
        assert!(report.residual < 1e-10, "v-equation residual {:e}", report.residual);
        assert_eq!(report.term_norms.len(), 9);
    }

    #[test]
    fn v_equation_reduces_to_induction_difference_when_viscosities_match() {
        // A sanity case: mu = nu removes the last term entirely.
        let g = grid(16);
        let p = PhysicalParams::new(1.5, 1.5, 0.7).unwrap();
        let case = manufactured_case(g, &p, 23, 3, 1e-2).unwrap();
        let report = v_field_diagnostics(&case.target, &case.force, &p).unwrap();
        let last = report.term_norms.last().unwrap();
        assert_eq!(last.1, 0.0);
        assert!(report.residual < 1e-10);
    }
}
