//! Empirical auditors for the product and commutator estimates.
//!
//! The estimates hold with unspecified constants, so the auditors do not
//! assert a bound; they report the distribution of left-side over right-side
//! ratios across a documented random ensemble. Finiteness and stability of
//! the maximum across resolutions is the testable claim.

use std::path::Path;

use serde::Serialize;
use spectral_core::{ops, product, project, Error, Exponent, Grid, Result, SpectralVectorField};

use crate::besov::{self, BesovIndex};
use crate::commutator::commutator;
use crate::ensemble;
use crate::partition::DyadicPartition;

/// Product estimates under audit. Each variant carries the free indices the
/// estimate statement leaves open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductLaw {
    /// `||uv||_{B^{3/p-1}_{p,r}} <~ ||u||_{B^{3/p-1}_{p,r}} max(||v||_{B^{3/p}_{p,inf}}, ||v||_inf)`,
    /// for `1 <= p < 6`.
    Pl2 { p: f64, r: Exponent },
    /// `||uv||_{B^{3/p-2}_{p,r}} <~ ||u||_{B^{3/p-1}_{p,r1}} ||v||_{B^{3/p-1}_{p,r2}}`,
    /// for `1 <= p < 3` and `1/r = 1/r1 + 1/r2`.
    Pl1 { p: f64, r1: Exponent, r2: Exponent },
    /// `||h1 h2||_{B^{-1/2}_{2,r}} <~ ||h1||_{B^{1/2}_{2,r}} ||h2||_{B^{1/2}_{2,r}}`.
    PlMinusHalf { r: Exponent },
    /// `||h1 h2||_{B^{-3/4}_{2,r}} <~ ||h1||_{B^{-1/2}_{2,r}} ||h2||_{B^{5/4}_{2,r}}`.
    PlMinusThreeQuarters { r: Exponent },
    /// `||N(u,v)||_{B^0_{3,r}} <~ ||u||_{L^3} ||v||_{L^3}`, for `3/2 < r <= 2`,
    /// with `N` the stationary Navier-Stokes bilinear map.
    NsBilinear { r: Exponent, mu: f64 },
}

impl ProductLaw {
    pub fn name(&self) -> &'static str {
        match self {
            ProductLaw::Pl2 { .. } => "pl_2",
            ProductLaw::Pl1 { .. } => "pl_1",
            ProductLaw::PlMinusHalf { .. } => "pl_minus_half",
            ProductLaw::PlMinusThreeQuarters { .. } => "pl_minus_3quarters",
            ProductLaw::NsBilinear { .. } => "ns_bilinear",
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        match *self {
            ProductLaw::Pl2 { p, r } => {
                r.validate()?;
                if !(1.0..6.0).contains(&p) {
                    return bad(format!("pl_2 requires 1 <= p < 6, got {p}"));
                }
            }
            ProductLaw::Pl1 { p, r1, r2 } => {
                r1.validate()?;
                r2.validate()?;
                if !(1.0..3.0).contains(&p) {
                    return bad(format!("pl_1 requires 1 <= p < 3, got {p}"));
                }
                if 1.0 / r1.value() + 1.0 / r2.value() > 1.0 + 1e-12 {
                    return bad("pl_1 requires 1/r1 + 1/r2 <= 1".into());
                }
            }
            ProductLaw::PlMinusHalf { r } | ProductLaw::PlMinusThreeQuarters { r } => {
                r.validate()?;
            }
            ProductLaw::NsBilinear { r, mu } => {
                r.validate()?;
                let rv = r.value();
                if !(rv > 1.5 && rv <= 2.0) {
                    return bad(format!("ns_bilinear requires 3/2 < r <= 2, got {r}"));
                }
                if mu <= 0.0 {
                    return bad(format!("viscosity must be positive, got {mu}"));
                }
            }
        }
        Ok(())
    }

    /// Regularity of the audited left side, for reporting.
    fn lhs_regularity(&self) -> f64 {
        match *self {
            ProductLaw::Pl2 { p, .. } => 3.0 / p - 1.0,
            ProductLaw::Pl1 { p, .. } => 3.0 / p - 2.0,
            ProductLaw::PlMinusHalf { .. } => -0.5,
            ProductLaw::PlMinusThreeQuarters { .. } => -0.75,
            ProductLaw::NsBilinear { .. } => 0.0,
        }
    }

    fn lhs_p(&self) -> Exponent {
        match *self {
            ProductLaw::Pl2 { p, .. } | ProductLaw::Pl1 { p, .. } => Exponent::finite(p),
            ProductLaw::PlMinusHalf { .. } | ProductLaw::PlMinusThreeQuarters { .. } => {
                Exponent::finite(2.0)
            }
            ProductLaw::NsBilinear { .. } => Exponent::finite(3.0),
        }
    }

    fn lhs_r(&self) -> Exponent {
        match *self {
            ProductLaw::Pl2 { r, .. }
            | ProductLaw::PlMinusHalf { r }
            | ProductLaw::PlMinusThreeQuarters { r }
            | ProductLaw::NsBilinear { r, .. } => r,
            ProductLaw::Pl1 { r1, r2, .. } => {
                let inv = 1.0 / r1.value() + 1.0 / r2.value();
                if inv == 0.0 {
                    Exponent::INF
                } else {
                    Exponent::finite(1.0 / inv)
                }
            }
        }
    }
}

/// Ratio distribution of one audited estimate over one ensemble.
#[derive(Debug, Clone, Serialize)]
pub struct RatioStats {
    pub law: String,
    pub s: f64,
    pub p: String,
    pub r: String,
    pub n_samples: usize,
    pub n_skipped: usize,
    pub max_ratio: f64,
    pub p95_ratio: f64,
    pub mean_ratio: f64,
    pub grid_n: usize,
}

fn summarize(
    law: String,
    s: f64,
    p: String,
    r: String,
    mut ratios: Vec<f64>,
    n_skipped: usize,
    grid_n: usize,
) -> RatioStats {
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = ratios.len();
    let max = ratios.last().copied().unwrap_or(0.0);
    let p95 = if n == 0 {
        0.0
    } else {
        ratios[((0.95 * n as f64).ceil() as usize).clamp(1, n) - 1]
    };
    let mean = if n == 0 {
        0.0
    } else {
        ratios.iter().sum::<f64>() / n as f64
    };
    RatioStats {
        law,
        s,
        p,
        r,
        n_samples: n,
        n_skipped,
        max_ratio: max,
        p95_ratio: p95,
        mean_ratio: mean,
        grid_n,
    }
}

/// The stationary Navier-Stokes bilinear map
/// `N(u, v) = -(-mu Delta)^{-1} P div(u (x) v)`.
pub fn ns_bilinear(
    u: &SpectralVectorField,
    v: &SpectralVectorField,
    mu: f64,
) -> Result<SpectralVectorField> {
    // The projection, inversion, and scaling run in place on the owned
    // divergence term: at large grids the extra copies dominate the footprint.
    let mut out = product::div_tensor(u, v)?;
    project::leray_project_in_place(&mut out);
    ops::inverse_laplacian_vec_in_place(&mut out);
    out.scale_in_place(-1.0 / mu);
    Ok(out)
}

/// Audit one product law over `n_pairs` ensemble pairs on `grid`.
pub fn audit_product_law(
    grid: Grid,
    law: ProductLaw,
    n_pairs: usize,
    seed: u64,
    band: i64,
) -> Result<RatioStats> {
    law.validate()?;
    let part = DyadicPartition::for_grid(&grid, 2)?;
    let mut ratios = Vec::with_capacity(n_pairs);
    let mut skipped = 0usize;
    for i in 0..n_pairs {
        let (lhs, rhs) = match law {
            ProductLaw::NsBilinear { r, mu } => {
                let (u, v) = ensemble::divfree_pair(grid, seed, i as u64, band);
                let n_uv = ns_bilinear(&u, &v, mu)?;
                let idx = BesovIndex::new(0.0, 3.0, r)?;
                let lhs = besov::besov_norm_vec(&part, &n_uv, idx)?;
                let rhs = u.lp_norm(Exponent::finite(3.0))? * v.lp_norm(Exponent::finite(3.0))?;
                (lhs, rhs)
            }
            _ => {
                let (u, v) = ensemble::scalar_pair(grid, seed, i as u64, band);
                let uv = product::multiply(&u, &v)?;
                match law {
                    ProductLaw::Pl2 { p, r } => {
                        let lhs = besov::besov_norm(
                            &part,
                            &uv,
                            BesovIndex::new(3.0 / p - 1.0, p, r)?,
                        )?;
                        let vb = besov::besov_norm(
                            &part,
                            &v,
                            BesovIndex::new(3.0 / p, p, Exponent::INF)?,
                        )?;
                        let vinf = v.lp_norm(Exponent::INF)?;
                        let ub =
                            besov::besov_norm(&part, &u, BesovIndex::new(3.0 / p - 1.0, p, r)?)?;
                        (lhs, ub * vb.max(vinf))
                    }
                    ProductLaw::Pl1 { p, r1, r2 } => {
                        let r = law.lhs_r();
                        let lhs = besov::besov_norm(
                            &part,
                            &uv,
                            BesovIndex::new(3.0 / p - 2.0, p, r)?,
                        )?;
                        let ub =
                            besov::besov_norm(&part, &u, BesovIndex::new(3.0 / p - 1.0, p, r1)?)?;
                        let vb =
                            besov::besov_norm(&part, &v, BesovIndex::new(3.0 / p - 1.0, p, r2)?)?;
                        (lhs, ub * vb)
                    }
                    ProductLaw::PlMinusHalf { r } => {
                        let lhs =
                            besov::besov_norm(&part, &uv, BesovIndex::new(-0.5, 2.0, r)?)?;
                        let ub = besov::besov_norm(&part, &u, BesovIndex::new(0.5, 2.0, r)?)?;
                        let vb = besov::besov_norm(&part, &v, BesovIndex::new(0.5, 2.0, r)?)?;
                        (lhs, ub * vb)
                    }
                    ProductLaw::PlMinusThreeQuarters { r } => {
                        let lhs =
                            besov::besov_norm(&part, &uv, BesovIndex::new(-0.75, 2.0, r)?)?;
                        let ub = besov::besov_norm(&part, &u, BesovIndex::new(-0.5, 2.0, r)?)?;
                        let vb = besov::besov_norm(&part, &v, BesovIndex::new(1.25, 2.0, r)?)?;
                        (lhs, ub * vb)
                    }
                    ProductLaw::NsBilinear { .. } => unreachable!(),
                }
            }
        };
        if rhs <= 0.0 {
            skipped += 1;
            continue;
        }
        ratios.push(lhs / rhs);
    }
    Ok(summarize(
        law.name().to_string(),
        law.lhs_regularity(),
        law.lhs_p().to_string(),
        law.lhs_r().to_string(),
        ratios,
        skipped,
        grid.n,
    ))
}

/// Audit the commutator estimate:
/// `|| 2^{js} ||[Delta_j, b] a||_{L^2} ||_{l^r}` against
/// `||b||_{B^{2/rho1+3/2}_{2,inf}} ||a||_{B^{s-2/rho1}_{2,r}}
///  + ||b||_{B^{s+3/2+2/rho2}_{2,r}} ||a||_{B^{-2/rho2}_{2,inf}}`.
pub fn audit_commutator(
    grid: Grid,
    s: f64,
    r: Exponent,
    rho1: Exponent,
    rho2: Exponent,
    n_pairs: usize,
    seed: u64,
    band: i64,
) -> Result<RatioStats> {
    if !(s > -1.5 && s <= 1.5) {
        return Err(Error::Parameter(format!(
            "commutator audit requires s in (-3/2, 3/2], got {s}"
        )));
    }
    rho1.validate()?;
    if rho1.value() <= 2.0 {
        return Err(Error::Parameter(format!(
            "commutator audit requires rho1 in (2, inf], got {rho1}"
        )));
    }
    rho2.validate()?;
    r.validate()?;
    let inv_rho1 = if rho1.is_infinite() { 0.0 } else { 1.0 / rho1.value() };
    let inv_rho2 = if rho2.is_infinite() { 0.0 } else { 1.0 / rho2.value() };

    let part = DyadicPartition::for_grid(&grid, 2)?;
    let mut ratios = Vec::with_capacity(n_pairs);
    let mut skipped = 0usize;
    for i in 0..n_pairs {
        let (b, a) = ensemble::scalar_pair(grid, seed, i as u64, band);
        let weighted = part
            .range()
            .map(|j| {
                commutator(&part, j, &b, &a)
                    .map(|c| 2f64.powf(j as f64 * s) * c.l2_norm())
            })
            .collect::<Result<Vec<f64>>>()?;
        let lhs = r.ell_norm(weighted);
        let b1 = besov::besov_norm(
            &part,
            &b,
            BesovIndex::new(2.0 * inv_rho1 + 1.5, 2.0, Exponent::INF)?,
        )?;
        let a1 = besov::besov_norm(&part, &a, BesovIndex::new(s - 2.0 * inv_rho1, 2.0, r)?)?;
        let b2 = besov::besov_norm(
            &part,
            &b,
            BesovIndex::new(s + 1.5 + 2.0 * inv_rho2, 2.0, r)?,
        )?;
        let a2 = besov::besov_norm(
            &part,
            &a,
            BesovIndex::new(-2.0 * inv_rho2, 2.0, Exponent::INF)?,
        )?;
        let rhs = b1 * a1 + b2 * a2;
        if rhs <= 0.0 {
            skipped += 1;
            continue;
        }
        ratios.push(lhs / rhs);
    }
    Ok(summarize(
        "commutator".to_string(),
        s,
        "2".to_string(),
        r.to_string(),
        ratios,
        skipped,
        grid.n,
    ))
}

/// Write audit rows as CSV with a header.
pub fn write_stats_csv(path: &Path, stats: &[RatioStats]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record([
        "law", "s", "p", "r", "n_samples", "n_skipped", "max_ratio", "p95_ratio", "mean_ratio",
        "grid",
    ])
    .map_err(csv_err)?;
    for st in stats {
        w.write_record([
            st.law.clone(),
            format!("{}", st.s),
            st.p.clone(),
            st.r.clone(),
            st.n_samples.to_string(),
            st.n_skipped.to_string(),
            format!("{:e}", st.max_ratio),
            format!("{:e}", st.p95_ratio),
            format!("{:e}", st.mean_ratio),
            st.grid_n.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(format!("csv write failed: {e}"))
}
