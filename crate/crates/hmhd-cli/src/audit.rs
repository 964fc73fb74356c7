//! The `audit` subcommand: exact-identity checks over random ensembles, the
//! dyadic estimate ratio statistics, and the energy cancellation pairings.

use std::path::Path;

use littlewood_paley::audit::{audit_commutator, audit_product_law, write_stats_csv, ProductLaw, RatioStats};
use littlewood_paley::bony::bony_residual;
use littlewood_paley::ensemble;
use littlewood_paley::partition::DyadicPartition;
use serde::Serialize;
use spectral_core::{ops, synth, Exponent, Grid};

use crate::config::{self, AuditConfig, AuditKind};
use crate::manifest::ManifestBuilder;
use crate::CliError;

const IDENTITY_TOL: f64 = 1e-10;

#[derive(Serialize)]
struct IdentityRow {
    check: &'static str,
    #[serde(rename = "grid_N")]
    grid_n: usize,
    seed: u64,
    value: f64,
}

#[derive(Serialize)]
struct CancellationRow {
    #[serde(rename = "grid_N")]
    grid_n: usize,
    seed: u64,
    hall_curl_route: f64,
    hall_pointwise_route: f64,
    quasilinear_pairing: f64,
}

#[derive(Serialize, Default)]
struct AuditSummary {
    identity_rows: usize,
    identity_worst: Option<f64>,
    identity_pass: Option<bool>,
    law_stats: Vec<RatioStats>,
    cancellation_rows: usize,
    cancellation_worst: Option<f64>,
}

fn identity_rows(grid: Grid, seed: u64, band: i64) -> Result<Vec<IdentityRow>, CliError> {
    let part = DyadicPartition::for_grid(&grid, 2).map_err(CliError::from)?;
    let n = grid.n;
    let mut rows = Vec::new();
    let mut push = |check, value| rows.push(IdentityRow { check, grid_n: n, seed, value });

    let (a, b) = ensemble::scalar_pair(grid, seed, 0, band);
    push("bony_identity", bony_residual(&part, &a, &b).map_err(CliError::from)?);

    // The dyadic blocks must reassemble a mean-free band-limited field.
    let mut sum: Option<spectral_core::SpectralField> = None;
    for j in part.range() {
        let blk = part.block(&a, j);
        sum = Some(match sum {
            None => blk,
            Some(s) => s.add(&blk).map_err(CliError::from)?,
        });
    }
    let resid = sum
        .expect("non-empty partition")
        .sub(&a)
        .map_err(CliError::from)?
        .l2_norm()
        / a.l2_norm().max(f64::MIN_POSITIVE);
    push("partition_reconstruction", resid);

    let v = synth::random_vector_field(grid, seed.wrapping_add(7), band);
    push("div_of_curl", ops::curl(&v).divergence_residual());
    let projected = spectral_core::project::leray_project(&v);
    push("leray_divergence_free", projected.divergence_residual());
    let twice = spectral_core::project::leray_project(&projected);
    push(
        "leray_idempotent",
        twice.sub(&projected).map_err(CliError::from)?.l2_norm()
            / projected.l2_norm().max(f64::MIN_POSITIVE),
    );

    let j_field = synth::random_divfree_field(grid, seed.wrapping_add(11), band);
    let recovered = ops::curl(&spectral_core::project::biot_savart(&j_field));
    let resid = recovered.sub(&j_field).map_err(CliError::from)?.l2_norm()
        / j_field.l2_norm().max(f64::MIN_POSITIVE);
    push("curl_of_biot_savart", resid);

    Ok(rows)
}

fn law_suite() -> Vec<LawRequest> {
    vec![
        LawRequest::Product(ProductLaw::Pl2 { p: 1.5, r: Exponent::Finite(1.0) }),
        LawRequest::Product(ProductLaw::Pl2 { p: 2.0, r: Exponent::Finite(1.0) }),
        LawRequest::Product(ProductLaw::Pl1 {
            p: 1.5,
            r1: Exponent::Finite(1.0),
            r2: Exponent::Infinity,
        }),
        LawRequest::Product(ProductLaw::PlMinusHalf { r: Exponent::Finite(2.0) }),
        LawRequest::Product(ProductLaw::PlMinusThreeQuarters { r: Exponent::Finite(2.0) }),
        LawRequest::Product(ProductLaw::NsBilinear { r: Exponent::Finite(2.0), mu: 1.0 }),
        LawRequest::Commutator { s: -0.5, r: Exponent::Finite(2.0), rho1: Exponent::Infinity, rho2: Exponent::Finite(4.0) },
        LawRequest::Commutator { s: -1.0, r: Exponent::Finite(2.0), rho1: Exponent::Infinity, rho2: Exponent::Finite(2.0) },
    ]
}

enum LawRequest {
    Product(ProductLaw),
    Commutator { s: f64, r: Exponent, rho1: Exponent, rho2: Exponent },
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Config(format!("cannot write audit row: {e}")))?;
    }
    writer
        .flush()
        .map_err(|e| CliError::Config(format!("cannot flush {}: {e}", path.display())))?;
    Ok(())
}

pub fn run(
    config_path: &Path,
    out_dir: &Path,
    seed_override: Option<u64>,
    builder: &mut ManifestBuilder,
) -> Result<(), CliError> {
    let cfg: AuditConfig = config::load(config_path)?;
    builder.set_config(&cfg);
    if cfg.kinds.is_empty() {
        return Err(CliError::Config("kinds must be non-empty".into()));
    }
    if cfg.grids.is_empty() {
        return Err(CliError::Config("grids must be non-empty".into()));
    }
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;

    let grids: Vec<Grid> = cfg
        .grids
        .iter()
        .map(|&n| Grid::new(n, cfg.l, spectral_core::DealiasRule::TwoThirds).map_err(CliError::config))
        .collect::<Result<_, _>>()?;
    for grid in &grids {
        builder.add_grid(grid);
    }
    let base_seed = seed_override.unwrap_or(0);
    let mut summary = AuditSummary::default();
    let mut identity_failure = None;

    for kind in &cfg.kinds {
        match kind {
            AuditKind::Identity => {
                let mut rows = Vec::new();
                for grid in &grids {
                    for s in 0..cfg.seeds {
                        rows.extend(identity_rows(*grid, base_seed + s, cfg.band)?);
                    }
                }
                let worst = rows.iter().map(|r| r.value).fold(0.0, f64::max);
                summary.identity_rows = rows.len();
                summary.identity_worst = Some(worst);
                summary.identity_pass = Some(worst <= IDENTITY_TOL);
                let path = out_dir.join("identity.csv");
                write_csv(&path, &rows)?;
                builder.add_output(&path);
                if worst > IDENTITY_TOL {
                    identity_failure = Some(format!(
                        "identity check failed: worst residual {worst:e} exceeds {IDENTITY_TOL:e}"
                    ));
                }
            }
            AuditKind::Laws => {
                let mut stats = Vec::new();
                for grid in &grids {
                    for law in law_suite() {
                        let stat = match law {
                            LawRequest::Product(law) => {
                                audit_product_law(*grid, law, cfg.n_pairs, base_seed, cfg.band)
                            }
                            LawRequest::Commutator { s, r, rho1, rho2 } => audit_commutator(
                                *grid, s, r, rho1, rho2, cfg.n_pairs, base_seed, cfg.band,
                            ),
                        }
                        .map_err(CliError::from)?;
                        stats.push(stat);
                    }
                }
                let path = out_dir.join("laws.csv");
                write_stats_csv(&path, &stats).map_err(CliError::from)?;
                builder.add_output(&path);
                summary.law_stats = stats;
            }
            AuditKind::Cancellation => {
                let params = hall_mhd::PhysicalParams::new(1.0, 1.0, cfg.hall)
                    .map_err(CliError::config)?;
                let mut rows = Vec::new();
                for grid in &grids {
                    for s in 0..cfg.seeds {
                        let seed = base_seed + s;
                        let u = synth::random_divfree_field(*grid, seed, cfg.band);
                        let b = synth::random_divfree_field(*grid, seed.wrapping_add(101), cfg.band);
                        let j = ops::curl(&b);
                        let state = hall_mhd::HallState { u, b, j };
                        let report = hall_mhd::diagnostics::cancellation_check(&state, &params)
                            .map_err(CliError::from)?;
                        rows.push(CancellationRow {
                            grid_n: grid.n,
                            seed,
                            hall_curl_route: report.hall_curl_route,
                            hall_pointwise_route: report.hall_pointwise_route,
                            quasilinear_pairing: report.quasilinear_pairing,
                        });
                    }
                }
                summary.cancellation_rows = rows.len();
                summary.cancellation_worst = rows
                    .iter()
                    .map(|r| {
                        r.hall_curl_route
                            .max(r.hall_pointwise_route)
                            .max(r.quasilinear_pairing)
                    })
                    .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
                let path = out_dir.join("cancellation.csv");
                write_csv(&path, &rows)?;
                builder.add_output(&path);
            }
        }
    }

    let path = out_dir.join("audit_summary.json");
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Config(format!("cannot serialize summary: {e}")))?;
    std::fs::write(&path, json)
        .map_err(|e| CliError::Config(format!("cannot write summary: {e}")))?;
    builder.add_output(&path);

    match identity_failure {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}
