//! The `solve` subcommand: build the force, run the Picard solver, report
//! norms and diagnostics, and write the solved fields.

use std::path::Path;

use hall_mhd::diagnostics::original_system_residual;
use hall_mhd::manufactured::manufactured_case;
use hall_mhd::{ForceTriple, HallState, PhysicalParams};
use littlewood_paley::besov::{besov_norm_components, BesovIndex};
use littlewood_paley::partition::DyadicPartition;
use serde::Serialize;
use spectral_core::{io, synth, Grid};

use crate::config::{self, ForceConfig, IndexConfig, SolveConfig};
use crate::manifest::ManifestBuilder;
use crate::CliError;

#[derive(Serialize)]
struct SolveOutput {
    report: hall_mhd::SolveReport,
    besov: Vec<hall_mhd::state::BesovReading>,
    momentum_residual: f64,
    induction_residual: f64,
    /// Residual of the derived equation for `v = u - h J`.
    v_residual: f64,
    divergence_residual: f64,
    /// Relative stacked `H^{1/2}` error against the manufactured target,
    /// when one exists.
    recovery_error: Option<f64>,
}

pub struct BuiltForce {
    pub force: ForceTriple,
    pub target: Option<HallState>,
}

pub fn build_force(
    cfg: &ForceConfig,
    grid: Grid,
    params: &PhysicalParams,
    seed_override: Option<u64>,
) -> Result<BuiltForce, CliError> {
    let with_seed = |s: u64| seed_override.unwrap_or(s);
    match cfg {
        ForceConfig::Zero => Ok(BuiltForce {
            force: ForceTriple::zero(grid),
            target: None,
        }),
        ForceConfig::Manufactured {
            seed,
            band,
            amplitude,
        } => {
            let case = manufactured_case(grid, params, with_seed(*seed), *band, *amplitude)
                .map_err(CliError::from)?;
            Ok(BuiltForce {
                force: case.force,
                target: Some(case.target),
            })
        }
        ForceConfig::Random {
            seed,
            band,
            amplitude,
        } => {
            let seed = with_seed(*seed);
            let f = synth::random_vector_field(grid, seed, *band).scale(*amplitude);
            let g = synth::random_divfree_field(grid, seed.wrapping_add(1), *band).scale(*amplitude);
            Ok(BuiltForce {
                force: ForceTriple::from_fg(f, g).map_err(CliError::from)?,
                target: None,
            })
        }
        ForceConfig::Files { f, g } => {
            let f = io::read_vector_field(Path::new(f)).map_err(CliError::from)?;
            let g = io::read_vector_field(Path::new(g)).map_err(CliError::from)?;
            Ok(BuiltForce {
                force: ForceTriple::from_fg(f, g).map_err(CliError::from)?,
                target: None,
            })
        }
    }
}

/// Stacked Besov readings of a state at the requested indices.
pub fn besov_readings(
    state: &HallState,
    indices: &[IndexConfig],
) -> Result<Vec<hall_mhd::state::BesovReading>, CliError> {
    let part = DyadicPartition::for_grid(state.u.grid(), 2).map_err(CliError::from)?;
    let mut out = Vec::new();
    for idx in indices {
        let besov_idx = BesovIndex::new(idx.s, idx.p, idx.r).map_err(CliError::from)?;
        for (name, field) in [("u", &state.u), ("b", &state.b), ("j", &state.j)] {
            let comps = [field.component(0), field.component(1), field.component(2)];
            let value =
                besov_norm_components(&part, &comps, besov_idx).map_err(CliError::from)?;
            out.push(hall_mhd::state::BesovReading {
                field: name.to_string(),
                s: idx.s,
                p: idx.p.to_string(),
                r: idx.r.to_string(),
                value,
            });
        }
    }
    Ok(out)
}

pub fn run(
    config_path: &Path,
    out_dir: &Path,
    seed_override: Option<u64>,
    builder: &mut ManifestBuilder,
) -> Result<(), CliError> {
    let cfg: SolveConfig = config::load(config_path)?;
    builder.set_config(&cfg);
    let grid = cfg.grid.build()?;
    builder.add_grid(&grid);
    let params = cfg.params.build()?;
    let built = build_force(&cfg.force, grid, &params, seed_override)?;

    let (state, report) = hall_mhd::picard::picard_solve(
        &built.force,
        &params,
        cfg.solver.mode.build(),
        cfg.solver.max_m,
        cfg.solver.tol,
    )
    .map_err(CliError::from)?;

    let residuals = original_system_residual(&state.u, &state.b, &built.force, &params)
        .map_err(CliError::from)?;
    let v_report = hall_mhd::diagnostics::v_field_diagnostics(&state, &built.force, &params)
        .map_err(CliError::from)?;
    let recovery_error = match &built.target {
        Some(target) => {
            let diff = state.sub(target).map_err(CliError::from)?;
            let scale = target.sobolev_norm(0.5).max(f64::MIN_POSITIVE);
            Some(diff.sobolev_norm(0.5) / scale)
        }
        None => None,
    };

    let output = SolveOutput {
        besov: besov_readings(&state, &cfg.report.indices)?,
        momentum_residual: residuals.momentum,
        induction_residual: residuals.induction,
        v_residual: v_report.residual,
        divergence_residual: state.divergence_residual(),
        recovery_error,
        report,
    };

    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let report_path = out_dir.join("solve_report.json");
    let json = serde_json::to_string_pretty(&output)
        .map_err(|e| CliError::Config(format!("cannot serialize report: {e}")))?;
    std::fs::write(&report_path, json)
        .map_err(|e| CliError::Config(format!("cannot write report: {e}")))?;
    builder.add_output(&report_path);

    if cfg.write_fields {
        for (name, field) in [("u", &state.u), ("b", &state.b), ("j", &state.j)] {
            let path = out_dir.join(format!("{name}.hmhd"));
            io::write_vector_field(&path, field).map_err(CliError::from)?;
            builder.add_output(&path);
        }
    }
    Ok(())
}
