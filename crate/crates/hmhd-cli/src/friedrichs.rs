//! The `friedrichs` subcommand: run the spectral-cutoff contraction scheme
//! over a list of cutoff levels and report convergence per level.

use std::path::Path;

use serde::Serialize;

use crate::config::{self, FriedrichsConfig};
use crate::manifest::ManifestBuilder;
use crate::solve::build_force;
use crate::CliError;

#[derive(Serialize)]
struct FriedrichsOutput {
    reports: Vec<hall_mhd::friedrichs::FriedrichsReport>,
    /// Relative stacked `L^2` distance between the largest-cutoff solution
    /// and the Picard solution, when the cross-check is enabled.
    picard_distance: Option<f64>,
}

pub fn run(
    config_path: &Path,
    out_dir: &Path,
    seed_override: Option<u64>,
    builder: &mut ManifestBuilder,
) -> Result<(), CliError> {
    let cfg: FriedrichsConfig = config::load(config_path)?;
    builder.set_config(&cfg);
    if cfg.cutoffs.is_empty() {
        return Err(CliError::Config("cutoffs must be non-empty".into()));
    }
    let grid = cfg.grid.build()?;
    builder.add_grid(&grid);
    let params = cfg.params.build()?;
    let built = build_force(&cfg.force, grid, &params, seed_override)?;

    let mut reports = Vec::new();
    let mut last = None;
    for &n in &cfg.cutoffs {
        let solution = hall_mhd::friedrichs::friedrichs_solve(
            &built.force,
            &params,
            n,
            cfg.max_iters,
            cfg.tol,
            &cfg.report_r,
            cfg.delta,
            seed_override.unwrap_or(cfg.probe_seed),
        )
        .map_err(CliError::from)?;
        reports.push(solution.report.clone());
        last = Some(solution);
    }

    let picard_distance = if cfg.compare_picard {
        let last = last.expect("at least one cutoff");
        let (state, _) = hall_mhd::picard::picard_solve(
            &built.force,
            &params,
            hall_mhd::picard::SolveMode::FixedPoint,
            cfg.max_iters,
            cfg.tol,
        )
        .map_err(CliError::from)?;
        let du = last.u.sub(&state.u).map_err(CliError::from)?.l2_norm();
        let db = last.b.sub(&state.b).map_err(CliError::from)?.l2_norm();
        let scale = (state.u.l2_norm().powi(2) + state.b.l2_norm().powi(2))
            .sqrt()
            .max(f64::MIN_POSITIVE);
        Some((du.powi(2) + db.powi(2)).sqrt() / scale)
    } else {
        None
    };

    let output = FriedrichsOutput {
        reports,
        picard_distance,
    };
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join("friedrichs_report.json");
    let json = serde_json::to_string_pretty(&output)
        .map_err(|e| CliError::Config(format!("cannot serialize report: {e}")))?;
    std::fs::write(&path, json)
        .map_err(|e| CliError::Config(format!("cannot write report: {e}")))?;
    builder.add_output(&path);
    Ok(())
}
