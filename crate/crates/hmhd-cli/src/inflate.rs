//! The `inflate` subcommand: run the norm-inflation sweep over the configured
//! cases and write one CSV row per case.

use std::path::Path;

use illposedness_lab::sweep::{inflation_sweep, write_sweep_csv};
use serde::Serialize;

use crate::config::{self, InflateConfig};
use crate::manifest::ManifestBuilder;
use crate::CliError;

#[derive(Serialize)]
struct CaseDiagnostics {
    n: u32,
    feasible: bool,
    localization: f64,
    divergence_residual: f64,
    picard_residual: f64,
}

pub fn run(
    config_path: &Path,
    out_dir: &Path,
    _seed_override: Option<u64>,
    builder: &mut ManifestBuilder,
) -> Result<(), CliError> {
    let cfg: InflateConfig = config::load(config_path)?;
    builder.set_config(&cfg);
    if cfg.cases.is_empty() {
        return Err(CliError::Config("cases must be non-empty".into()));
    }
    for case in &cfg.cases {
        case.validate().map_err(CliError::config)?;
    }
    if let Some(grid) = cfg
        .cases
        .iter()
        .find_map(|c| c.grid().ok())
    {
        builder.add_grid(&grid);
    }

    let outcomes =
        inflation_sweep(&cfg.cases, cfg.mu, cfg.picard_iters).map_err(CliError::config)?;

    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let rows: Vec<_> = outcomes.iter().map(|o| o.row.clone()).collect();
    let csv_path = out_dir.join("sweep.csv");
    write_sweep_csv(&csv_path, &rows).map_err(CliError::config)?;
    builder.add_output(&csv_path);

    let diags: Vec<CaseDiagnostics> = outcomes
        .iter()
        .map(|o| CaseDiagnostics {
            n: o.row.n,
            feasible: o.row.feasible,
            localization: o.localization,
            divergence_residual: o.divergence_residual,
            picard_residual: o.picard_residual,
        })
        .collect();
    let diag_path = out_dir.join("sweep_diagnostics.json");
    let json = serde_json::to_string_pretty(&diags)
        .map_err(|e| CliError::Config(format!("cannot serialize diagnostics: {e}")))?;
    std::fs::write(&diag_path, json)
        .map_err(|e| CliError::Config(format!("cannot write diagnostics: {e}")))?;
    builder.add_output(&diag_path);

    if outcomes.iter().all(|o| !o.row.feasible) {
        return Err(CliError::Config(
            "every case was infeasible on its grid".into(),
        ));
    }
    Ok(())
}
