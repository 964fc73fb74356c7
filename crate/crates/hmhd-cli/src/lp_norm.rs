//! The `lp-norm` subcommand: one-shot norm of a stored field file. Reads a
//! vector field first, falling back to a scalar field, and prints the value
//! as JSON on stdout.

use std::path::{Path, PathBuf};

use clap::Args;
use littlewood_paley::besov::{besov_norm, besov_norm_vec, BesovIndex};
use littlewood_paley::partition::DyadicPartition;
use serde::Serialize;
use spectral_core::{io, Exponent};

use crate::manifest::ManifestBuilder;
use crate::CliError;

fn parse_exponent(text: &str) -> Result<Exponent, String> {
    if text.eq_ignore_ascii_case("inf") {
        return Ok(Exponent::Infinity);
    }
    text.parse::<f64>()
        .map(Exponent::Finite)
        .map_err(|e| format!("expected a number or \"inf\": {e}"))
}

#[derive(Args)]
pub struct LpNormArgs {
    /// Field file to measure.
    #[arg(long)]
    pub field: PathBuf,

    /// Lebesgue exponent.
    #[arg(long, default_value = "2", value_parser = parse_exponent)]
    pub p: Exponent,

    /// Regularity index; when set, the homogeneous Besov norm with `(s, p, r)`
    /// is computed instead of the plain Lebesgue norm.
    #[arg(long)]
    pub s: Option<f64>,

    /// Summation exponent for the Besov norm.
    #[arg(long, default_value = "2", value_parser = parse_exponent)]
    pub r: Exponent,
}

#[derive(Serialize)]
struct LpNormOutput {
    field: PathBuf,
    kind: &'static str,
    norm: &'static str,
    p: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<String>,
    value: f64,
}

pub fn run(args: &LpNormArgs, out_dir: &Path, builder: &mut ManifestBuilder) -> Result<(), CliError> {
    let (value, kind, grid) = match io::read_vector_field(&args.field) {
        Ok(v) => {
            let grid = *v.grid();
            let value = match args.s {
                Some(s) => {
                    let part = DyadicPartition::for_grid(&grid, 2).map_err(CliError::from)?;
                    let idx = BesovIndex::new(s, args.p, args.r).map_err(CliError::from)?;
                    besov_norm_vec(&part, &v, idx).map_err(CliError::from)?
                }
                None => v.lp_norm(args.p).map_err(CliError::from)?,
            };
            (value, "vector", grid)
        }
        Err(_) => {
            let f = io::read_field(&args.field).map_err(CliError::from)?;
            let grid = *f.grid();
            let value = match args.s {
                Some(s) => {
                    let part = DyadicPartition::for_grid(&grid, 2).map_err(CliError::from)?;
                    let idx = BesovIndex::new(s, args.p, args.r).map_err(CliError::from)?;
                    besov_norm(&part, &f, idx).map_err(CliError::from)?
                }
                None => f.lp_norm(args.p).map_err(CliError::from)?,
            };
            (value, "scalar", grid)
        }
    };
    builder.add_grid(&grid);

    let output = LpNormOutput {
        field: args.field.clone(),
        kind,
        norm: if args.s.is_some() { "besov" } else { "lebesgue" },
        p: args.p.to_string(),
        s: args.s,
        r: args.s.map(|_| args.r.to_string()),
        value,
    };
    let json = serde_json::to_string_pretty(&output)
        .map_err(|e| CliError::Config(format!("cannot serialize output: {e}")))?;
    println!("{json}");
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join("lp_norm.json");
    std::fs::write(&path, json)
        .map_err(|e| CliError::Config(format!("cannot write output: {e}")))?;
    builder.add_output(&path);
    Ok(())
}
