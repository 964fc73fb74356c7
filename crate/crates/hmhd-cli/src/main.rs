//! `hmhd`: batch experiment runner for the stationary Hall-MHD toolbox.
//! Subcommands drive the solvers, the dyadic estimate audits, and the
//! norm-inflation sweeps from TOML configs; every run writes machine-readable
//! outputs plus a single manifest.

mod audit;
mod config;
mod friedrichs;
mod inflate;
mod lp_norm;
mod manifest;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use manifest::ManifestBuilder;

#[derive(Debug)]
pub enum CliError {
    /// Configuration or parameter problem: exit code 1.
    Config(String),
    /// Numerical non-convergence: exit code 2.
    Numerical(String),
}

impl CliError {
    pub fn config(e: impl std::fmt::Display) -> CliError {
        CliError::Config(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<hall_mhd::SolveError> for CliError {
    fn from(e: hall_mhd::SolveError) -> CliError {
        match e {
            hall_mhd::SolveError::Diverged { ref message, .. } => {
                CliError::Numerical(format!("iteration diverged: {message}"))
            }
            hall_mhd::SolveError::Precondition(ref m) => {
                CliError::Numerical(format!("contraction precondition violated: {m}"))
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<spectral_core::Error> for CliError {
    fn from(e: spectral_core::Error) -> CliError {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "hmhd",
    version,
    about = "Stationary Hall-MHD solvers, dyadic estimate audits, and norm-inflation sweeps"
)]
struct Cli {
    /// Path to the TOML config for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; receives artifacts and manifest.json.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads (field operations are currently single-threaded; values
    /// above 1 are accepted and recorded).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Override every seed in the config with this value.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the stationary system by Picard iteration (series or
    /// fixed-point mode).
    Solve,
    /// Run the spectral-cutoff contraction scheme over a list of cutoffs.
    Friedrichs,
    /// Run identity, estimate, or cancellation audits.
    Audit,
    /// Run the norm-inflation desk sweep.
    Inflate,
    /// One-shot norm of a stored field file.
    LpNorm(lp_norm::LpNormArgs),
}

fn require_config(cli: &Cli) -> Result<PathBuf, CliError> {
    cli.config
        .clone()
        .ok_or_else(|| CliError::Config("this subcommand requires --config PATH".into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = match cli.command {
        Command::Solve => "solve",
        Command::Friedrichs => "friedrichs",
        Command::Audit => "audit",
        Command::Inflate => "inflate",
        Command::LpNorm(_) => "lp-norm",
    };
    let mut builder = ManifestBuilder::new(name);
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(1);
    }

    let result = match &cli.command {
        Command::Solve => require_config(&cli)
            .and_then(|p| solve::run(&p, &cli.out, cli.seed, &mut builder)),
        Command::Friedrichs => require_config(&cli)
            .and_then(|p| friedrichs::run(&p, &cli.out, cli.seed, &mut builder)),
        Command::Audit => require_config(&cli)
            .and_then(|p| audit::run(&p, &cli.out, cli.seed, &mut builder)),
        Command::Inflate => require_config(&cli)
            .and_then(|p| inflate::run(&p, &cli.out, cli.seed, &mut builder)),
        Command::LpNorm(args) => lp_norm::run(args, &cli.out, &mut builder),
    };

    let (code, error) = match &result {
        Ok(()) => (0, None),
        Err(e) => {
            eprintln!("error: {}", e.message());
            (e.exit_code(), Some(e.message().to_string()))
        }
    };
    if let Err(e) = builder.write(&cli.out, code, error) {
        eprintln!("error: cannot write manifest: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
