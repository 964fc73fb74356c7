//! TOML config schemas for the subcommands. Every config carries an explicit
//! `schema_version` and every stochastic input an explicit seed, so reruns
//! from a manifest reproduce the same values.

use serde::{Deserialize, Serialize};
use spectral_core::{DealiasRule, Exponent, Grid};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(default)]
    pub dealias: DealiasChoice,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DealiasChoice {
    #[default]
    TwoThirds,
    ZeroPad,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid, CliError> {
        let rule = match self.dealias {
            DealiasChoice::TwoThirds => DealiasRule::TwoThirds,
            DealiasChoice::ZeroPad => DealiasRule::ZeroPad3Halves,
        };
        Grid::new(self.n, self.l, rule).map_err(CliError::config)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ParamsConfig {
    pub mu: f64,
    pub nu: f64,
    pub hall: f64,
}

impl ParamsConfig {
    pub fn build(&self) -> Result<hall_mhd::PhysicalParams, CliError> {
        hall_mhd::PhysicalParams::new(self.mu, self.nu, self.hall).map_err(CliError::config)
    }
}

/// How the force data is produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForceConfig {
    /// All three slots zero.
    Zero,
    /// Force manufactured from a random band-limited divergence-free target;
    /// the exact solution is known, so the report carries a recovery error.
    Manufactured { seed: u64, band: i64, amplitude: f64 },
    /// Random band-limited `(f, g)` with `g` divergence-free and the third
    /// slot derived as `curl g`.
    Random { seed: u64, band: i64, amplitude: f64 },
    /// Read `f` and `g` from field files; the third slot is derived.
    Files { f: String, g: String },
}

/// One Besov index request `(s, p, r)`; `p` and `r` accept numbers or "inf".
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IndexConfig {
    pub s: f64,
    pub p: Exponent,
    pub r: Exponent,
}

fn default_report_indices() -> Vec<IndexConfig> {
    // The well-posedness settings: p in {3/2, 2} with r in {1, 2}, and the
    // uniqueness-scale p = 2 with r in {1, 2, inf}, all at critical s.
    let mut v = Vec::new();
    for p in [1.5, 2.0] {
        for r in [1.0, 2.0] {
            v.push(IndexConfig {
                s: 3.0 / p - 1.0,
                p: Exponent::Finite(p),
                r: Exponent::Finite(r),
            });
        }
    }
    v.push(IndexConfig {
        s: 0.5,
        p: Exponent::Finite(2.0),
        r: Exponent::Infinity,
    });
    v
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub mode: SolveModeChoice,
    pub tol: f64,
    pub max_m: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveModeChoice {
    Series,
    FixedPoint,
}

impl SolveModeChoice {
    pub fn build(self) -> hall_mhd::picard::SolveMode {
        match self {
            SolveModeChoice::Series => hall_mhd::picard::SolveMode::Series,
            SolveModeChoice::FixedPoint => hall_mhd::picard::SolveMode::FixedPoint,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportConfig {
    #[serde(default = "default_report_indices")]
    pub indices: Vec<IndexConfig>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            indices: default_report_indices(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub grid: GridConfig,
    pub params: ParamsConfig,
    pub solver: SolverConfig,
    pub force: ForceConfig,
    #[serde(default)]
    pub report: ReportConfig,
    /// Write the solved fields as binaries (default true).
    #[serde(default = "default_true")]
    pub write_fields: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FriedrichsConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub grid: GridConfig,
    pub params: ParamsConfig,
    pub force: ForceConfig,
    pub cutoffs: Vec<u32>,
    pub max_iters: usize,
    pub tol: f64,
    /// Calibrated smallness threshold; reports check readings against
    /// `2 delta`.
    pub delta: Option<f64>,
    pub report_r: Vec<Exponent>,
    pub probe_seed: u64,
    /// Cross-check against the Picard solution at the largest cutoff.
    #[serde(default)]
    pub compare_picard: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditKind {
    /// Exact operator identities over random seeds.
    Identity,
    /// Product-law and commutator estimate ratio statistics.
    Laws,
    /// The two energy cancellation pairings.
    Cancellation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub kinds: Vec<AuditKind>,
    /// Grid sizes to run at (shared box scale).
    pub grids: Vec<usize>,
    #[serde(rename = "L")]
    pub l: f64,
    pub seeds: u64,
    pub band: i64,
    /// Ensemble size for the estimate audits.
    pub n_pairs: usize,
    pub hall: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InflateConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub mu: f64,
    pub picard_iters: usize,
    pub cases: Vec<illposedness_lab::InflationConfig>,
}

pub fn load<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg: T = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))?;
    Ok(cfg)
}
