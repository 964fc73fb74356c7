//! Run manifests: every invocation writes exactly one `manifest.json` into
//! the output directory, recording the resolved config, the code version,
//! runtime statistics, and every artifact the run produced.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct GridDescriptor {
    pub n: usize,
    pub box_scale: f64,
    pub dealias: String,
}

impl From<&spectral_core::Grid> for GridDescriptor {
    fn from(grid: &spectral_core::Grid) -> GridDescriptor {
        GridDescriptor {
            n: grid.n,
            box_scale: grid.box_scale,
            dealias: format!("{:?}", grid.dealias),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub config: serde_json::Value,
    pub grids: Vec<GridDescriptor>,
    pub wall_clock_seconds: f64,
    pub peak_memory_kb: Option<u64>,
    pub outputs: Vec<PathBuf>,
    pub exit_code: i32,
    pub error: Option<String>,
}

/// Collects manifest data over the lifetime of a run.
pub struct ManifestBuilder {
    subcommand: String,
    config: serde_json::Value,
    grids: Vec<GridDescriptor>,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(subcommand: &str) -> ManifestBuilder {
        ManifestBuilder {
            subcommand: subcommand.to_string(),
            config: serde_json::Value::Null,
            grids: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    /// Record the fully resolved config (after flag overrides).
    pub fn set_config<T: Serialize>(&mut self, config: &T) {
        self.config = serde_json::to_value(config).unwrap_or(serde_json::Value::Null);
    }

    pub fn add_grid(&mut self, grid: &spectral_core::Grid) {
        self.grids.push(grid.into());
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Finalize and write `manifest.json` into `out_dir`.
    pub fn write(self, out_dir: &Path, exit_code: i32, error: Option<String>) -> std::io::Result<PathBuf> {
        let manifest = RunManifest {
            subcommand: self.subcommand,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.config,
            grids: self.grids,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            peak_memory_kb: peak_memory_kb(),
            outputs: self.outputs,
            exit_code,
            error,
        };
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&manifest)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        std::fs::write(&path, json)?;
        Ok(path)
    }
}

/// Peak resident set size of this process, from `/proc/self/status` (VmHWM).
pub fn peak_memory_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}
