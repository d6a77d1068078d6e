//! Config-file defaults and flag merging. A run is reproducible from a
//! single JSON artifact: any parameter flag may be supplied by the file
//! given with `--config`, and explicit flags override it.

use std::path::Path;

use serde::Deserialize;

use crate::CliError;

/// Flat bag of optional parameters. One file may carry defaults for
/// several subcommands, so unknown keys are not rejected — each command
/// reads only the fields it understands.
#[derive(Debug, Default, Deserialize)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub z: Option<f64>,
    pub a: Option<f64>,
    pub a_min: Option<f64>,
    pub a_max: Option<f64>,
    pub steps: Option<usize>,
    pub tol: Option<f64>,
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub a_cap: Option<f64>,
    pub table: Option<String>,
    pub threads: Option<usize>,
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config file {}: {e}", path.display())))
}

/// Thread-count precedence: `--threads` flag, then config file, then the
/// `PTLATTICE_THREADS` environment variable, then rayon's default
/// (machine parallelism). The count changes wall time only; output bytes
/// never depend on it.
pub fn init_threads(flag: Option<usize>, file: Option<usize>) -> Result<(), CliError> {
    let k = match flag.or(file) {
        Some(k) => k,
        None => match std::env::var("PTLATTICE_THREADS") {
            Ok(s) => s.parse::<usize>().map_err(|_| {
                CliError::Usage(format!("PTLATTICE_THREADS must be an integer, got {s:?}"))
            })?,
            Err(_) => return Ok(()),
        },
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

/// Flag value, else config-file value, else a usage error naming the flag.
pub fn need<T: Copy>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("missing required parameter --{name}")))
}

/// Flag value, else config-file value, else the documented default.
pub fn pick<T: Copy>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
