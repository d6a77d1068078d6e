//! Command-line front end for the `ptlattice` library: eigenvalue sweeps,
//! exceptional points, spectral-locus classification, metric and charge
//! construction, and reference-table reproduction, exported as CSV or
//! JSON with reproducible metadata.
//!
//! Every parameter flag may instead come from a JSON file passed with
//! `--config`; explicit flags win. Thread count (`--threads`, or the
//! `PTLATTICE_THREADS` environment variable) affects wall time only —
//! identical parameters produce byte-identical output.

// `!(x < y)` guards deliberately reject NaN parameters.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Alpha,
    Exponents,
    Fibonacci,
    All,
}

#[derive(Parser)]
#[command(
    name = "ptlattice",
    version,
    about = "PT-symmetric lattice Hamiltonians: spectra, locus topology, metrics, charge"
)]
pub struct Cli {
    /// JSON file supplying defaults for parameter flags; explicit flags win
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Output format; tabular commands default to csv, all others emit json
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for grid evaluation (default: machine parallelism)
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Eigenvalues over a uniform coupling grid (csv: a,index,re,im,is_real)
    Spectrum {
        /// Matrix dimension (even, ≥ 2)
        #[arg(long)]
        n: Option<usize>,
        /// Site-weight exponent
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        /// Left edge of the coupling grid [default: -1]
        #[arg(long, allow_negative_numbers = true)]
        a_min: Option<f64>,
        /// Right edge of the coupling grid [default: 1]
        #[arg(long, allow_negative_numbers = true)]
        a_max: Option<f64>,
        /// Grid points, at least 2 [default: 201]
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Coupling and energy of the exceptional point closing the all-real
    /// domain
    Alpha {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        /// Bisection tolerance on the coupling [default: 1e-10]
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Intervals of constant real-eigenvalue count over [0, a-cap]
    Reality {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        /// Scan cap on the coupling [default: 2]
        #[arg(long)]
        a_cap: Option<f64>,
    },
    /// Nesting pattern of the real spectral locus at one z
    Classify {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
    },
    /// Pattern-change boundaries in z, with the pattern on each interval
    Zcritical {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        z_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        z_max: Option<f64>,
        /// Bisection tolerance on z [default: 1e-4]
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Detached partial-reality islands beyond the central domain
    Anomalies {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        /// Scan cap on the coupling [default: 2]
        #[arg(long)]
        a_cap: Option<f64>,
    },
    /// Basis of the solution space of the intertwining relation H†Θ = ΘH
    MetricBasis {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        /// Nullspace rank tolerance [default: 1e-10]
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Positivity radius of the canonical metric, plus its linearized
    /// estimate
    Beta {
        #[arg(long)]
        n: Option<usize>,
        /// Site-weight exponent [default: 0]
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        /// Bisection tolerance on the coupling [default: 1e-10]
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Integer secular polynomial of the linearized metric, with its
    /// positive roots
    Secular {
        #[arg(long)]
        n: Option<usize>,
    },
    /// First-order metric correction at a = 0 (purely imaginary integer
    /// entries)
    Linearized {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Charge operator: involutive, commutes with H, and C·parity is a
    /// positive metric
    Charge {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        /// Site-weight exponent [default: 0]
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
    },
    /// Basis of the observables compatible with the canonical metric
    Observables {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
        /// Site-weight exponent [default: 0]
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        /// Nullspace rank tolerance [default: 1e-10]
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Reference tables with deviation columns (csv only)
    Tables {
        /// Which table to emit [default: all]
        #[arg(long, value_enum)]
        table: Option<TableKind>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(ptlattice::Error),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<ptlattice::Error> for CliError {
    fn from(e: ptlattice::Error) -> Self {
        use ptlattice::Error::*;
        match e {
            InvalidDimension(_) | InvalidInput(_) | ContractViolation(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = config::load(cli.config.as_deref())?;
    config::init_threads(cli.threads, file.threads)?;
    let doc = commands::execute(&cli.command, &file, cli.format)?;
    emit::write(&doc, cli.output.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
