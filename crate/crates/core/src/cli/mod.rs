//! Command-line front end: argument parsing, file formats and reports.

mod commands;
mod spec;

pub use commands::{
    cmd_dulac, cmd_eval, cmd_normalize, cmd_resonances, cmd_validate, parse_grid, NormalizeReport,
    ResonanceReport, TermRef,
};
pub use spec::{parse_point, term_specs, Eigenvalues, SpecError, TermSpec, VectorFieldSpec};

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::dulac::DulacError;
use crate::normalform::NormalFormError;
use crate::oracle::OracleError;
use crate::resonance::ResonanceError;
use crate::ring::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Resonance(#[from] ResonanceError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Dulac(#[from] DulacError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("bad series file: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "dulac",
    version,
    about = "Normal forms and Dulac-map asymptotics for saddle-type manifolds of equilibria"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List resonant monomials for the eigenvalues (1, -alpha, -beta)
    Resonances(ResonancesArgs),
    /// Compute the normal form of a vector-field file
    Normalize(NormalizeArgs),
    /// Asymptotic Dulac series of a normal form
    Dulac(DulacArgs),
    /// Numerical checks: convergence order of the series, or conjugacy of the normal form
    Validate(ValidateArgs),
    /// Evaluate a saved Dulac series at a point
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
pub struct ResonancesArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, default_value_t = 6)]
    pub max_degree: u32,
    /// write the listing as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// normalize through this degree (default: the file's degree)
    #[arg(long)]
    pub degree: Option<u32>,
    /// override the file's jet order in the centre variables
    #[arg(long)]
    pub jet_order: Option<u32>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DulacArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    /// base point on the centre manifold, e.g. "0,1/2"
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub u0: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// x0 grid: "lo:hi:n" (log-spaced) or a comma-separated list
    #[arg(long, default_value = "1e-4:1e-2:8")]
    pub grid: String,
    /// Taylor integrator tolerance (double-double arithmetic)
    #[arg(long, default_value_t = 1e-30)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    #[arg(long, default_value = "y")]
    pub component: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub z0: f64,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub u0: String,
    /// allowed deviation of the measured slope
    #[arg(long)]
    pub slope_tol: Option<f64>,
    /// check the normalizing transformation instead (grid = amplitudes)
    #[arg(long)]
    pub conjugacy: bool,
    /// normalization degree for --conjugacy (default: the file's degree)
    #[arg(long)]
    pub degree: Option<u32>,
    /// flow time for --conjugacy
    #[arg(long, default_value_t = 0.5)]
    pub time: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// write (log x, log error) samples as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// DulacSeries JSON written by `dulac dulac --output`
    #[arg(long)]
    pub series: PathBuf,
    #[arg(long)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub z0: f64,
    /// alpha(u0) - alpha(0); defaults to the value stored in the series
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// also integrate this vector field and print the difference
    #[arg(long)]
    pub compare: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

pub(crate) fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn write(path: &PathBuf, s: &str) -> Result<(), CliError> {
    std::fs::write(path, s).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Run a parsed command; `Ok(true)` when every requested check passed.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    match &cli.command {
        Command::Resonances(a) => cmd_resonances(a, out).map(|_| true),
        Command::Normalize(a) => cmd_normalize(a, out).map(|_| true),
        Command::Dulac(a) => cmd_dulac(a, out).map(|_| true),
        Command::Validate(a) => cmd_validate(a, out).map(|r| r.all_pass()),
        Command::Eval(a) => cmd_eval(a, out).map(|_| true),
    }
}
