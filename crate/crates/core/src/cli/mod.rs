//! The `hpdns` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad parameters,
//! 3 numeric or truncation failure.

mod commands;
pub mod table;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::params::AlgebraKind;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_PARAMS: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hpdns",
    version,
    about = "su(2) and su(1,1) displaced number states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Photon-number distribution at one point, with the oracle delta per row.
    Dist(DistArgs),
    /// Q' and Mandel Q over a magnitude grid, plus the analytic roots.
    Qscan(ScanArgs),
    /// Quadrature variances over a magnitude x phase grid.
    SqueezeScan(ScanArgs),
    /// Eigenvalue residuals of the Hamiltonian over a grid.
    Eigencheck(ScanArgs),
    /// Closed-form coefficients against the matrix exponential.
    OracleVerify(VerifyArgs),
    /// Distance to the ordinary displaced number state as M grows.
    Limits(LimitArgs),
}

/// `start:stop:count`, evenly spaced and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub const fn new(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got '{s}'"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad grid bound '{t}': {e}"))
        };
        let (start, stop) = (num(start)?, num(stop)?);
        let count: usize = count
            .trim()
            .parse()
            .map_err(|e| format!("bad grid count '{count}': {e}"))?;
        if !(start.is_finite() && stop.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if count < 1 {
            return Err("grid count must be at least 1".into());
        }
        if start > stop {
            return Err(format!("grid start {start} exceeds stop {stop}"));
        }
        Ok(Grid { start, stop, count })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceProfile {
    #[default]
    Default,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    pub profile: ToleranceProfile,
    pub su2_coefficient: f64,
    pub su11_coefficient: f64,
    pub su11_tail: f64,
    pub su2_residual: f64,
    pub su11_residual: f64,
}

impl ToleranceProfile {
    pub fn tolerances(self) -> Tolerances {
        let scale = match self {
            ToleranceProfile::Default => 1.0,
            ToleranceProfile::Strict => 1e-2,
        };
        Tolerances {
            profile: self,
            su2_coefficient: 1e-9 * scale,
            su11_coefficient: 1e-8 * scale,
            su11_tail: crate::oracle::TAIL_TARGET,
            su2_residual: 1e-9 * scale,
            su11_residual: 1e-8 * scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ExponentArg {
    #[default]
    Corrected,
    /// `2(M + n)`: deliberately wrong, for checking that verification catches it.
    Printed,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "tolerance-profile", value_enum, default_value_t)]
    pub tolerance_profile: ToleranceProfile,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistArgs {
    #[arg(long, value_enum)]
    pub algebra: AlgebraArg,
    #[arg(long = "M")]
    pub label: u32,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// `r` for su(2), `R` for su(1,1).
    #[arg(
        long = "r",
        visible_alias = "R",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub magnitude: f64,
    /// `theta` for su(2), `vartheta` for su(1,1).
    #[arg(
        long = "theta",
        visible_alias = "vartheta",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub phase: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub algebra: AlgebraArg,
    #[arg(long = "M")]
    pub label: u32,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// Magnitude grid `start:stop:count` in `r` or `R`.
    #[arg(long)]
    pub grid: Option<Grid>,
    /// Phase grid `start:stop:count`.
    #[arg(long = "phase-grid")]
    pub phase_grid: Option<Grid>,
    /// A single phase; overrides `--phase-grid`.
    #[arg(
        long = "theta",
        visible_alias = "vartheta",
        allow_negative_numbers = true
    )]
    pub phase: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Both algebras when omitted.
    #[arg(long, value_enum)]
    pub algebra: Option<AlgebraArg>,
    /// Restrict to one label.
    #[arg(long = "M")]
    pub label: Option<u32>,
    /// Restrict to one seed.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub grid: Option<Grid>,
    #[arg(long = "phase-grid")]
    pub phase_grid: Option<Grid>,
    #[arg(
        long = "theta",
        visible_alias = "vartheta",
        allow_negative_numbers = true
    )]
    pub phase: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub exponent: ExponentArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LimitArgs {
    #[arg(long, value_enum)]
    pub algebra: AlgebraArg,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// Displacement amplitude of the limiting state.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(
        long = "theta",
        visible_alias = "vartheta",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub phase: f64,
    /// Comma-separated labels.
    #[arg(long = "M", value_delimiter = ',', default_values_t = [100u32, 200, 400])]
    pub labels: Vec<u32>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraArg {
    Su2,
    Su11,
}

impl From<AlgebraArg> for AlgebraKind {
    fn from(a: AlgebraArg) -> Self {
        match a {
            AlgebraArg::Su2 => AlgebraKind::Su2,
            AlgebraArg::Su11 => AlgebraKind::Su11,
        }
    }
}

/// A failure that ends the run with a specific exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TruncationInsufficient { .. } | Error::PrecisionLoss { .. } => EXIT_NUMERIC,
            _ => EXIT_PARAMS,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_PARAMS,
            message: format!("cannot write output: {e}"),
        }
    }
}

/// Exit code for an error kept inside a scan row.
pub fn exit_code_for(e: &Error) -> u8 {
    Failure::from(e.clone()).code
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Dist(a) => commands::dist(&a),
        Command::Qscan(a) => commands::qscan(&a),
        Command::SqueezeScan(a) => commands::squeeze_scan(&a),
        Command::Eigencheck(a) => commands::eigencheck(&a),
        Command::OracleVerify(a) => commands::oracle_verify(&a),
        Command::Limits(a) => commands::limits(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
