//! Batch driver: one subcommand per library operation, JSON descriptors in,
//! CSV or JSON artifacts out.
//!
//! Exit codes: 0 success, 1 input error, 2 certificate or tolerance failure.
//! On a failure the artifact is still written, so the margin or residual
//! that failed can be inspected.

pub mod commands;
pub mod descriptor;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use output::Artifact;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Failure(_) => 2,
        }
    }
}

impl From<pdboundary::Error> for CliError {
    fn from(e: pdboundary::Error) -> Self {
        use pdboundary::Error as E;
        match e {
            E::PsdViolation { .. } | E::AdjointViolation { .. } | E::CholeskyFailure { .. } => {
                CliError::Failure(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Gram,
    OrderCheck,
    BoundaryCertify,
    AdjointCheck,
    Frame,
    GpSample,
    ItoCheck,
    DaInduced,
    DaDilation,
    NetworkGreen,
    CantorSpectral,
    CantorIdentity,
    Fit,
    Stationarity,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Gram => "gram",
            Subcommand::OrderCheck => "order-check",
            Subcommand::BoundaryCertify => "boundary-certify",
            Subcommand::AdjointCheck => "adjoint-check",
            Subcommand::Frame => "frame",
            Subcommand::GpSample => "gp-sample",
            Subcommand::ItoCheck => "ito-check",
            Subcommand::DaInduced => "da-induced",
            Subcommand::DaDilation => "da-dilation",
            Subcommand::NetworkGreen => "network-green",
            Subcommand::CantorSpectral => "cantor-spectral",
            Subcommand::CantorIdentity => "cantor-identity",
            Subcommand::Fit => "fit",
            Subcommand::Stationarity => "stationarity",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pdboundary", version, about = "Kernel, RKHS and boundary computations from JSON descriptors")]
pub struct Args {
    #[arg(value_enum)]
    pub subcommand: Subcommand,
    /// Problem descriptor (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Overrides every seed in the descriptor.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    pub tol: f64,
    /// Artifact path; stdout when absent. A `<path>.meta.json` sidecar
    /// records timestamps.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Seed and tolerance overrides shared by all subcommands.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub seed: Option<u64>,
    pub tol_scale: f64,
}

impl Context {
    pub fn seed(&self, descriptor: Option<u64>) -> u64 {
        self.seed.or(descriptor).unwrap_or(0)
    }

    pub fn tol(&self, descriptor: Option<f64>, default: f64) -> f64 {
        descriptor.unwrap_or(default) * self.tol_scale
    }
}

/// Result of one subcommand: the artifact and, for a failed certificate,
/// the reason.
#[derive(Debug)]
pub struct Outcome {
    pub artifact: Artifact,
    pub failure: Option<String>,
}

impl Outcome {
    pub fn ok(artifact: Artifact) -> Self {
        Outcome { artifact, failure: None }
    }

    pub fn check(artifact: Artifact, passed: bool, reason: impl FnOnce() -> String) -> Self {
        Outcome {
            artifact,
            failure: (!passed).then(reason),
        }
    }
}

pub fn run(subcommand: Subcommand, descriptor: &str, ctx: Context) -> Result<Outcome, CliError> {
    if !(ctx.tol_scale.is_finite() && ctx.tol_scale > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", ctx.tol_scale)));
    }
    commands::dispatch(subcommand, descriptor, ctx)
}
