use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qqo::QqoError;

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "qqo",
    version,
    about = "Certify quantum quadratic operators on M2(C) and simulate their Bloch-ball dynamics"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    /// ε of the one-parameter family
    #[arg(long, global = true, conflicts_with = "tensor")]
    epsilon: Option<f64>,

    /// JSON tensor file: {"b": [[[..]]]} or {"epsilon": e}
    #[arg(long, global = true)]
    tensor: Option<PathBuf>,

    /// Sample budget for sampled certificates
    #[arg(long, global = true)]
    samples: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Violation threshold for the KS search, or convergence tolerance for simulate
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Maximum number of iterations for simulate
    #[arg(long, global = true, default_value_t = qqo::dynamics::DEFAULT_MAX_STEPS)]
    steps: usize,

    /// Initial Bloch vector f1,f2,f3
    #[arg(long, global = true, allow_hyphen_values = true)]
    init: Option<String>,

    /// Bloch vector f for the KS necessary conditions (default 1,0,0)
    #[arg(long, global = true, allow_hyphen_values = true)]
    state: Option<String>,

    /// Complex w1,w2,w3 for the KS necessary conditions, e.g. -0.1,0.2,0.3i
    #[arg(long, global = true, allow_hyphen_values = true)]
    w: Option<String>,

    /// ε grid for sweep: start,end,count
    #[arg(long, global = true, allow_hyphen_values = true)]
    range: Option<String>,

    /// Write the report (or trajectory CSV for simulate) here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// State preservation, positivity, complete positivity and KS search
    Certify,
    /// KS witness search plus the necessary conditions at (f, w)
    Ks,
    /// Choi matrix and its smallest eigenvalue
    Choi,
    /// Iterate V_ε from --init and write the trajectory
    Simulate,
    /// Fixed points of V_ε in the Bloch ball
    FixedPoints,
    /// Per-ε certificate summary over --range
    Sweep,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub(crate) fn input_error(msg: impl Into<String>) -> QqoError {
    QqoError::InvalidParameter(msg.into())
}
