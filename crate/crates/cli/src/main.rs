//! `frontier-dyn`: generate panels, score DMUs, grade them and report what
//! each DMU would need to change to move up a grade.
//!
//! Exit codes: 0 success, 1 solver or internal anomaly, 2 bad user input.

mod cluster;
mod evaluate;
mod generate;
mod report;
mod sensitivity;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use report::Format;

/// Seed used when neither `--seed` nor `FRONTIER_DYN_SEED` is set.
pub const DEFAULT_SEED: u64 = 1;
pub const SEED_ENV: &str = "FRONTIER_DYN_SEED";

#[derive(Parser)]
#[command(
    name = "frontier-dyn",
    version,
    about = "Dynamic SBM efficiency pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a synthetic panel from a generator spec
    Generate(generate::GenerateArgs),
    /// Score every DMU and write the ranking
    Evaluate(evaluate::EvaluateArgs),
    /// Cluster ranking scores and assign grades
    Cluster(cluster::ClusterArgs),
    /// Per-branch changes needed to reach the next grade
    Sensitivity(sensitivity::SensitivityArgs),
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone, Serialize)]
pub struct CommonArgs {
    /// Output directory (created if missing)
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Run seed; falls back to FRONTIER_DYN_SEED, then 1
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl CommonArgs {
    pub fn resolved_seed(&self) -> Result<u64, Failure> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                Failure::User(anyhow::anyhow!(
                    "{SEED_ENV}=`{v}` is not an unsigned integer"
                ))
            }),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, files or data: exit 2.
    User(anyhow::Error),
    /// Solver anomaly or failed self-check: exit 1.
    Internal(anyhow::Error),
}

impl Failure {
    pub fn user(e: impl Into<anyhow::Error>) -> Self {
        Failure::User(e.into())
    }

    pub fn internal(e: impl Into<anyhow::Error>) -> Self {
        Failure::Internal(e.into())
    }
}

fn init_threads(jobs: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Failure::user(anyhow::anyhow!("--jobs must be at least 1")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(Failure::internal)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate(a) => {
            init_threads(a.common.jobs)?;
            generate::run(&a)
        }
        Command::Evaluate(a) => {
            init_threads(a.common.jobs)?;
            evaluate::run(&a)
        }
        Command::Cluster(a) => {
            init_threads(a.common.jobs)?;
            cluster::run(&a)
        }
        Command::Sensitivity(a) => {
            init_threads(a.common.jobs)?;
            sensitivity::run(&a)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(1)
        }
    }
}
