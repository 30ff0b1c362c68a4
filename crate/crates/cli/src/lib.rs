//! Command-line front end: reproduces the figure data as CSV and runs the
//! verification suites.

pub mod commands;
pub mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical contract violation: {0}")]
    Numerical(String),
    #[error("verification failed")]
    VerifyFailed,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::VerifyFailed => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "iswcs",
    version,
    about = "Coherent states of the infinite square well"
)]
pub struct Cli {
    /// TOML configuration file (dotted keys such as `state.n0 = 500`).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file, or `-` for standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Snapshot time for `density` and `wavefunction`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Comma-separated z0 values for `equivalence`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub z0: Option<Vec<f64>>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// ⟨x⟩, ⟨p⟩, Δx, Δp and Δx·Δp over the time grid.
    Observables,
    /// Exact density against the Gaussian approximation and its Fourier parts.
    Density,
    /// Exact wavefunction, with the phase-aligned Gaussian for GCS states.
    Wavefunction,
    /// GeCS/GCS equivalence sweep over z0.
    Equivalence,
    /// Runs the invariant suites.
    Verify,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(t) = cli.t {
        config.t = t;
    }
    if let Some(out) = &cli.out {
        config.output.path = out.clone();
    }
    let resolved = config.resolve()?;

    let work = || -> Result<(String, bool), CliError> {
        match cli.command {
            Command::Observables => commands::observables_csv(&resolved).map(|s| (s, true)),
            Command::Density => commands::density_csv(&resolved, resolved.t).map(|s| (s, true)),
            Command::Wavefunction => {
                commands::wavefunction_csv(&resolved, resolved.t).map(|s| (s, true))
            }
            Command::Equivalence => {
                let z0s = cli
                    .z0
                    .clone()
                    .unwrap_or_else(|| commands::DEFAULT_Z0.to_vec());
                commands::equivalence_csv(&z0s).map(|s| (s, true))
            }
            Command::Verify => commands::verify(&resolved),
        }
    };
    let (text, ok) = match cli.threads {
        Some(0) => return Err(CliError::Config("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };

    if resolved.output == "-" {
        match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        }
    } else {
        std::fs::write(&resolved.output, text)?;
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}
