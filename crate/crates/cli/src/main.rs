//! `fephi` command-line front end: momentum spectra, extinction sweeps,
//! Wigner grids, weak-value reports, and regime classification from a
//! JSON run configuration.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Invalid configuration or parameters (exit 2).
    #[error("invalid config: {0}")]
    Config(String),
    /// Numeric-domain failure, e.g. outside the first-order regime (exit 3).
    #[error("numeric domain: {0}")]
    Domain(String),
    /// Filesystem failure (exit 4).
    #[error("i/o: {0}")]
    Io(String),
}

impl From<fephi::Error> for CliError {
    fn from(e: fephi::Error) -> Self {
        match e {
            fephi::Error::NumericDomain(_)
            | fephi::Error::UndefinedWeakValue { .. }
            | fephi::Error::Integration(_)
            | fephi::Error::Internal(_) => CliError::Domain(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "fephi",
    about = "Free electron-photon interaction simulator (reduced units)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; files are overwritten.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Data-file format for column/matrix outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for sweeps and row-parallel transforms.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override grid.points from the config.
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Override grid.span_sigmas from the config.
    #[arg(long, global = true)]
    grid_span_sigmas: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Final momentum distribution with both closed-form limits.
    Spectrum,
    /// Extinction-factor sweep of the interference transfer over Γ.
    SweepGamma,
    /// Wigner function of the outgoing electron, with components and the
    /// interference-suppressed variant.
    Wigner,
    /// Weak value of the drive potential and the pointer shift.
    WeakValue,
    /// Classify the electron/photon sides of the interaction.
    Regimes,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.workers {
        // ignore the error when a pool already exists (repeated in-process runs)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let mut config = RunConfig::load(path)?;
    if let Some(points) = cli.grid_points {
        config.grid.points = points;
    }
    if let Some(span) = cli.grid_span_sigmas {
        config.grid.span_sigmas = span;
    }
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", cli.out.display())))?;

    match cli.command {
        Command::Spectrum => commands::cmd_spectrum(&config, &cli.out, cli.format),
        Command::SweepGamma => commands::cmd_sweep_gamma(&config, &cli.out, cli.format),
        Command::Wigner => commands::cmd_wigner(&config, &cli.out, cli.format),
        Command::WeakValue => commands::cmd_weak_value(&config, &cli.out),
        Command::Regimes => commands::cmd_regimes(&config, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fephi: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
