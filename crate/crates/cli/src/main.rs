//! Command-line front end for the tilted-superlattice transport simulator.
//!
//! Every subcommand reads one JSON run configuration and either prints a
//! report (`predict`) or writes CSV tables and optional SVG charts into an
//! output directory (`spectrum`, `evolve`, `sweep`).

mod commands;
mod config;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

/// Failures split by exit code: configuration and usage problems exit with
/// code 2, runtime computation or I/O failures with code 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Compute(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Compute(msg) => f.write_str(msg),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "wsladder",
    version,
    about = "Quantized adiabatic transport in a tilted superlattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the predicted quantum number, target cell, and target state.
    Predict(RunArgs),
    /// Tabulate the decoupled-limit spectra over the coupling grid.
    Spectrum(RunArgs),
    /// Integrate a single pulse and write the population trajectory.
    Evolve(RunArgs),
    /// Sweep the peak coupling and write the final-cell staircase.
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to a JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory; overrides output.dir from the configuration.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let (args, run): (&RunArgs, fn(&RunConfig, &std::path::Path) -> Result<(), CliError>) =
        match &cli.command {
            Command::Predict(args) => (args, commands::cmd_predict),
            Command::Spectrum(args) => (args, commands::cmd_spectrum),
            Command::Evolve(args) => (args, commands::cmd_evolve),
            Command::Sweep(args) => (args, commands::cmd_sweep),
        };
    let config = RunConfig::load(&args.config)?;
    let out_dir = config.out_dir(args.out.as_deref());
    run(&config, &out_dir)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
