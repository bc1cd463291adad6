//! `concmeas <command> --config <path> [--out <dir>]`
//!
//! Exit codes: 0 on success, 1 on a numeric failure, 2 on a configuration
//! error. Diagnostics go to standard error.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use config::RunConfig;
use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Eigenvalues and eigenfunctions.
    Solve,
    /// Rescaled measures against their weak limit.
    Measure,
    /// Zero counts against the zero-distribution limit.
    Zeros,
    /// WKB integrals and remainder envelope.
    Asymptotics,
    /// Freud-weight orthogonal polynomials against the arcsine law.
    Orthopoly,
}

#[derive(Debug, Parser)]
#[command(
    name = "concmeas",
    version,
    about = "Concentration of eigenfunction measures for 1D Schrödinger operators"
)]
struct Cli {
    command: Command,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `experiment.output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| CliError::config("--config", format!("{}: {e}", cli.config.display())))?;
    let cfg = RunConfig::parse(&text)?;
    if let Some(cmd) = &cfg.experiment.command {
        let named = Command::from_str(cmd, true).map_err(|_| {
            CliError::config("experiment.command", format!("unknown command `{cmd}`"))
        })?;
        if named != cli.command {
            return Err(CliError::config(
                "experiment.command",
                format!("`{cmd}` conflicts with the command line"),
            ));
        }
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.experiment.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)?;
    match cli.command {
        Command::Solve => commands::solve(&cfg, &out),
        Command::Measure => commands::measure(&cfg, &out),
        Command::Zeros => commands::zeros(&cfg, &out),
        Command::Asymptotics => commands::asymptotics(&cfg, &out),
        Command::Orthopoly => commands::orthopoly(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("concmeas: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
