//! `oscint`: step, solve and study ODEs with rapidly oscillating forcing.
//!
//! Every command writes CSV with a header row. Exit codes: 0 on success, 1
//! when a requested bound check fails, 2 on configuration errors and 3 on
//! numerical failures.

mod commands;
mod config;
mod output;
mod problem;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{ConfigError, RunArgs};

#[derive(Debug, Parser)]
#[command(name = "oscint", version, about = "Macroscale time stepping for rapidly oscillating ODEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One macro step from (t0, u0)
    Step(RunArgs),
    /// Repeated macro steps from t0 to tend
    Solve(RunArgs),
    /// One-step errors over several step sizes and the fitted log-log slope
    Converge(RunArgs),
    /// Closed-form and enumerated word counts
    Termcount(RunArgs),
    /// Actual one-step remainders against the first and second remainder bounds
    Bounds(RunArgs),
    /// Whether a truncation reproduces the Euler or Milstein word set
    StochasticCheck(RunArgs),
}

fn run(command: Command) -> anyhow::Result<bool> {
    let (args, handler): (RunArgs, fn(&RunArgs) -> anyhow::Result<commands::Report>) = match command {
        Command::Step(a) => (a, commands::step),
        Command::Solve(a) => (a, commands::solve),
        Command::Converge(a) => (a, commands::converge),
        Command::Termcount(a) => (a, commands::termcount),
        Command::Bounds(a) => (a, commands::bounds),
        Command::StochasticCheck(a) => (a, commands::stochastic_check),
    };
    let args = args.resolve()?;
    let report = handler(&args)?;
    report.table.emit(args.out.as_deref())?;
    Ok(report.satisfied)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: a bound check failed");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<ConfigError>().is_some() || err.downcast_ref::<std::io::Error>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
