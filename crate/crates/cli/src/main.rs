//! Command-line frontend for the Bartlett-Lewis rainfall model library:
//! statistics extraction, fitting, simulation, validation and extremes as
//! reproducible batch runs over files.

mod commands;
mod config;
mod io;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

use commands::Outcome;
use config::Overrides;

#[derive(Parser)]
#[command(
    name = "blrain",
    version,
    about = "Bartlett-Lewis clustered point-process rainfall modelling",
    after_help = "Exit codes: 0 success, 1 partial (some months failed), 2 input error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute per-month fitting statistics from a gauge record.
    Stats {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Calibrate model parameters to per-month statistics.
    Fit {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Generate synthetic gauge records from fitted parameters.
    Simulate {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compare a fitted model against observed data (moments and wet/dry).
    Validate {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Observed and simulated annual maxima on Gumbel coordinates.
    Extremes {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Profile objective curve and confidence interval for one parameter.
    Profile {
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        args: commands::profile::ProfileArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> anyhow::Result<Outcome> {
        match &cli.command {
            Command::Stats { overrides } => commands::stats::run(&config::resolve(overrides)?),
            Command::Fit { overrides } => commands::fit::run(&config::resolve(overrides)?),
            Command::Simulate { overrides } => {
                commands::simulate::run(&config::resolve(overrides)?)
            }
            Command::Validate { overrides } => {
                commands::validate::run(&config::resolve(overrides)?)
            }
            Command::Extremes { overrides } => {
                commands::extremes::run(&config::resolve(overrides)?)
            }
            Command::Profile { overrides, args } => {
                commands::profile::run(&config::resolve(overrides)?, args)
            }
        }
    };
    match run() {
        Ok(Outcome::Complete) => ExitCode::from(0),
        Ok(Outcome::Partial) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
