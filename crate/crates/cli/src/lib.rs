//! Command-line harness for the `hv` tool: loads problem files, runs
//! experiments from `hv-core` and renders deterministic reports.

pub mod commands;
pub mod error;
pub mod output;
pub mod problem;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;

pub use commands::{run, Command, Overrides};
pub use error::CliError;
pub use output::Format;
pub use report::{Payload, RunReport};

pub const SEED_ENV: &str = "HV_SEED";

#[derive(Debug, Parser)]
#[command(name = "hv", version, about = "Hidden-variable reduction experiments")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Problem file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Seed for sampling; falls back to the experiment's seed, then $HV_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample count for `verify`.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Runs the parsed command line and returns the process exit code.
pub fn main_with(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(passed) => {
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("hv: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let input =
        std::fs::read(&cli.input).map_err(|e| CliError::Input(format!("cannot read {}: {e}", cli.input.display())))?;
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(s) => Some(
            s.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{SEED_ENV} is not an unsigned integer: {s:?}")))?,
        ),
        Err(_) => None,
    };
    let overrides = Overrides {
        seed: cli.seed,
        env_seed,
        samples: cli.samples,
        execution: None,
    };
    let payload = run(cli.command, &input, &overrides)?;
    let report = RunReport {
        payload,
        duration_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let bytes = output::render(&report, cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::Output(e.to_string()))?
        }
    }
    Ok(report.payload.passed)
}
