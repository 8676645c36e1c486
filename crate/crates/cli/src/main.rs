//! `contraction-models`: analyze finite-dimensional contractions, check the
//! boundary and model identities, and synthesize operators from marked
//! discs.
//!
//! Exit codes: 0 success, 2 invalid input or arguments, 3 not a contraction
//! (or not c.n.u. for `verify`), 4 a check failed, 5 the Gram rank did not
//! stabilize.

mod commands;
mod io;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use contraction_models::disc::GridConfig;

use commands::{Failure, MarkChoice, Outcome, Settings};

#[derive(Parser)]
#[command(name = "contraction-models", version, about = "Functional models of finite-dimensional contractions")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Residual threshold for every check.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Ring radii of the sample grid, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = vec![0.3, 0.6])]
    grid_radii: Vec<f64>,
    /// Points per ring.
    #[arg(long, global = true, default_value_t = 8)]
    grid_angles: usize,
    /// Largest allowed grid radius.
    #[arg(long, global = true, default_value_t = 0.85)]
    rmax: f64,
    /// Seed for grid jitter and random test vectors.
    #[arg(long, global = true, env = "CONTRACTION_MODELS_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Defect spaces, indices, frames, and samples of Θ and B.
    Analyze { path: PathBuf },
    /// Run the verification checks on a c.n.u. contraction.
    Verify {
        path: PathBuf,
        /// `canonical`, or a JSON file holding the mark matrix.
        #[arg(long, default_value = "canonical")]
        mark: String,
    },
    /// Build the model operator of a marked disc and write it to `out`.
    Synthesize {
        disc: PathBuf,
        out: PathBuf,
        /// Compare the result with this operator file.
        #[arg(long)]
        roundtrip: Option<PathBuf>,
    },
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let c = &cli.common;
    if c.tol.is_nan() || c.tol <= 0.0 {
        return Err(Failure::Input(anyhow::anyhow!("--tol must be positive")));
    }
    let settings = Settings {
        tol: c.tol,
        grid: GridConfig { radii: c.grid_radii.clone(), angles: c.grid_angles, r_max: c.rmax, seed: c.seed, ..GridConfig::default() },
    };
    match &cli.command {
        Command::Analyze { path } => commands::analyze(path, &settings),
        Command::Verify { path, mark } => {
            let choice = if mark == "canonical" { MarkChoice::Canonical } else { MarkChoice::File(mark.as_ref()) };
            commands::verify(path, choice, &settings)
        }
        Command::Synthesize { disc, out, roundtrip } => {
            commands::synthesize_cmd(disc, out, roundtrip.as_deref(), &settings)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            match &cli.common.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, &outcome.report) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", outcome.report),
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
