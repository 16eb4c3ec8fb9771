//! `qradius`: closed-form and brute-force q-numerical radii from the command line.
//!
//! Exit codes: 0 success, 1 property violation, 2 usage or parse error,
//! 3 degenerate input.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "qradius", version, about = "q-numerical radius of rank-one operators")]
struct Cli {
    /// Worker threads for the oracle and the suites (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form ω_q(a⊗b) with λ_q and q*.
    Radius(RadiusArgs),
    /// Brute-force lower estimate of ω_q(A).
    Estimate(EstimateArgs),
    /// Random points of the q-numerical range as CSV.
    Range(RangeArgs),
    /// f(q) = ω_q(a⊗b) and its derivatives on a uniform grid as CSV.
    Profile(ProfileArgs),
    /// Run a seeded property suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub q: f64,
    /// Matrix file whose rows are the Gram weight G.
    #[arg(long)]
    pub gram: Option<PathBuf>,
    /// Include the maximizing pair (y, t).
    #[arg(long)]
    pub witness: bool,
    /// Cross-check against the oracle with this many restarts.
    #[arg(long, value_name = "N")]
    pub check_oracle: Option<usize>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct RangeArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Complex q as "re" or "re,im".
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    #[arg(long)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// buzano, elementary, monotone, embedding or analytic.
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub max_degree: usize,
    /// Add wall-clock seconds to the report (breaks byte-for-byte reproducibility).
    #[arg(long)]
    pub timing: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Radius(args) => commands::radius(&args),
        Command::Estimate(args) => commands::estimate(&args),
        Command::Range(args) => commands::range(&args),
        Command::Profile(args) => commands::profile(&args),
        Command::Verify(args) => commands::verify(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
