//! `gcrossed`: validate G-crossed category data and compute state-sum invariants of
//! closed oriented 4-manifolds.
//!
//! Exit codes: 0 success, 1 other error, 2 unreadable or unparsable input, 3 validation
//! failure, 4 search guard exceeded, 5 invariance check failed.

mod commands;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gcrossed", version, about = "State-sum invariants from G-crossed braided fusion data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every coherence condition of category, crossed-module, cocycle or triangulation files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        opts: Common,
    },
    /// Evaluate the state sum of a category on a triangulation.
    Compute {
        category: PathBuf,
        /// Triangulation file; the boundary of the 5-simplex when omitted.
        triangulation: Option<PathBuf>,
        /// Twist by a 4-cocycle on the grading group.
        #[arg(long)]
        cocycle: Option<PathBuf>,
        #[command(flatten)]
        opts: Common,
    },
    /// Compare the invariant across vertex relabelings and Pachner moves.
    Invariance {
        category: PathBuf,
        triangulation: Option<PathBuf>,
        /// Random vertex permutations to try.
        #[arg(long, default_value_t = 5)]
        permutations: usize,
        /// Follow each move by every move of the result that adds no vertex.
        #[arg(long)]
        second: bool,
        /// Stop after this many moves.
        #[arg(long)]
        max_moves: Option<usize>,
        #[command(flatten)]
        opts: Common,
    },
    /// Exact Dijkgraaf-Witten invariant of a group, e.g. `Z2`, `S3` or `Z2xZ3`.
    Dw {
        group: String,
        triangulation: Option<PathBuf>,
        #[command(flatten)]
        opts: Common,
    },
    /// Exact count of admissible colorings of a crossed module.
    YetterCount {
        crossed_module: PathBuf,
        triangulation: Option<PathBuf>,
        #[command(flatten)]
        opts: Common,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Abort the search after this many nodes.
    #[arg(long)]
    max_colorings: Option<u64>,
    #[arg(long)]
    max_seconds: Option<f64>,
    /// Seed for random permutations; required by `invariance`.
    #[arg(long)]
    seed: Option<u64>,
    /// Print a machine-readable report on stdout.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
