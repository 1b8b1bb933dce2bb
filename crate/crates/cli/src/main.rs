//! `entrywise`: thresholds, critical values, stratifications and
//! verification suites from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "entrywise",
    version,
    about = "Sharp thresholds for entrywise positivity preservers"
)]
struct Cli {
    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Coeffs {
    /// Leading coefficients c_0, ..., c_{N-1}; decimals are read exactly.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    coeffs: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Sharp constant C(c; z^M; N, rho) and the coefficient bound -1/C.
    Threshold {
        #[command(flatten)]
        c: Coeffs,
        #[arg(long)]
        degree: u64,
        /// Defaults to the number of coefficients.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value = "1")]
        rho: String,
    },
    /// PSD verdict for f[A] with f = h_c + c' z^M.
    Check {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        c: Coeffs,
        #[arg(long)]
        extra_degree: u64,
        #[arg(long, allow_hyphen_values = true)]
        extra_coeff: String,
        #[arg(long, default_value_t = entrywise_core::matrix::DEFAULT_PSD_EPS)]
        eps: f64,
    },
    /// Critical value of one matrix: smallest h with A^{oM} <= h h_c[A].
    CriticalValue {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        c: Coeffs,
        #[arg(long)]
        degree: u64,
        /// Exact rational value; needs a real rank-one matrix.
        #[arg(long)]
        exact: bool,
    },
    /// Exact values along the rank-one witness family, t = 1e-1 down to tmin.
    WitnessSweep {
        #[command(flatten)]
        c: Coeffs,
        #[arg(long)]
        degree: u64,
        #[arg(long, default_value = "1")]
        rho: String,
        #[arg(long, default_value_t = 1e-6)]
        tmin: f64,
        /// Print exact fractions.
        #[arg(long)]
        exact: bool,
    },
    /// Maximal rank-one block decomposition for a group.
    Stratify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "trivial")]
        group: String,
    },
    /// Simultaneous kernel of B o h_c[A], computed three ways.
    Simkernel {
        #[arg(long)]
        matrix: PathBuf,
        /// Weight matrix B; the all-ones matrix when absent.
        #[arg(long)]
        weight: Option<PathBuf>,
        #[command(flatten)]
        c: Coeffs,
    },
    /// Bounds on the largest matrix cube size for the signed tail.
    Cube {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        extra: u64,
        /// Defaults to all ones.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<String>,
        #[arg(long, default_value = "1")]
        rho: String,
    },
    /// Schur polynomial values.
    Schur {
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<u64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Vec<String>,
        /// Evaluate at (1, ..., 1) with this many ones.
        #[arg(long)]
        ones: Option<usize>,
    },
    /// Seeded verification suites; exit 1 when any check fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, env = "HP_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, cli.json) {
        Ok(out) => {
            print!("{}", out.text);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
