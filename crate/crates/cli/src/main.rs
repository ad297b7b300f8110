//! Command-line front-end for the oracle-receiver simulation library:
//! Monte-Carlo sweeps with CSV output, the Wishart pseudo-inverse mean
//! check, and brute-force RIP constants.
//!
//! Every run is reproducible from its seed; `--threads` (or the
//! `ORACLE_CS_THREADS` env var) caps the worker pool without changing a
//! single output byte.

mod config;
mod output;
mod rip;
mod sweep;
mod wishart;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "oracle-cs",
    version,
    about = "Oracle-receiver compressed-sensing simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep and write CSV data plus a run manifest
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Check the singular Wishart pseudo-inverse mean empirically
    CheckWishart(WishartArgs),
    /// Compute the brute-force RIP constant of a small matrix
    Rip(RipArgs),
    /// Print the tool name and version
    Version,
}

#[derive(Subcommand)]
enum SweepKind {
    /// White Gaussian measurement noise, swept over sigma2_z
    White(SweepArgs),
    /// Uniform scalar quantization of the measurements, swept over the step
    Quant(SweepArgs),
    /// AR(1)-correlated Gaussian noise, swept over sigma2_z per rho
    Corr(SweepArgs),
}

/// Flags shared by every subcommand. All values are optional at the flag
/// level; resolution order is flag, then `--config` file, then the built-in
/// default.
#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Signal length n
    #[arg(long)]
    n: Option<usize>,
    /// Sparsity k (nonzero coefficient count; RIP order for `rip`)
    #[arg(long)]
    k: Option<usize>,
    /// Measurement count m
    #[arg(long)]
    m: Option<usize>,
    /// Monte-Carlo trials (per grid point for sweeps)
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; every random quantity derives from it
    #[arg(long)]
    seed: Option<u64>,
    /// Sensing-matrix entry variance (default 1/m; 1 for check-wishart)
    #[arg(long)]
    sigma2_phi: Option<f64>,
    /// Directory for CSV and manifest output
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker thread cap; falls back to ORACLE_CS_THREADS, then all cores.
    /// Never affects output bytes.
    #[arg(long)]
    threads: Option<usize>,
    /// key=value config file; flags override it, it overrides defaults
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Variance of the nonzero signal coefficients
    #[arg(long)]
    sigma2_theta: Option<f64>,
    /// Comma-separated noise-variance grid (white and corr sweeps)
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    sigma2z_grid: Option<Vec<f64>>,
    /// Comma-separated quantizer-step grid (quant sweeps)
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    delta_grid: Option<Vec<f64>>,
    /// AR(1) correlation coefficient; repeat for multiple series (corr sweeps)
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<f64>>,
    /// RIP constant for the bound columns; repeatable
    #[arg(long, value_delimiter = ',')]
    delta_k: Option<Vec<f64>>,
    /// Also write a gnuplot script next to each CSV
    #[arg(long)]
    plot_script: bool,
}

#[derive(Args, Debug, Clone)]
struct WishartArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Relative tolerance on the diagonal mean for the PASS verdict
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct RipArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Read the matrix from a CSV file of numbers instead of generating a
    /// Gaussian one from the seed
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep { kind } => sweep::run(kind),
        Command::CheckWishart(args) => wishart::run(args),
        Command::Rip(args) => rip::run(args),
        Command::Version => {
            println!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

/// Run `f` under a rayon pool capped at the resolved thread count, or on the
/// default global pool when no cap was requested.
fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let count = match threads {
        Some(t) => Some(t),
        None => match std::env::var("ORACLE_CS_THREADS") {
            Ok(s) => Some(
                s.parse::<usize>()
                    .context("ORACLE_CS_THREADS must be a positive integer")?,
            ),
            Err(_) => None,
        },
    };
    match count {
        Some(0) => bail!("thread count must be at least 1"),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .context("cannot build worker pool")?;
            pool.install(f)
        }
        None => f(),
    }
}
