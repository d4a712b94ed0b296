//! Reproducible experiment runner: every library surface as a subcommand
//! with CSV/JSON outputs. Identical configuration + seed gives
//! byte-identical output bodies.
//!
//! Exit codes: 0 ok, 1 validation failure, 2 usage error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "fixmag", version, about = "Ising model at fixed magnetization on random regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Degree of the regular graph
    #[arg(long)]
    d: Option<u32>,
    /// Inverse temperature
    #[arg(long)]
    beta: Option<f64>,
    /// Magnetization density in (-1, 1)
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    /// Plus-spin count
    #[arg(long)]
    k: Option<usize>,
    /// Number of vertices
    #[arg(long)]
    n: Option<usize>,
    /// RNG seed (64-bit)
    #[arg(long)]
    seed: Option<u64>,
    /// Independent replicas
    #[arg(long)]
    replicas: Option<usize>,
    /// Measurement sweeps (n steps each)
    #[arg(long)]
    sweeps: Option<usize>,
    /// Burn-in sweeps before measuring
    #[arg(long)]
    burn_in: Option<usize>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` config file; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Uniqueness and reconstruction thresholds for a degree
    Thresholds(Common),
    /// η-grid CSV of f, ρ_η, the drift ratio, and the rate function
    FreeEnergyCurve {
        #[command(flatten)]
        common: Common,
        /// Grid points over [-1, 1]
        #[arg(long)]
        points: Option<usize>,
    },
    /// BP fixed points at a given external field
    Bp {
        #[command(flatten)]
        common: Common,
        /// External field
        #[arg(long, allow_hyphen_values = true)]
        field: Option<f64>,
    },
    /// Root-reconstruction TV against boundary depth
    Reconstruction {
        #[command(flatten)]
        common: Common,
        /// Maximum boundary depth
        #[arg(long)]
        depth: Option<usize>,
        /// Monte Carlo samples per depth
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Draw one planted (graph, configuration) pair
    SamplePlanted(Common),
    /// Trajectory CSV of a dynamics run
    RunDynamics {
        #[command(flatten)]
        common: Common,
        /// glauber | kawasaki | hybrid | glauber_plus | hybrid_plus
        #[arg(long)]
        variant: Option<String>,
        /// uniform | all_plus | all_minus (ignored when --k is given)
        #[arg(long)]
        init: Option<String>,
    },
    /// Partition-ratio estimates and the projection-chain drift profile
    Projection {
        #[command(flatten)]
        common: Common,
        /// Lowest plus-count (default n/2)
        #[arg(long)]
        k_min: Option<usize>,
        /// Highest plus-count (default n-1)
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Run the exact-oracle suite; nonzero exit on any failure
    OracleValidate(Common),
    /// Bichromatic-edge identity experiment at zero magnetization
    ZbCheck {
        #[command(flatten)]
        common: Common,
        /// Relative tolerance for the identity checks
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
