use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use conbound::states::Family;

use crate::grid::GridAxis;

#[derive(Debug, Parser)]
#[command(
    name = "conbound",
    version,
    about = "Entanglement criteria and concurrence bounds for bipartite states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the separability criteria and the concurrence lower bound.
    Eval {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        roof: RoofArgs,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a family over a 1-D or 2-D parameter grid and emit CSV.
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        /// param:start:stop:step; give once or twice.
        #[arg(long, required = true, num_args = 1)]
        grid: Vec<GridAxis>,
        #[command(flatten)]
        roof: RoofArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the witness operator for a state and write it as JSON.
    Witness {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct StateArgs {
    #[arg(long, conflicts_with = "state")]
    pub family: Option<Family>,
    /// Load the state from a JSON state file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Fidelity with the maximally entangled state.
    #[arg(long = "F")]
    pub fidelity: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated Schmidt coefficients.
    #[arg(long, value_delimiter = ',')]
    pub mu: Option<Vec<f64>>,
    #[arg(long)]
    pub rank: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RoofArgs {
    /// Also run the convex-roof upper bound search.
    #[arg(long)]
    pub roof: bool,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    /// Seed for random families and the roof search.
    #[arg(long)]
    pub seed: Option<u64>,
}
