use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "noisygt",
    version,
    about = "Noisy group testing: bounds, capacity and simulation"
)]
pub struct Cli {
    /// key=value file supplying defaults for any flag
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Worker threads (default: available processors); never changes results
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write primary output here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Upper end of the density search
    #[arg(long, global = true)]
    pub d_max: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimised prefactors per θ and algorithm, plus converse and reference rows
    Bounds(BoundsArgs),
    /// Capacity of the p–q channel and the converse it implies
    Capacity(ChannelArgs),
    /// Monte-Carlo recovery at multiples of the calibrated bound
    Simulate(SimArgs),
    /// `simulate` over the product of θ values and (p, q) channels
    Sweep(SimArgs),
    /// COMP/DD under constant-column and Bernoulli designs side by side
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ChannelArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BoundsArgs {
    /// Comma-separated θ values
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_delimiter = ',', value_enum)]
    pub alg: Vec<Alg>,
    #[arg(long, value_enum)]
    pub design: Option<DesignArg>,
    /// Evaluate Bernoulli constants at this k instead of the k → ∞ limit
    #[arg(long)]
    pub k: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CompareArgs {
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// θ (comma list for `sweep`)
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    /// p (comma list for `sweep`; crossed with every --q)
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    #[arg(long, value_enum)]
    pub design: Option<DesignArg>,
    #[arg(long, value_delimiter = ',', value_enum)]
    pub alg: Vec<Alg>,
    /// Multiples of the calibrated prefactor
    #[arg(long, value_delimiter = ',')]
    pub mult: Vec<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Falls back to NOISYGT_SEED, then 0
    #[arg(long)]
    pub seed: Option<u64>,
    /// Size designs for this k while infecting round(n^θ) items
    #[arg(long)]
    pub k_assumed: Option<usize>,
    /// Dump the first trial's design and outcomes
    #[arg(long, value_name = "PATH")]
    pub dump_design: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Alg {
    Comp,
    Dd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignArg {
    Cc,
    Bernoulli,
}
