use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fsosec_core::{Scheme, SimConfig};

#[derive(Debug, Parser)]
#[command(name = "fsosec", version, about = "Secrecy throughput of MIMOME free-space optical wiretap links")]
pub struct Cli {
    /// JSON scenario; every omitted field takes its baseline value.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the derived channel parameters as JSON.
    Params,
    /// Evaluate the EST along an axis and emit CSV.
    Sweep(SweepArgs),
    /// Run the rate optimizer and emit JSON.
    Optimize(OptimizeArgs),
    /// Compare every closed form with the Monte-Carlo oracle.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    #[value(name = "r_e")]
    RE,
    #[value(name = "r_b")]
    RB,
    #[value(name = "r_e-r_b", alias = "r_e×r_b", alias = "r_e,r_b")]
    Surface,
    #[value(name = "s_th")]
    STh,
    #[value(name = "n")]
    N,
    #[value(name = "sigma_s")]
    SigmaS,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Monte-Carlo trials.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Number of independent random streams.
    #[arg(long, default_value_t = 64)]
    pub streams: u32,

    /// Evaluate streams on one thread.
    #[arg(long)]
    pub serial: bool,
}

impl SimArgs {
    pub fn sim(&self) -> SimConfig {
        SimConfig {
            trials: self.trials,
            seed: self.seed,
            stream_count: self.streams,
            parallel: !self.serial,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: Axis,

    #[arg(long, default_value = "fixed")]
    pub scheme: Scheme,

    /// Secrecy outage threshold; overrides the config.
    #[arg(long)]
    pub sth: Option<f64>,

    #[arg(long)]
    pub from: f64,

    #[arg(long)]
    pub to: f64,

    #[arg(long)]
    pub steps: usize,

    /// Codeword-rate range of a r_e-r_b surface; defaults to the first range.
    #[arg(long)]
    pub from2: Option<f64>,

    #[arg(long)]
    pub to2: Option<f64>,

    #[arg(long)]
    pub steps2: Option<usize>,

    /// Redundancy rate held fixed on a r_b sweep.
    #[arg(long)]
    pub re: Option<f64>,

    /// Codeword rate held fixed, or Bob's capacity in the adaptive scheme.
    #[arg(long, visible_alias = "cb")]
    pub rb: Option<f64>,

    /// Add Monte-Carlo estimates.
    #[arg(long)]
    pub mc: bool,

    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long, default_value = "fixed")]
    pub scheme: Scheme,

    #[arg(long)]
    pub sth: Option<f64>,

    /// Bob's capacity for the adaptive scheme. Without it the optimum is
    /// averaged over the capacity distribution.
    #[arg(long)]
    pub cb: Option<f64>,

    #[arg(long)]
    pub mc: bool,

    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Override the scenario's secrecy outage threshold.
    #[arg(long)]
    pub sth: Option<f64>,

    #[command(flatten)]
    pub sim: SimArgs,
}
