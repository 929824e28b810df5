use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "egoten", version, about = "Overlapping community detection with egonet tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Detect communities in a static edge list.
    Detect(DetectArgs),
    /// Detect communities in a `t u v [w]` temporal edge list.
    DetectTemporal(DetectArgs),
    /// Score a cover against a graph and, optionally, a ground truth.
    Eval(EvalArgs),
    /// Generate a planted-partition graph and its ground truth.
    Gen(GenArgs),
    /// Generate the community migration scenario.
    GenTemporal(GenTemporalArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnOff {
    On,
    Off,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Egonet tensor decomposition.
    Egoten,
    /// Matrix factorization baseline on the adjacency matrix.
    Nmf,
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    /// Edge-list file.
    #[arg(long, short, required_unless_present = "manifest")]
    pub input: Option<PathBuf>,
    /// Rerun with every setting taken from a previous run's manifest.
    #[arg(long, conflicts_with_all = ["input", "k"])]
    pub manifest: Option<PathBuf>,
    #[arg(long, short)]
    pub output_dir: PathBuf,
    /// Number of components.
    #[arg(long, required_unless_present = "manifest", value_parser = clap::value_parser!(u64).range(1..))]
    pub k: Option<u64>,
    /// Ridge weight on A and B (default 0.1; 0 for the nmf method).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 25)]
    pub admm_iter: usize,
    /// Outer stopping tolerance on relative factor change.
    #[arg(long, default_value_t = 1e-5)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub admm_eps: f64,
    /// Crisp threshold; defaults to 1/K.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Put ones on the diagonal of every egonet slab.
    #[arg(long)]
    pub self_loops: bool,
    /// Smallest node id in the input.
    #[arg(long, default_value_t = 0)]
    pub indexing_base: u64,
    #[arg(long)]
    pub weighted: bool,
    /// Node count, when the highest ids have no edges.
    #[arg(long)]
    pub n_nodes: Option<usize>,
    /// Number of time slots (temporal input only).
    #[arg(long)]
    pub n_times: Option<usize>,
    /// Leave nodes with no membership above tau unassigned.
    #[arg(long)]
    pub strict_crisp: bool,
    #[arg(long, value_enum, default_value_t = OnOff::On)]
    pub warm_duals: OnOff,
    /// ADMM penalty: "gram", "init" or a fixed value.
    #[arg(long, default_value = "gram")]
    pub rho: String,
    /// Skip rescaling paired columns of A and B after each sweep.
    #[arg(long)]
    pub no_balance: bool,
    #[arg(long, value_enum, default_value_t = Method::Egoten)]
    pub method: Method,
    /// Fill the seconds column of the trace.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Graph edge list the cover refers to.
    #[arg(long, short)]
    pub graph: PathBuf,
    /// Predicted cover file.
    #[arg(long, required_unless_present = "soft")]
    pub cover: Option<PathBuf>,
    /// Soft membership CSV; crisp covers are derived by thresholding.
    #[arg(long, conflicts_with = "cover")]
    pub soft: Option<PathBuf>,
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Threshold for --soft without --truth; defaults to 1/K.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Number of equal steps in the tau sweep over [0, 1).
    #[arg(long, default_value_t = 20)]
    pub tau_steps: usize,
    /// Number of equal steps in the coverage grid over [0, 1].
    #[arg(long, default_value_t = 100)]
    pub grid_steps: usize,
    /// Average F1 in both directions.
    #[arg(long)]
    pub f1_symmetric: bool,
    #[arg(long)]
    pub strict_crisp: bool,
    #[arg(long, default_value_t = 0)]
    pub indexing_base: u64,
    #[arg(long)]
    pub weighted: bool,
    #[arg(long)]
    pub n_nodes: Option<usize>,
    /// Report CSV; printed to stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Coverage curve CSV.
    #[arg(long)]
    pub coverage_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Comma-separated community sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long)]
    pub p_in: f64,
    #[arg(long)]
    pub p_out: f64,
    /// Shared nodes as COUNT:A:B, may repeat.
    #[arg(long)]
    pub overlap: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub indexing_base: u64,
    #[arg(long, short)]
    pub output_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct GenTemporalArgs {
    #[arg(long, default_value_t = 20)]
    pub n_times: usize,
    /// Sizes of the two initial blocks.
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "500,500")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 400)]
    pub migrants: usize,
    #[arg(long, default_value_t = 10.0)]
    pub transition_mean: f64,
    #[arg(long, default_value_t = 1.0)]
    pub transition_std: f64,
    #[arg(long, default_value_t = 0.3)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.1)]
    pub p_out: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub indexing_base: u64,
    #[arg(long, short)]
    pub output_dir: PathBuf,
}
