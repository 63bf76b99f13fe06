use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphmean::means::Algorithm;
use serde::Serialize;

#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "graphmean", version, about = "Sample means of attributed graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Root seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest padded order aligned exactly (at most 10).
    #[arg(long, global = true, default_value_t = 8)]
    pub solver_exact_threshold: usize,
    /// Starts of the heuristic aligner above the exact threshold.
    #[arg(long, global = true, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, global = true, env = "GRAPHMEAN_OUTPUT_DIR", default_value = "graphmean-out")]
    pub output_dir: PathBuf,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Compute a sample mean.
    Mean(MeanArgs),
    /// Run several algorithms on samples drawn from datasets.
    Bench(BenchArgs),
    /// Nearest-neighbour classification, optionally against class means.
    Classify(ClassifyArgs),
    /// Generate a synthetic dataset.
    Gen(GenArgs),
    /// Summarise a graph or dataset.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Native,
    /// A `.gxl` file, or a `.cxl` index whose files sit next to it.
    Gxl,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct InputArgs {
    #[arg(long, value_enum, default_value_t = Format::Native)]
    pub format: Format,
    /// GXL attribute schema (JSON); defaults to Letter-style coordinates.
    #[arg(long)]
    pub schema: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    Random,
    Medoid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Shuffled,
    AsGiven,
    Increasing,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct AlgorithmArgs {
    /// Passes without improvement before stopping.
    #[arg(long, default_value_t = 10)]
    pub waiting_time: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
    /// Relative decrease that counts as improvement.
    #[arg(long, default_value_t = 1e-9)]
    pub improvement_tol: f64,
    #[arg(long, value_enum, default_value_t = Init::Random)]
    pub init: Init,
    /// Presentation order of the incremental algorithms.
    #[arg(long, value_enum, default_value_t = Order::Shuffled)]
    pub order: Order,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct MeanArgs {
    #[arg(long)]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub input_args: InputArgs,
    /// Only use graphs with this label.
    #[arg(long)]
    pub class: Option<String>,
    /// SGG step size: a positive constant or `harmonic`.
    #[arg(long)]
    pub step_size: Option<String>,
    #[command(flatten)]
    pub algorithm_args: AlgorithmArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    /// Random subsets of each dataset.
    Random,
    /// Each class of each dataset is one sample.
    Class,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Dispersion,
    Iterations,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = ProtocolKind::Random)]
    pub protocol: ProtocolKind,
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    pub datasets: Vec<PathBuf>,
    #[command(flatten)]
    pub input_args: InputArgs,
    /// Defaults to all seven.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub algorithms: Vec<Algorithm>,
    /// Random subsets per dataset, or replicates per class.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 5)]
    pub size_min: usize,
    #[arg(long, default_value_t = 20)]
    pub size_max: usize,
    /// Constant SGG step sizes to try.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub sgg_grid: Vec<f64>,
    /// Runs averaged when choosing an SGG step size per class.
    #[arg(long, default_value_t = 10)]
    pub eta_trials: usize,
    /// Performance measure of the profile and pairwise tables.
    #[arg(long, value_enum, default_value_t = MetricKind::Dispersion)]
    pub metric: MetricKind,
    #[command(flatten)]
    pub algorithm_args: AlgorithmArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[command(flatten)]
    pub input_args: InputArgs,
    /// `none` for the full training set, or an algorithm computing one mean per class.
    #[arg(long, default_value = "none")]
    pub condense: String,
    #[arg(long)]
    pub step_size: Option<String>,
    #[command(flatten)]
    pub algorithm_args: AlgorithmArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    LetterLike,
    RandomUniform,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = FamilyKind::LetterLike)]
    pub family: FamilyKind,
    /// Built-in letter prototypes, one class each.
    #[arg(long, default_value = graphmean::data::LETTERS)]
    pub letters: String,
    /// Native graph to distort instead of the built-in letters.
    #[arg(long)]
    pub prototype: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub noise_sigma: f64,
    /// Probability of toggling each node pair's edge.
    #[arg(long, default_value_t = 0.0)]
    pub structural_noise: f64,
    /// Graphs per class (letter-like) or in total (random-uniform).
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 3)]
    pub order_min: usize,
    #[arg(long, default_value_t = 6)]
    pub order_max: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 2)]
    pub attr_dim: usize,
    /// Dataset name; defaults to the family name.
    #[arg(long)]
    pub name: Option<String>,
    /// File name inside the output directory.
    #[arg(long, default_value = "dataset.json")]
    pub file: String,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct InspectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub input_args: InputArgs,
    /// Attribute vectors with norm at most this are non-edges.
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    /// Largest order for which symmetry is reported (at most 10).
    #[arg(long, default_value_t = 8)]
    pub symmetry_max_order: usize,
}
