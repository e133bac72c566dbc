use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Experiments on the fitness landscape of the cellular-automata majority task.
///
/// Rules are 32 hex digits (code 0 first) or 128 '0'/'1' characters.
/// Stochastic subcommands take `--seed`; when it is omitted seed 0 is used and
/// reported. Data files written with `--out` get a JSON run manifest next to
/// them (`<out>.manifest.json`) unless `--manifest` names another path.
#[derive(Parser, Debug)]
#[command(name = "majority", version, max_term_width = 100)]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Standard performance of one or more rules: CSV `hex,n,seed,performance`.
    Eval(EvalArgs),
    /// Number of statistically distinguishable fitness values at sample size n.
    Levels(LevelsArgs),
    /// Density of states: CSV `bin_low,bin_high,count`.
    Dos(DosArgs),
    /// Neutral degree of one or more rules: CSV `hex,n,seed,fitness,neutral_degree`.
    Ndeg(NdegArgs),
    /// Neutral walk trace: CSV `step,hex,fitness,distance,neutral_degree`.
    Nwalk(NwalkArgs),
    /// Autocorrelation of neutral degree along walks: CSV `lag,r`.
    Acf(AcfArgs),
    /// Olympus template derivation and membership.
    #[command(subcommand)]
    Olympus(OlympusCommand),
    /// Genetic algorithm inside a template subspace.
    Ga(GaArgs),
    /// Re-run the command recorded in a manifest and compare output digests.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Data file to write; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest path (default `<out>.manifest.json`).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct TaskArgs {
    /// Lattice width (odd).
    #[arg(long, default_value_t = 149)]
    pub width: usize,
    /// Relaxation budget in steps.
    #[arg(long, default_value_t = 320)]
    pub max_steps: u32,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Rule to evaluate; repeatable.
    #[arg(long = "rule", required = true)]
    pub rules: Vec<String>,
    /// Number of sampled initial configurations.
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub task: TaskArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LevelsArgs {
    /// Sample size; repeatable.
    #[arg(long = "n", required = true)]
    pub n: Vec<u64>,
    /// List the chain of levels (`n,index,fitness`) instead of the counts.
    #[arg(long)]
    pub values: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    Uniform,
    Mh,
}

#[derive(Args, Debug)]
pub struct DosArgs {
    #[arg(long, value_enum, default_value_t = SamplerKind::Uniform)]
    pub sampler: SamplerKind,
    /// Recorded samples.
    #[arg(long, default_value_t = 4000)]
    pub samples: usize,
    /// Configurations per fitness evaluation.
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Template file restricting the sampled space.
    #[arg(long)]
    pub subspace: Option<PathBuf>,
    #[arg(long, default_value_t = 115)]
    pub bins: usize,
    /// Metropolis temperature.
    #[arg(long, default_value_t = 0.02)]
    pub temperature: f64,
    /// Metropolis steps discarded before recording.
    #[arg(long, default_value_t = 1000)]
    pub burn_in: usize,
    /// Record every k-th Metropolis state.
    #[arg(long, default_value_t = 10)]
    pub thinning: usize,
    /// Metropolis start rule (default: uniform draw).
    #[arg(long)]
    pub start: Option<String>,
    #[command(flatten)]
    pub task: TaskArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct NdegArgs {
    #[arg(long = "rule", required = true)]
    pub rules: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub task: TaskArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkMode {
    /// Each step moves one bit further from the start.
    Expand,
    /// Uniform choice among acceptable neighbors.
    Random,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Neutral to every visited rule.
    All,
    /// Neutral to the current rule only.
    Current,
}

#[derive(Args, Debug)]
pub struct NwalkArgs {
    #[arg(long, value_enum, default_value_t = WalkMode::Random)]
    pub mode: WalkMode,
    /// Start rule (default: the constant-zero rule).
    #[arg(long, default_value = "00000000000000000000000000000000")]
    pub start: String,
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    /// Maximum steps of a random walk.
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = CheckKind::All)]
    pub check: CheckKind,
    /// Record neutral degrees on an expanding walk too.
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub task: TaskArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct AcfArgs {
    /// Walk CSV with a `neutral_degree` column; repeatable, estimates are averaged.
    #[arg(long = "input", required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub max_lag: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Subcommand, Debug)]
pub enum OlympusCommand {
    /// Search the symmetric variants of six rules for the largest agreement.
    Derive(DeriveArgs),
    /// Check whether a rule belongs to a template subspace.
    Check(CheckArgs),
    /// Print the published Olympus template.
    Canonical,
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    /// File with six rules, one per line (`name hex` or `hex`); defaults to
    /// the six best known rules.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Also write the derived template to this file.
    #[arg(long)]
    pub template_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub rule: String,
    /// Template file (default: the published Olympus template).
    #[arg(long)]
    pub template: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GaArgs {
    /// Template file (default: the published Olympus template).
    #[arg(long)]
    pub template: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub pop: usize,
    #[arg(long, default_value_t = 100)]
    pub gens: usize,
    /// Configurations per evaluation during the run, fresh each generation.
    #[arg(long, default_value_t = 100)]
    pub n_gen: u64,
    /// Configurations for the final ranking.
    #[arg(long, default_value_t = 10_000)]
    pub n_final: u64,
    /// Per-free-bit mutation probability (default 2 / free positions).
    #[arg(long)]
    pub mutation: Option<f64>,
    #[arg(long, default_value_t = 0.6)]
    pub crossover: f64,
    #[arg(long, default_value_t = 1)]
    pub elitism: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub task: TaskArgs,
    /// Output directory for trace.csv, best.txt and manifest.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}
