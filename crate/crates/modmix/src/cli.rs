//! Command-line arguments. The parsed form doubles as the `config` block of a
//! report, which is how `verify` replays a run.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::report::OutputFormat;

#[derive(Debug, Parser)]
#[command(name = "modmix", version, about = "Exact polynomial averages on Z/NZ")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Threads for the inner parallel loops.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, global = true, value_enum, default_value_t)]
    pub output: OutputFormat,
    /// Largest N for exhaustive subset searches.
    #[arg(long, global = true, default_value_t = 24)]
    pub max_exhaustive: u64,
}

impl Default for GlobalArgs {
    fn default() -> Self {
        Self {
            seed: 0,
            workers: 1,
            output: OutputFormat::Json,
            max_exhaustive: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(flatten)]
    pub global: GlobalArgs,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        Self {
            command: cli.command,
            global: cli.global,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", content = "args", rename_all = "kebab-case")]
pub enum Command {
    /// (1/N) Σ μ(A ∩ T^{P(n)} B) against μ(A)μ(B).
    Average(AverageArgs),
    /// Largest |average(A, A, P) - μ(A)^2| over subsets.
    DeviationScan(DeviationArgs),
    /// Closed form for the n^2 average on Z/p^kZ.
    Pkgoal(PkgoalArgs),
    /// Exponential-sum counts and their lpf bound.
    Expsum(ExpsumArgs),
    /// Norm inequalities.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Density thresholds on lpf(N).
    Thresholds(ThresholdArgs),
    /// Pairs (n, m) with n ∈ B and n + P(m) ∈ A.
    PairCount(PairCountArgs),
    /// Whether A + B + image(P) is everything.
    Coverage(CoverageArgs),
    /// Whether every residue is a sum of two k-th powers.
    Waring(WaringArgs),
    /// Solutions of F1(x) + F2(y) + F3(z) ≡ c mod p against the Weil bound.
    WeilCount(WeilArgs),
    /// Explicit sets with non-uniform averages.
    Counterexample(CounterexampleArgs),
    /// The acceptance criteria.
    Reproduce(ReproduceArgs),
    /// Recompute a saved JSON report and compare.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Average(_) => "average",
            Self::DeviationScan(_) => "deviation-scan",
            Self::Pkgoal(_) => "pkgoal",
            Self::Expsum(_) => "expsum",
            Self::Bounds(BoundsCommand::LpfBound(_)) => "bounds lpf-bound",
            Self::Bounds(BoundsCommand::Norm(_)) => "bounds norm",
            Self::Bounds(BoundsCommand::Vdc(_)) => "bounds vdc",
            Self::Thresholds(_) => "thresholds",
            Self::PairCount(_) => "pair-count",
            Self::Coverage(_) => "coverage",
            Self::Waring(_) => "waring",
            Self::WeilCount(_) => "weil-count",
            Self::Counterexample(_) => "counterexample",
            Self::Reproduce(_) => "reproduce",
            Self::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendArg {
    #[default]
    Auto,
    Bitvector,
    Transform,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct AverageArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub set_a: String,
    /// Defaults to A.
    #[arg(long)]
    pub set_b: Option<String>,
    #[arg(long, default_value = "n^2")]
    pub poly: String,
    #[arg(long, value_enum, default_value_t)]
    pub backend: BackendArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    #[default]
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct DeviationArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value = "n^2")]
    pub poly: String,
    #[arg(long, value_enum, default_value_t)]
    pub mode: ScanMode,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    /// Score every mask instead of one per rotation class.
    #[arg(long)]
    pub no_symmetry: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct PkgoalArgs {
    #[arg(long)]
    pub prime: u64,
    #[arg(long)]
    pub power: u32,
    /// A single set; otherwise `--random` or `--exhaustive` is required.
    #[arg(long)]
    pub set_a: Option<String>,
    /// Number of seeded random sets.
    #[arg(long)]
    pub random: Option<u64>,
    /// Every subset (needs p^k within --max-exhaustive).
    #[arg(long)]
    pub exhaustive: bool,
    /// Evaluate for p ≢ 3 mod 4 as well, without asserting equality.
    #[arg(long)]
    pub permissive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ExpsumArgs {
    #[arg(long)]
    pub n: u64,
    /// Frequency; the worst case over j when omitted.
    #[arg(long)]
    pub j: Option<i64>,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "kind", content = "args", rename_all = "kebab-case")]
pub enum BoundsCommand {
    /// Weighted linear average against |∫f|^2 + (d / lpf N) ‖f‖^2.
    LpfBound(LpfBoundArgs),
    /// ‖(1/N) Σ T^{P(n)} f‖ against ((k-1)/lpf N)^{2^{-(k-1)}}.
    Norm(NormArgs),
    /// The differencing chain behind the norm bound.
    Vdc(NormArgs),
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SignalArgs {
    /// Use the centered indicator of this set.
    #[arg(long)]
    pub set_a: Option<String>,
    /// Use the character x -> e(jx/N).
    #[arg(long)]
    pub character: Option<u64>,
    /// Use seeded random signs.
    #[arg(long)]
    pub signs: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct LpfBoundArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub signal: SignalArgs,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct NormArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value = "n^2")]
    pub poly: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub signal: SignalArgs,
    /// Skip differencing steps above this much work.
    #[arg(long, default_value_t = modmix_core::bounds::DEFAULT_VDC_BUDGET)]
    pub vdc_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ThresholdArgs {
    #[arg(long, default_value = "n^2")]
    pub poly: String,
    #[arg(long)]
    pub mu_a: String,
    #[arg(long)]
    pub mu_b: String,
    #[arg(long, default_value = "1")]
    pub eps: String,
    #[arg(long, default_value = "1")]
    pub delta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct PairCountArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub set_a: String,
    #[arg(long)]
    pub set_b: String,
    #[arg(long, default_value = "n^2")]
    pub poly: String,
    #[arg(long)]
    pub eps: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct CoverageArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub set_a: String,
    #[arg(long, default_value = "{0}")]
    pub set_b: String,
    #[arg(long, default_value = "n^2")]
    pub poly: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct WaringArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 2)]
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct WeilArgs {
    #[arg(long)]
    pub prime: u64,
    #[arg(long, default_value = "n^2")]
    pub f1: String,
    #[arg(long, default_value = "n^2")]
    pub f2: String,
    #[arg(long, default_value = "n^2")]
    pub f3: String,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub c: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CounterexampleKindArg {
    Under,
    Over,
    Nonpermutation,
    Interval,
    /// P(n) = pn with A ≡ 0 and B ≡ 1 mod p.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct CounterexampleArgs {
    #[arg(long, value_enum)]
    pub kind: CounterexampleKindArg,
    /// The prime for under, over and trivial.
    #[arg(long)]
    pub prime: Option<u64>,
    /// N = k p for under and over.
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    #[arg(long, default_value = "n^2")]
    pub poly: String,
    /// N = p · cofactor for nonpermutation.
    #[arg(long, default_value_t = 1)]
    pub cofactor: u64,
    /// N for interval and trivial.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, default_value_t = modmix_core::combinatorics::DEFAULT_PRIME_SEARCH_BOUND)]
    pub search_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ReproduceArgs {
    #[arg(long, conflicts_with = "criterion")]
    pub all: bool,
    /// Criterion numbers 1 to 12; repeatable.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
    pub criterion: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// A JSON report, or `-` for standard input.
    pub report: PathBuf,
}
