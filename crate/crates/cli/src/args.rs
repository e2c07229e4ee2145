//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spacings_core::{NamedStatistic, SumFunction, Variant};

#[derive(Debug, Parser)]
#[command(name = "spacings", version, about = "Uniformity tests and null simulations for spacings statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a sample of values in [0, 1) for uniformity.
    Test(TestArgs),
    /// Simulate standardised statistics under the null.
    Simulate(SimulateArgs),
    /// Estimate the per-summand asymptotic variance by Monte Carlo.
    Sigma(SigmaArgs),
    /// Compare the first-order mean correction with a simulated one.
    Meancheck(MeancheckArgs),
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// One value per line; `-` reads standard input.
    pub data_path: PathBuf,
    #[arg(long, value_enum)]
    pub statistic: Statistic,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::V)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, value_enum)]
    pub statistic: Statistic,
    #[arg(long)]
    pub reps: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::V)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub parallel: ParallelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SigmaArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub draws: usize,
    /// Also report the lag-averaged variance expression from the same draws.
    #[arg(long)]
    pub compare_holst: bool,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MeancheckArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    /// iid windows for the first-order correction.
    #[arg(long, default_value_t = 1_000_000)]
    pub draws: usize,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub parallel: ParallelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct FunctionArgs {
    #[arg(long, value_enum)]
    pub statistic: Option<Statistic>,
    #[arg(long, value_enum)]
    pub custom_h: Option<Builtin>,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    #[arg(long, conflicts_with = "seed_from_entropy")]
    pub seed: Option<u64>,
    /// Draw a fresh seed; it is echoed in the report.
    #[arg(long)]
    pub seed_from_entropy: bool,
}

#[derive(Debug, Args)]
pub struct ParallelArgs {
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall time in `elapsed_ms`.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Statistic {
    Greenwood,
    Moran,
    Entropy,
}

impl From<Statistic> for NamedStatistic {
    fn from(s: Statistic) -> Self {
        match s {
            Statistic::Greenwood => NamedStatistic::Greenwood,
            Statistic::Moran => NamedStatistic::Moran,
            Statistic::Entropy => NamedStatistic::Entropy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    V,
    W,
    Q,
    Z,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::V => Variant::V,
            VariantArg::W => Variant::W,
            VariantArg::Q => Variant::Q,
            VariantArg::Z => Variant::Z,
        }
    }
}

/// Built-in sum-functions for `--custom-h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Identity,
    Square,
    Cube,
    Log,
    Xlogx,
    Zero,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Identity => "identity",
            Builtin::Square => "square",
            Builtin::Cube => "cube",
            Builtin::Log => "log",
            Builtin::Xlogx => "xlogx",
            Builtin::Zero => "zero",
        }
    }
}

impl SumFunction for Builtin {
    fn eval(&self, u: f64) -> Option<f64> {
        let v = match self {
            Builtin::Identity => u,
            Builtin::Square => u * u,
            Builtin::Cube => u * u * u,
            Builtin::Log if u > 0.0 => u.ln(),
            Builtin::Log => return None,
            Builtin::Xlogx if u == 0.0 => 0.0,
            Builtin::Xlogx => u * u.ln(),
            Builtin::Zero => 0.0,
        };
        Some(v).filter(|v| v.is_finite())
    }
}

/// The function chosen by `--statistic` or `--custom-h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Named(NamedStatistic),
    Custom(Builtin),
}

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::Named(s) => s.name(),
            Function::Custom(b) => b.name(),
        }
    }

    pub fn named(self) -> Option<NamedStatistic> {
        match self {
            Function::Named(s) => Some(s),
            Function::Custom(_) => None,
        }
    }
}

impl FunctionArgs {
    pub fn function(&self) -> Function {
        match (self.statistic, self.custom_h) {
            (Some(s), _) => Function::Named(s.into()),
            (None, Some(b)) => Function::Custom(b),
            (None, None) => unreachable!("clap enforces one of --statistic/--custom-h"),
        }
    }
}
