use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use warpstab_core::criteria::StabilityClass;
use warpstab_core::spectral1d::CoshVariant;

#[derive(Debug, Parser)]
#[command(
    name = "warpstab",
    version,
    about = "Linear stability of sin-cones, cosh-cylinders and flat cylinders"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads for sweeps and table classification.
    #[arg(long, global = true, env = "WARPSTAB_JOBS")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a warped product from fiber data.
    Classify {
        #[command(subcommand)]
        target: ClassifyTarget,
    },
    /// Check a one-dimensional infimum or coefficient bound.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Positivity sweeps of the coupled forms.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Reproduce the symmetric-space tables.
    Tables(TablesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Numerics {
    /// Grid cells.
    #[arg(long = "grid-n", default_value_t = 4000)]
    pub grid_n: usize,
    /// Half length of the truncated line for cosh problems.
    #[arg(long = "trunc-l", default_value_t = 8.0)]
    pub trunc_l: f64,
    /// Eigenvalue tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StabilityArg {
    StrictlyStable,
    Stable,
    Unstable,
}

impl From<StabilityArg> for StabilityClass {
    fn from(s: StabilityArg) -> Self {
        match s {
            StabilityArg::StrictlyStable => StabilityClass::StrictlyStable,
            StabilityArg::Stable => StabilityClass::Stable,
            StabilityArg::Unstable => StabilityClass::Unstable,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum ClassifyTarget {
    /// Sin-cone over a positive Einstein fiber.
    Sin(SinArgs),
    /// Cosh-cylinder over a negative Einstein fiber.
    Cosh(CoshArgs),
    /// Ricci-flat product with a circle or the line.
    Flat(FlatArgs),
}

#[derive(Debug, Args)]
pub struct SinArgs {
    #[arg(long)]
    pub n: Option<u32>,
    /// Smallest nonzero Laplace eigenvalue of the fiber.
    #[arg(long)]
    pub lambda1: Option<f64>,
    /// Further Laplace eigenvalues, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub eigenvalues: Vec<f64>,
    /// Every unlisted eigenvalue is at least this (defaults to the smallest listed one).
    #[arg(long)]
    pub tail_bound: Option<f64>,
    /// Bottom of the Einstein operator spectrum on TT-tensors of the fiber.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa_min: Option<f64>,
    /// Fiber stability instead of a numeric kappa.
    #[arg(long, value_enum)]
    pub fiber: Option<StabilityArg>,
    /// Shorthand for `--fiber stable`.
    #[arg(long)]
    pub fiber_stable: bool,
    /// The fiber is the round sphere.
    #[arg(long)]
    pub round_sphere: bool,
    /// Fiber given as one fixture line `family|name|dim|Lambda|fiber|expected|special`.
    #[arg(long, conflicts_with_all = ["n", "lambda1", "eigenvalues", "kappa_min", "fiber", "fiber_stable", "round_sphere"])]
    pub record: Option<String>,
    /// Decide eigenvalues in the gap below 2n-1 numerically.
    #[arg(long)]
    pub numeric: bool,
    #[command(flatten)]
    pub numerics: Numerics,
}

#[derive(Debug, Args)]
pub struct CoshArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa_min: f64,
    /// kappa-min is only a strict lower bound of the spectrum.
    #[arg(long)]
    pub not_attained: bool,
}

#[derive(Debug, Args)]
pub struct FlatArgs {
    #[arg(long, value_enum)]
    pub fiber: StabilityArg,
    /// The base is a circle rather than the real line.
    #[arg(long)]
    pub circle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<VariantArg> for CoshVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::A => CoshVariant::A,
            VariantArg::B => CoshVariant::B,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum VerifyCheck {
    /// Infimum of the cosh quotient (n for variant A, n-1 for B).
    CoshLemma(CoshLemmaArgs),
    /// Infimum lambda + mu of the sin quotient, realized by sin^mu.
    SinLemma(SinLemmaArgs),
    /// Both sin quotients without potential have infimum zero.
    SinZero(SinZeroArgs),
    /// Coefficient bounds of the cosh V4 estimate.
    CoshCoeff(CoshCoeffArgs),
}

#[derive(Debug, Args)]
pub struct CoshLemmaArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    /// Allowed relative error.
    #[arg(long, default_value_t = 0.01)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub numerics: Numerics,
}

#[derive(Debug, Args)]
pub struct SinLemmaArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.01)]
    pub rel_tol: f64,
    /// Smallest accepted cosine between eigenvector and sin^mu.
    #[arg(long, default_value_t = 0.999)]
    pub min_cosine: f64,
    #[command(flatten)]
    pub numerics: Numerics,
}

#[derive(Debug, Args)]
pub struct SinZeroArgs {
    #[arg(long)]
    pub n: u32,
    /// Both infima must be below this.
    #[arg(long, default_value_t = 0.01)]
    pub bound: f64,
    #[command(flatten)]
    pub numerics: Numerics,
}

#[derive(Debug, Args)]
pub struct CoshCoeffArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    /// Upper end of the sampled lambda range.
    #[arg(long, default_value_t = 1000.0)]
    pub lambda_max: f64,
}

#[derive(Debug, Subcommand)]
pub enum SweepKind {
    /// Positivity of the sin V4 form over a lambda range.
    Q(QArgs),
    /// Bracket the transition of the sin V4 form to positivity.
    LambdaCrit(CritArgs),
    /// Strict positivity constant of a cosh block form.
    CoshConstant(CoshConstantArgs),
}

#[derive(Debug, Args)]
pub struct QArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
    #[command(flatten)]
    pub numerics: Numerics,
}

#[derive(Debug, Args)]
pub struct CritArgs {
    #[arg(long)]
    pub n: u32,
    /// Largest accepted bracket width.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    #[arg(long = "grid-n", default_value_t = 4000)]
    pub grid_n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SubspaceArg {
    V3,
    V4,
}

#[derive(Debug, Args)]
pub struct CoshConstantArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum)]
    pub subspace: SubspaceArg,
    /// First parameter (default n-1 for v3, 0 for v4).
    #[arg(long)]
    pub from: Option<f64>,
    /// Last parameter (default n+20 for v3, 4n for v4).
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[command(flatten)]
    pub numerics: Numerics,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Fixture file instead of the built-in tables.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    /// Leave gap eigenvalues undetermined instead of testing them numerically.
    #[arg(long)]
    pub no_numeric: bool,
    #[arg(long = "grid-n", default_value_t = 4000)]
    pub grid_n: usize,
}
