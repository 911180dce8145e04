use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geohh::bounds::{Side, Theorem, Variant};

#[derive(Debug, Parser)]
#[command(
    name = "geohh",
    version,
    about = "Hermite-Hadamard type bounds for s-geometrically convex functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one check and print a JSON report.
    Verify(VerifyArgs),
    /// Evaluate a bound over a parameter grid.
    Sweep(SweepArgs),
    /// Tabulate the kernels h1, h2, h3.
    Kernels(KernelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Lemma,
    Chain,
    Thm22,
    Thm23,
    Prop31,
    Prop32,
    Convexity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Fafb,
    Fsqrt,
    Both,
}

impl SideArg {
    pub fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Fafb => vec![Side::ProductVsFafb],
            SideArg::Fsqrt => vec![Side::ProductVsFsqrt],
            SideArg::Both => Side::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Printed,
    Derived,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Printed => Variant::Printed,
            VariantArg::Derived => Variant::DerivationConsistent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Thm22,
    Thm23,
}

impl From<TheoremArg> for Theorem {
    fn from(t: TheoremArg) -> Self {
        match t {
            TheoremArg::Thm22 => Theorem::Thm22,
            TheoremArg::Thm23 => Theorem::Thm23,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChainArg {
    Geometric,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// The function itself.
    F,
    /// `|f'|^q`, the hypothesis of the bound theorems.
    Dfq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Relative quadrature tolerance (env GEOHH_REL_TOL).
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute quadrature tolerance (env GEOHH_ABS_TOL).
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Panel budget of the adaptive quadrature.
    #[arg(long)]
    pub max_panels: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub check: Check,
    /// Function spec, e.g. `power_shift:s=0.5`, `power:c=2`, `exponential`.
    #[arg(long = "f")]
    pub function: Option<String>,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    pub side: SideArg,
    #[arg(long, value_enum, default_value_t = VariantArg::Derived)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = ChainArg::Geometric)]
    pub chain: ChainArg,
    /// Convexity notion for `verify convexity` with `--target f`.
    #[arg(long, default_value = "s_geometrically_convex")]
    pub kind: String,
    #[arg(long, value_enum, default_value_t = Target::F)]
    pub target: Target,
    /// Sample count for convexity checks.
    #[arg(long, default_value_t = geohh::functions::DEFAULT_CONVEXITY_SAMPLES)]
    pub samples: usize,
    /// Also sample the convexity hypothesis of the bound theorems.
    #[arg(long)]
    pub check_hypothesis: bool,
    #[command(flatten)]
    pub tol: TolArgs,
}

/// Grids are comma lists (`0.1,0.2`) or ranges `start:end:count`.
/// Every option can also come from `--config`; flags win.
#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Flat `key = value` file using the long option names as keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "f")]
    pub function: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    /// Default `thm22`.
    #[arg(long, value_enum)]
    pub theorem: Option<TheoremArg>,
    /// Default `fafb`: one row per grid point.
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Use the grid value of s as the parameter of a power_shift family.
    #[arg(long)]
    pub tie_s: bool,
    /// Skip pairs with a >= b instead of rejecting the grid.
    #[arg(long)]
    pub upper_only: bool,
    #[arg(long)]
    pub check_hypothesis: bool,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub sequential: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; rows go to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Explicit points, comma separated; overrides the range.
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    pub u_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub u_max: f64,
    /// Log-spaced points between `--u-min` and `--u-max`.
    #[arg(long, default_value_t = 17)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
