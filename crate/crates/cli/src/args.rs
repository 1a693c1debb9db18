use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bergman", version, about = "Bergman kernels of generalized complex ellipsoids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate K(z, w) on a domain.
    Eval(EvalArgs),
    /// Locate and count zeros of a slice family.
    Zeros(ZerosArgs),
    /// Tabulate a slice kernel over a grid for plotting.
    Locus(LocusArgs),
    /// Run the identity and oracle checks.
    Verify(VerifyArgs),
    /// Classify zero-freeness across a parameter range or exponent grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Axis1,
    Axis2,
    Simplex,
    Mixed,
    K2,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Exponent for the axis1 and axis2 families.
    #[arg(long)]
    pub p: Option<f64>,
    /// Dimension for the simplex and mixed families.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Domain as JSON, or @path to a JSON file.
    #[arg(long)]
    pub domain: String,
    /// Comma-separated complex coordinates, e.g. `0.3,0.1-0.2i`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// Second point; defaults to `z`.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Moduli below this are flagged as zeros.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Also evaluate the monomial series and report the relative difference.
    #[arg(long)]
    pub check_oracle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Rings of the polar grid used to cross-check the closed-form zeros.
    #[arg(long, default_value_t = 64)]
    pub res: usize,
    #[arg(long, default_value_t = bergman::zeros::CERT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LocusArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Points per grid side.
    #[arg(long, default_value_t = 64)]
    pub res: usize,
    /// Fixed second variable for the k2 family.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub y: String,
    /// Half-width of the grid; cells outside this disc are reported as NaN.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Sample the real diameter instead of the square grid.
    #[arg(long)]
    pub real: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of the named suites, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, env = "BERGMAN_SEED", default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep a slice family over `--range` (axis1, axis2, simplex, mixed).
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Family parameter range: `v`, `a..b` or `a..b:step`.
    #[arg(long)]
    pub range: Option<String>,
    /// Number of exponents in an exponent-grid sweep.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p1: Option<String>,
    #[arg(long)]
    pub p2: Option<String>,
    #[arg(long)]
    pub p3: Option<String>,
    #[arg(long)]
    pub p4: Option<String>,
    #[arg(long, default_value_t = 32)]
    pub res: usize,
    #[arg(long, default_value_t = bergman::zeros::CERT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
