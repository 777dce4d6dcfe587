//! Command-line front end: coefficient tables, spline evaluation,
//! reproduction runs, identity checks and figure data, written as CSV or text.

mod commands;
pub mod csv;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::special::Order;
use crate::Kind;

pub use commands::{check_reports, figure_tables};
pub use csv::{Cell, CsvTable};

/// Default tolerance of `reproduce`, `reproduce2d` and the derivative line of `check`.
pub const DEFAULT_TOL: f64 = 1e-2;
pub const DEFAULT_HALF_WIDTH: usize = 200;
pub const DEFAULT_CHECK_ALPHAS: [f64; 5] = [0.2, 0.5, 1.0, 1.5, 2.5];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Tolerance(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Tolerance(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fracspline",
    version,
    about = "Fractional B-splines: coefficients, evaluation, monomial reproduction and identity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mask, detail mask and reproduction coefficients for k = 0..terms-1.
    Coeffs(CoeffsArgs),
    /// Spline values over a half-open grid [x0, x1).
    Eval(EvalArgs),
    /// Reconstruct a fractional monomial from spline shifts on [x0, x1).
    Reproduce(ReproduceArgs),
    /// Tensor-product reconstruction on [x0, x1)².
    Reproduce2d(Reproduce2dArgs),
    /// Delta, determinant, convolution and derivative identities per order.
    Check(CheckArgs),
    /// Regenerate the figure datasets into a directory.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Causal,
    Symmetric,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Causal => Kind::Causal,
            KindArg::Symmetric => Kind::Symmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Left end (default 0 for causal, -4 for symmetric).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Right end, excluded.
    #[arg(long, allow_hyphen_values = true, default_value_t = 4.0)]
    pub x1: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Causal)]
    pub kind: KindArg,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Number of rows.
    #[arg(long, default_value_t = 16)]
    pub terms: usize,
    /// Include the 2^{-(alpha+1)} factor in the detail column.
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub normalized: Toggle,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Causal)]
    pub kind: KindArg,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Minimum half-width of explicitly summed terms for truncated series.
    #[arg(long, default_value_t = 64)]
    pub terms: usize,
    /// Target tail bound for truncated series.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Causal)]
    pub kind: KindArg,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Shift half-width of symmetric sums.
    #[arg(long, default_value_t = DEFAULT_HALF_WIDTH)]
    pub half_width: usize,
    /// Exit with status 3 when the maximum error exceeds this.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Reproduce2dArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Causal)]
    pub kind: KindArg,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Order along y (defaults to --alpha).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_HALF_WIDTH)]
    pub half_width: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Orders to check, repeatable or comma separated.
    #[arg(
        long,
        allow_hyphen_values = true,
        value_delimiter = ',',
        default_values_t = DEFAULT_CHECK_ALPHAS
    )]
    pub alpha: Vec<f64>,
    /// Use the normalized detail mask in the delta identity.
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    pub normalized: Toggle,
    /// Tolerance of the derivative relation.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    /// Output directory, created if missing.
    #[arg(long, default_value = "figures")]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_HALF_WIDTH)]
    pub half_width: usize,
}

pub(crate) fn order_arg(flag: &str, alpha: f64) -> Result<Order, CliError> {
    Order::new(alpha).map_err(|e| CliError::Usage(format!("--{flag} {alpha}: {e}")))
}

pub(crate) fn tol_arg(tol: f64) -> Result<f64, CliError> {
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::Usage(format!("--tol {tol}: must be >= 0")));
    }
    Ok(tol)
}

/// Writes to `path`, or to stdout when `None`.
pub(crate) fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coeffs(a) => commands::coeffs(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Reproduce(a) => commands::reproduce(&a),
        Command::Reproduce2d(a) => commands::reproduce2d(&a),
        Command::Check(a) => commands::check(&a),
        Command::Figures(a) => commands::figures(&a),
    }
}

/// Parses `args` and runs the command, mapping failures to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
