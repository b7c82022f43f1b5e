mod commands;
mod config;
mod grid;
mod report;
mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "powser", version, about = "Power series of arithmetic functions near the unit circle")]
pub struct Cli {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Add wall-clock timings to JSON reports.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate an arithmetic function as CSV.
    Sieve(SieveArgs),
    /// Evaluate Σ aₙ e^{−nt} directly.
    Eval(EvalArgs),
    /// Evaluate Σ aₙ e^{−nt} through its inverse Mellin integral.
    Mellin(MellinArgs),
    /// Residuals against the main terms over a t grid.
    Compare(CompareArgs),
    /// Contour height, segment majorants and error envelopes.
    Bounds(BoundsArgs),
    /// Probe tables.
    Probe(ProbeArgs),
}

#[derive(Args, Debug)]
pub struct SieveArgs {
    #[arg(long = "fn")]
    pub fn_name: String,
    #[arg(long)]
    pub limit: u64,
    #[arg(long)]
    pub prefix_sums: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    #[arg(long = "fn")]
    pub fn_name: String,
    #[arg(long, allow_hyphen_values = true)]
    pub t_abs: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_arg_deg: f64,
    #[arg(long)]
    pub prec: Option<u32>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourKind {
    Line,
    Deformed,
}

#[derive(Args, Debug)]
pub struct MellinArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_enum, default_value_t = ContourKind::Line)]
    pub contour: ContourKind,
    /// A number greater than 1, or `auto` for 1 + 1/log(1/|t|).
    #[arg(long, default_value = "auto")]
    pub kappa: String,
    /// Height where the deformed contour leaves the line.
    #[arg(long = "T", default_value_t = 10.0)]
    pub height: f64,
    /// Override C_D in the segment majorants.
    #[arg(long)]
    pub c_d: Option<f64>,
    #[arg(long)]
    pub unsafe_tall_contour: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long = "fn")]
    pub fn_name: String,
    /// `A:B:steps`, log-spaced and inclusive.
    #[arg(long)]
    pub t_grid: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_arg_deg: f64,
    #[arg(long)]
    pub prec: Option<u32>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value = "residue")]
    pub main_term: String,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub t_abs: f64,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// A rational, or `ford`.
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub nu: Option<f64>,
    /// Constant in the Walfisz and Abelian envelopes.
    #[arg(long, default_value = "1")]
    pub c: String,
    /// Function whose Dirichlet series sets C_D.
    #[arg(long = "fn", default_value = "mobius")]
    pub fn_name: String,
    #[arg(long)]
    pub prec: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    FakeAsym,
    RhWindow,
    Delange,
    PrimeAbelian,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long, value_enum)]
    pub kind: ProbeKind,
    /// `A:B:steps`: t for fake-asym and delange, 1 − z for rh-window and prime-abelian.
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    #[arg(long)]
    pub prec: Option<u32>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(p) => RunConfig::from_file(p),
        None => Ok(RunConfig::default()),
    };
    let result = config.and_then(|c| commands::run(&cli.command, &c, cli.timings));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
