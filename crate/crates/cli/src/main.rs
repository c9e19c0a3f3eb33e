//! Workbench for the Gaussian double-barrier well
//! V(x) = (x^2 - 2J) exp(-lambda x^2) + 2J: determinant-quantization
//! sequences, rotated Rayleigh-Ritz scans, slope checks and
//! cross-method comparison.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence.

mod cmd_compare;
mod cmd_fig;
mod cmd_hf;
mod cmd_rpm;
mod cmd_rr;
mod common;
mod records;
mod refdata;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use doublewell_core::riccati::Parity;

use common::CliResult;
use records::OutputFormat;

#[derive(Parser)]
#[command(name = "doublewell", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Determinant-quantization (Riccati series) drivers
    #[command(subcommand)]
    Rpm(RpmCommand),
    /// Rotated Rayleigh-Ritz drivers
    #[command(subcommand)]
    Rr(RrCommand),
    /// Slope checks dE/dJ
    #[command(subcommand)]
    Hf(HfCommand),
    /// Figure-data emitters
    #[command(subcommand)]
    Fig(FigCommand),
    /// Match two record files and report per-pair distances
    Compare(CompareOpts),
}

#[derive(Subcommand)]
enum RpmCommand {
    /// Track root sequences from explicit seeds
    Find(RpmFindOpts),
    /// Reproduce a bundled reference table and report matched digits
    Table(RpmTableOpts),
}

#[derive(Subcommand)]
enum RrCommand {
    /// Scan the rotation angle and report stabilization plateaus
    Scan(RrScanOpts),
}

#[derive(Subcommand)]
enum HfCommand {
    /// Slopes of all bound states (and optionally one resonance)
    Check(HfOpts),
}

#[derive(Subcommand)]
enum FigCommand {
    /// Signed Im E of one above-critical plateau over a grid of J
    ImVsJ(FigOpts),
}

#[derive(Args)]
struct PotentialOpts {
    /// Well-depth parameter (decimal string, parsed at working precision)
    #[arg(long = "J", default_value = "0.8")]
    j: String,
    /// Gaussian width parameter
    #[arg(long, default_value = "0.1")]
    lambda: String,
}

#[derive(Args)]
struct OutputOpts {
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RpmFindOpts {
    #[command(flatten)]
    potential: PotentialOpts,
    /// even | odd
    #[arg(long, default_value = "even")]
    parity: String,
    /// Working precision in decimal digits
    #[arg(long, default_value_t = 120)]
    digits: u32,
    /// Largest determinant dimension
    #[arg(long = "Dmax", default_value_t = 34)]
    d_max: usize,
    /// Degree-difference index of the determinant family
    #[arg(long, default_value_t = 0)]
    d: usize,
    /// Seed energy `re` or `re,im`; repeatable
    #[arg(long = "seed", required = true, allow_hyphen_values = true)]
    seeds: Vec<String>,
    /// Acceptance tolerance on the last sequence step
    #[arg(long, default_value = "1e-20")]
    tol: String,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct RpmTableOpts {
    /// Which bundled table to reproduce
    #[arg(value_parser = clap::value_parser!(u8))]
    table: u8,
    /// Working precision floor in decimal digits (rows may raise it)
    #[arg(long, default_value_t = 120)]
    digits: u32,
    /// Basis size for the rows delegated to the Rayleigh-Ritz lane
    #[arg(long = "N", default_value_t = 80)]
    n_basis: usize,
    /// Basis length-scale for the delegated rows
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Raise the dimension ceiling for the below-critical rows
    #[arg(long, default_value_t = false)]
    deep: bool,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct RrScanOpts {
    #[command(flatten)]
    potential: PotentialOpts,
    /// Basis size
    #[arg(long = "N", default_value_t = 80)]
    n_basis: usize,
    #[arg(long, default_value_t = 0.55)]
    theta_min: f64,
    #[arg(long, default_value_t = 0.95)]
    theta_max: f64,
    #[arg(long, default_value_t = 0.005)]
    theta_step: f64,
    /// Basis length-scale
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Record file (JSON) to emit per-angle log10 distances against
    #[arg(long)]
    against: Option<PathBuf>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct HfOpts {
    #[command(flatten)]
    potential: PotentialOpts,
    /// Central-difference step in J
    #[arg(long = "dJ", default_value = "1e-3")]
    dj: String,
    #[arg(long, default_value_t = 120)]
    digits: u32,
    #[arg(long = "Dmax", default_value_t = 40)]
    d_max: usize,
    #[arg(long, default_value = "1e-20")]
    tol: String,
    /// Complex seed `re,im` for an additional resonance slope
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct FigOpts {
    #[arg(long = "J-min", default_value_t = 0.6)]
    j_min: f64,
    #[arg(long = "J-max", default_value_t = 1.4)]
    j_max: f64,
    #[arg(long = "J-step", default_value_t = 0.05)]
    j_step: f64,
    /// Which above-critical plateau to follow (0 = lowest real part)
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, default_value = "0.1")]
    lambda: String,
    #[arg(long = "N", default_value_t = 80)]
    n_basis: usize,
    #[arg(long, default_value_t = 0.005)]
    theta_step: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareOpts {
    /// First record file (JSON)
    left: PathBuf,
    /// Second record file (JSON)
    right: PathBuf,
    /// Matching radius in the complex energy plane
    #[arg(long, default_value_t = 1e-3)]
    radius: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Rpm(RpmCommand::Find(opts)) => {
            let parity: Parity = opts
                .parity
                .parse()
                .map_err(|e: doublewell_core::Error| common::CliError::Usage(e.to_string()))?;
            cmd_rpm::cmd_find(&cmd_rpm::FindArgs {
                j: opts.potential.j,
                lambda: opts.potential.lambda,
                parity,
                digits: opts.digits,
                d_max: opts.d_max,
                d: opts.d,
                seeds: opts.seeds,
                tol: opts.tol,
                format: opts.output.format,
                out: opts.output.out,
            })
        }
        Command::Rpm(RpmCommand::Table(opts)) => cmd_rpm::cmd_table(&cmd_rpm::TableArgs {
            table: opts.table,
            digits: opts.digits,
            n_basis: opts.n_basis,
            omega: opts.omega,
            deep: opts.deep,
            format: opts.output.format,
            out: opts.output.out,
        }),
        Command::Rr(RrCommand::Scan(opts)) => cmd_rr::cmd_scan(&cmd_rr::ScanArgs {
            j: opts.potential.j,
            lambda: opts.potential.lambda,
            n_basis: opts.n_basis,
            theta_min: opts.theta_min,
            theta_max: opts.theta_max,
            theta_step: opts.theta_step,
            omega: opts.omega,
            against: opts.against,
            format: opts.output.format,
            out: opts.output.out,
        }),
        Command::Hf(HfCommand::Check(opts)) => cmd_hf::cmd_check(&cmd_hf::HfArgs {
            j: opts.potential.j,
            lambda: opts.potential.lambda,
            dj: opts.dj,
            digits: opts.digits,
            d_max: opts.d_max,
            tol: opts.tol,
            seed: opts.seed,
            format: opts.output.format,
            out: opts.output.out,
        }),
        Command::Fig(FigCommand::ImVsJ(opts)) => cmd_fig::cmd_im_vs_j(&cmd_fig::FigArgs {
            j_min: opts.j_min,
            j_max: opts.j_max,
            j_step: opts.j_step,
            index: opts.index,
            lambda: opts.lambda,
            n_basis: opts.n_basis,
            theta_step: opts.theta_step,
            omega: opts.omega,
            out: opts.out,
        }),
        Command::Compare(opts) => cmd_compare::cmd_compare(&cmd_compare::CompareArgs {
            left: opts.left,
            right: opts.right,
            radius: opts.radius,
            out: opts.out,
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version are not usage errors
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}
