//! `drinfeld`: MZV tables, KZ and solver associators, and relation checks.
//!
//! Exit status is 0 when every check passes, 1 when a residual misses its
//! tolerance, and 2 on usage or I/O errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Truncated associators and the zeta relations they satisfy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiple zeta values.
    #[command(subcommand)]
    Mzv(MzvCommand),
    /// The KZ associator built from numerical MZVs.
    #[command(subcommand)]
    Kz(KzCommand),
    /// Exact associators from the linear solver.
    #[command(subcommand)]
    Assoc(AssocCommand),
    /// Relations (A)-(D) between zeta values and mu.
    #[command(subcommand)]
    Relations(RelationsCommand),
}

#[derive(Subcommand, Debug)]
enum MzvCommand {
    /// Prints one value.
    Eval {
        /// Index as `k1,k2,...`; the last part must exceed 1.
        #[arg(long, allow_hyphen_values = true)]
        index: String,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        /// Reuse and extend this cache file.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Fills the cache with every admissible index up to a weight.
    Table {
        #[arg(long)]
        max_weight: usize,
        #[arg(long, default_value_t = drinfeld::mzv::DEFAULT_DIGITS)]
        digits: u32,
        #[arg(long, default_value = "mzv-cache.txt")]
        cache: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct KzArgs {
    #[arg(long)]
    max_weight: usize,
    #[arg(long, default_value_t = 50)]
    digits: u32,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum KzCommand {
    /// Writes the truncated series.
    Build {
        #[command(flatten)]
        kz: KzArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Checks group-likeness, pentagon, hexagons and the 2-cycle relation.
    Check {
        #[command(flatten)]
        kz: KzArgs,
        /// Residuals must stay below 10^-E.
        #[arg(long, default_value_t = 40)]
        tol_exp: u32,
    },
}

#[derive(Subcommand, Debug)]
enum AssocCommand {
    /// Solves degree by degree and writes the series plus a `.dims.json` sidecar.
    Solve {
        #[arg(long)]
        max_weight: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Add hexagon rows for this value of mu^2 (a rational such as `-1` or `3/2`).
        #[arg(long, allow_hyphen_values = true)]
        hexagon_mu2: Option<String>,
        /// Drop the shuffle rows (the result need not be group-like).
        #[arg(long)]
        no_shuffle: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Checks a series file; mu^2 is taken as -24 zeta_phi(2).
    Check {
        file: PathBuf,
        /// Tolerance 10^-E for floating-point files.
        #[arg(long, default_value_t = 40)]
        tol_exp: u32,
    },
}

#[derive(Subcommand, Debug)]
enum RelationsCommand {
    /// Checks relations through a given power of h and writes a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Comma-separated subset of A,B,C,D, or `all`.
    #[arg(long, default_value = "all")]
    which: String,
    /// `kz`, `generic` (solver output) or a series file.
    #[arg(long, default_value = "generic")]
    phi: String,
    #[arg(long, default_value_t = 6)]
    max_weight: usize,
    /// Lower truncation for relation C only.
    #[arg(long)]
    max_weight_c: Option<usize>,
    /// Values of N, comma-separated.
    #[arg(long = "N", default_value = "2,3,4,5", value_delimiter = ',')]
    n: Vec<String>,
    #[arg(long, default_value_t = 50)]
    digits: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    tol_exp: u32,
    /// Reading of the degenerate factor in relation C.
    #[arg(long, default_value = "calibrated")]
    convention: String,
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Mzv(MzvCommand::Eval { index, digits, cache }) => commands::mzv_eval(&index, digits, cache.as_deref()),
        Command::Mzv(MzvCommand::Table { max_weight, digits, cache }) => commands::mzv_table(max_weight, digits, &cache),
        Command::Kz(KzCommand::Build { kz, out }) => commands::kz_build(kz.max_weight, kz.digits, kz.cache.as_deref(), &out),
        Command::Kz(KzCommand::Check { kz, tol_exp }) => commands::kz_check(kz.max_weight, kz.digits, kz.cache.as_deref(), tol_exp),
        Command::Assoc(AssocCommand::Solve { max_weight, seed, hexagon_mu2, no_shuffle, out }) => {
            commands::assoc_solve(max_weight, seed, hexagon_mu2.as_deref(), no_shuffle, &out)
        }
        Command::Assoc(AssocCommand::Check { file, tol_exp }) => commands::assoc_check(&file, tol_exp),
        Command::Relations(RelationsCommand::Verify(args)) => commands::relations_verify(&args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
