mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mfcore::grid::DEFAULT_SEED;
use mfcore::spaces::DATA_DIR_ENV;

#[derive(Parser, Debug)]
#[command(name = "mfcheck", version, about = "Exact checks of newform/oldform theory on Γ0(N)")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Seed for every randomized step.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,

    /// Directory with basis fixtures for levels the generator cannot reach.
    #[arg(long, env = DATA_DIR_ENV, global = true)]
    pub data_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct SpaceArgs {
    /// Weight (even, at least 2).
    #[arg(long)]
    pub k: u32,
    /// Level.
    #[arg(long = "N", alias = "n")]
    pub n: u64,
    /// Number of coefficients beyond c_0 (defaults depend on the command).
    #[arg(long)]
    pub prec: Option<usize>,
    /// Use the full space M_k instead of the cusp space S_k.
    #[arg(long)]
    pub full: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions of M_k, S_k and the Eisenstein space, with Γ0(N) invariants.
    Dims {
        #[arg(long)]
        k: u32,
        #[arg(long = "N", alias = "n")]
        n: u64,
    },
    /// Cusp representatives of Γ0(N) with widths.
    Cusps {
        #[arg(long = "N", alias = "n")]
        n: u64,
    },
    /// Echelon basis of S_k (or M_k with --full).
    Basis(SpaceArgs),
    /// Hecke matrices T_m on S_k (or M_k with --full).
    Hecke {
        #[command(flatten)]
        space: SpaceArgs,
        /// Indices m prime to N (comma separated).
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Check T_p T_q = T_q T_p on every grid space instead.
        #[arg(long)]
        grid: bool,
    },
    /// Orbit inventory of S_k(Γ0(N)) with minimal levels.
    Newforms {
        #[arg(long)]
        k: u32,
        #[arg(long = "N", alias = "n")]
        n: u64,
        /// Primes prime to N (default: p <= Sturm bound).
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Theorem 1: K_0(N) equals the sum of the images i_p of level N/p.
    VerifyT1 {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long = "N", alias = "n")]
        n: Option<u64>,
        #[arg(long)]
        prec: Option<usize>,
        /// Check the M_k version instead of the cusp-form version.
        #[arg(long)]
        full: bool,
        /// Include the two echelon bases in the report.
        #[arg(long)]
        bases: bool,
        /// Run the whole grid (both versions).
        #[arg(long)]
        grid: bool,
    },
    /// Theorem 2 at level M, plus almost-all checks on transported orbits.
    VerifyT2 {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long = "M", alias = "m")]
        m: Option<u64>,
        /// Primes prime to M (default: p <= Sturm bound).
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long)]
        grid: bool,
    },
    /// Multiplicity one on S_k(Γ0(N))/K_0(N).
    MultOne {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long = "N", alias = "n")]
        n: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long)]
        grid: bool,
    },
    /// Randomized checks of the two tensor-product lemmas.
    LemmasFuzz {
        #[arg(long, default_value_t = 500)]
        iters: usize,
    },
    /// Validate a basis file.
    Ingest {
        #[arg(long)]
        path: PathBuf,
    },
    /// Write a basis file.
    Export {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        path: PathBuf,
    },
    /// Rank and round-trip checks of every grid space.
    Spaces,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(output::EXIT_USAGE),
            };
        }
    };
    ExitCode::from(commands::run(&cli))
}
