//! The `trapred` command line.
//!
//! Exit codes: 0 on success or a clean scan, 1 when a scan finds forbidden
//! trapping sets, 2 on usage, parse, domain or budget errors.

mod commands;

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::ArithMode;
use crate::gf2::DEFAULT_ENUM_DIM;
use crate::oracle::DEFAULT_ORACLE_BUDGET;
use crate::trapscan::DEFAULT_SCAN_WARN;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "trapred",
    version,
    about = "Trapping redundancy bounds, scans and constructions for binary linear codes",
    after_help = "Environment: TRAPRED_SCAN_WARN, TRAPRED_ENUM_LIMIT and TRAPRED_ORACLE_BUDGET \
                  set the defaults of the matching budget flags."
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Subset count above which a scan prints a cost warning.
    #[arg(long, global = true, env = "TRAPRED_SCAN_WARN", default_value_t = DEFAULT_SCAN_WARN)]
    pub scan_warn: u128,

    /// Largest code dimension for which the minimum distance of a matrix file
    /// is computed by enumeration.
    #[arg(long, global = true, env = "TRAPRED_ENUM_LIMIT", default_value_t = DEFAULT_ENUM_DIM)]
    pub enum_limit: u32,

    /// Oracle limit on C(2^(n-k), rows) at any one row count.
    #[arg(long, global = true, env = "TRAPRED_ORACLE_BUDGET", default_value_t = DEFAULT_ORACLE_BUDGET)]
    pub oracle_budget: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Theorem1,
    Lll,
    Corollary2,
    Gv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Certified,
    Auto,
}

impl From<Mode> for ArithMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => ArithMode::Exact,
            Mode::Certified => ArithMode::Certified,
            Mode::Auto => ArithMode::Auto,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a bound from code parameters.
    Bound(BoundArgs),
    /// Scan a parity-check matrix for forbidden trapping sets.
    Scan(ScanArgs),
    /// Build a trapping-set-free parity-check matrix by sampling and repair.
    Construct(ConstructArgs),
    /// Exact trapping redundancy of a tiny code by exhaustive search.
    Oracle(OracleArgs),
    /// Monte Carlo estimate of the expected repair count.
    Estimate(EstimateArgs),
    /// Reproduce the Margulis-parameter bound table.
    Table1(Table1Args),
    /// List the built-in codes.
    Catalog,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(short)]
    pub n: u64,
    #[arg(short)]
    pub k: u64,
    #[arg(short)]
    pub a: Option<u64>,
    #[arg(short)]
    pub b: Option<u64>,
    /// Known minimum distance.
    #[arg(short)]
    pub d: Option<u64>,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Matrix file in alist or dense text format; `-` reads standard input.
    #[arg(long = "in")]
    pub input: String,
    #[arg(short)]
    pub a: usize,
    #[arg(short)]
    pub b: usize,
    /// Stop after this many violations.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Check subsets of size exactly `a` instead of `1..=a`.
    #[arg(long)]
    pub exact_size: bool,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// Catalog name, or a path to a parity-check matrix.
    #[arg(long)]
    pub code: String,
    #[arg(short)]
    pub a: usize,
    #[arg(short)]
    pub b: usize,
    /// Initial sample count (default n - k).
    #[arg(short)]
    pub t: Option<usize>,
    /// Random seed; drawn from the OS and reported when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample exactly n - k rows per attempt, without repair.
    #[arg(long)]
    pub las_vegas: bool,
    #[arg(long, default_value_t = 10_000)]
    pub max_attempts: usize,
    /// Cap on appended rows (default 4(n-k) + 4b * #subsets).
    #[arg(long)]
    pub max_repair: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Catalog name, or a path to a parity-check matrix.
    #[arg(long)]
    pub code: String,
    #[arg(short)]
    pub a: usize,
    #[arg(short)]
    pub b: usize,
    /// Forbid trapping sets of every size up to `a`, not just size `a`.
    #[arg(long)]
    pub collective: bool,
    /// Allow repeated rows.
    #[arg(long)]
    pub multiset: bool,
    /// Largest row count tried (default: the theorem1 bound).
    #[arg(long)]
    pub max_rows: Option<usize>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Catalog name, or a path to a parity-check matrix.
    #[arg(long)]
    pub code: String,
    #[arg(short)]
    pub a: usize,
    #[arg(short)]
    pub b: usize,
    #[arg(short)]
    pub t: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Limit on trials times subsets per trial.
    #[arg(long, default_value_t = crate::construct::DEFAULT_ESTIMATE_BUDGET)]
    pub budget: u128,
}

#[derive(Args, Debug)]
pub struct Table1Args {
    #[arg(long, value_enum, default_value_t = Mode::Certified)]
    pub mode: Mode,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    if let Some(n) = cli.threads {
        // Only the first configuration in a process takes effect.
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            let _ = writeln!(stderr, "warning: --threads ignored: {e}");
        }
    }
    let outcome = commands::dispatch(&cli, stdin, stdout, stderr);
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
