//! `ucover`: build, verify and search for coverings, universal cycles and
//! 2-radius sequences from the command line.
//!
//! Exit status is 0 on success, 1 when a verification or search fails, and
//! 2 for invalid arguments or unreadable input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ucover",
    version,
    about = "Coverings, universal cycles and 2-radius sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a minimum covering and what it induces.
    Build(BuildArgs),
    /// Verify a design, universal cycle or radius sequence file.
    Verify(VerifyArgs),
    /// Hill-climb for a 2-radius sequence of a given length.
    Search(SearchArgs),
    /// Exhaustive oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Tabulate bounds and achieved lengths.
    Table(TableArgs),
    /// Inspect, check and repair bundled fixtures.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Covering,
    Ucycle,
    Radius,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "radius")]
    emit: Emit,
    #[arg(long, default_value_t = ucover::construct::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Covering,
    Pbd,
    Gdd,
    Ucycle,
    Radius,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    file: PathBuf,
    /// Covering fixture the universal cycle must traverse.
    #[arg(long)]
    design: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    len: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = ucover::construct::DEFAULT_SEED)]
    seed: u64,
    /// Moves without improvement before a restart [default: 200·len].
    #[arg(long)]
    stall: Option<u64>,
    #[arg(long, default_value_t = 1_000_000)]
    restarts: u64,
    #[arg(long, default_value_t = 200_000_000)]
    max_iterations: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Shortest 2-radius sequence length by exhaustive search.
    F2 {
        #[arg(long)]
        n: usize,
        /// Longest length tried [default: the 1-radius optimum].
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, default_value_t = ucover::radius::DEFAULT_ORACLE_CAP)]
        cap: usize,
    },
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
    /// Build each covering and record the achieved sequence length.
    #[arg(long)]
    run_pipeline: bool,
    #[arg(long)]
    csv: bool,
    #[arg(long, default_value_t = ucover::construct::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[command(subcommand)]
    action: CatalogAction,
    /// Cache directory [default: $UCOVER_CACHE_DIR or ./.ucover-cache].
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// List bundled and cached fixtures.
    List,
    /// Verify every fixture.
    Check {
        /// Check the fixtures as transcribed, before repair.
        #[arg(long)]
        raw: bool,
    },
    /// Repair transcribed fixtures that fail verification.
    Repair {
        /// Write repaired fixtures here, one file per key.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
