//! Command-line front end for `envycut-core`: instance files, solvers,
//! generators, the moving-knife simulator and scaling benchmarks.

pub mod bench;
pub mod commands;
pub mod error;
pub mod json;

use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{RowAlgo, Suite, SuiteArgs};
use crate::error::CliError;
use crate::json::{GenKind, Q};

/// Largest supported grid size.
pub const MAX_N: u32 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Dnc,
    Brute,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Dnc => "dnc",
            Algo::Brute => "brute",
        }
    }
}

fn rational(text: &str) -> Result<Q, String> {
    envycut_core::rational::parse(text).map(Q).ok_or_else(|| format!("{text:?} is not a rational (p/q)"))
}

#[derive(Debug, Parser)]
#[command(name = "envycut", version, about = "Approximate envy-free cake cutting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Find an approximately envy-free division for d+1 players.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Grid size N; dnc needs a power of two.
        #[arg(long, conflicts_with = "epsilon")]
        n: Option<u32>,
        /// Target envy; N = ceil(K / epsilon) rounded up to a power of two.
        #[arg(long, value_parser = rational)]
        epsilon: Option<Q>,
        /// Lipschitz constant K; defaults to the largest density in the instance.
        #[arg(long, value_parser = rational)]
        k: Option<Q>,
        #[arg(long, value_enum, default_value = "dnc")]
        algo: Algo,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Three-player solver with O(log^2 N) queries.
    Solve3 {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, conflicts_with = "epsilon")]
        n: Option<u32>,
        #[arg(long, value_parser = rational)]
        epsilon: Option<Q>,
        #[arg(long, value_parser = rational)]
        k: Option<Q>,
        /// Include the per-round bisection trace.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate a 2D BROUWER or direction-preserving instance.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the three-player moving-knife procedure.
    Stromquist {
        #[arg(long, conflicts_with = "adversary", required_unless_present = "adversary")]
        instance: Option<PathBuf>,
        /// Adversarial family member, as `x=<p/q>,delta=<p/q>`.
        #[arg(long)]
        adversary: Option<String>,
        /// Random value queries comparing C with C_x.
        #[arg(long, requires = "adversary")]
        queries: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a solve report against its instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Query-scaling benchmarks as CSV.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        d: Option<usize>,
        /// Comma-separated powers of two.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<u32>>,
        /// Seeds per size.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
        /// Per-row timeout in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Rows run in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Kuhn cells of a small simplex with vertex labels.
    Cells {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: u32,
    },
    #[command(hide = true)]
    BenchRow {
        #[arg(long, value_enum)]
        algo: RowAlgo,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        seed: u64,
    },
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Solve { instance, n, epsilon, k, algo, report } => {
            commands::solve(commands::SolveArgs { instance: &instance, n, epsilon, k, algo, report: report.as_deref() })
        }
        Cmd::Solve3 { instance, n, epsilon, k, trace, report } => commands::solve3_cmd(commands::Solve3Args {
            instance: &instance,
            n,
            epsilon,
            k,
            trace,
            report: report.as_deref(),
        }),
        Cmd::Gen { kind, n, seed, out } => commands::gen(kind, n, seed, out.as_deref()),
        Cmd::Stromquist { instance, adversary, queries, seed, report } => {
            commands::stromquist(commands::StromquistArgs {
                instance: instance.as_deref(),
                adversary: adversary.as_deref(),
                queries,
                seed,
                report: report.as_deref(),
            })
        }
        Cmd::Verify { instance, solution, report } => commands::verify(&instance, &solution, report.as_deref()),
        Cmd::Bench { suite, d, sizes, seeds, seed_base, timeout, jobs, out } => {
            if !(timeout > 0.0 && timeout.is_finite()) {
                return Err(CliError::Usage("--timeout must be positive".into()));
            }
            let args = SuiteArgs { suite, d, sizes, seeds, seed_base, timeout: Duration::from_secs_f64(timeout), jobs };
            commands::write_output(out.as_deref(), &bench::run_suite(&args)?)
        }
        Cmd::Cells { d, n } => commands::write_output(None, &commands::cells(d, n)?),
        Cmd::BenchRow { algo, d, n, seed } => {
            let row = bench::run_row(algo, d, n, seed)?;
            commands::write_output(None, &bench::row_csv(&row, false)?)
        }
    }
}
