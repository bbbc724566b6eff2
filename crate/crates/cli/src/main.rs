//! Command-line front end: entropy reports, Monte-Carlo oracle validation,
//! Schur-concavity suites, and figure datasets.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use wehrl::RngSeed;

mod commands;
mod input;
mod output;

use commands::Config;

/// Exit-code taxonomy: one code per failure class, for scriptable gating.
#[derive(Debug)]
pub enum Failure {
    /// Unparseable input or invalid configuration (exit 2).
    Parse(String),
    /// A state violated its invariants (exit 3).
    Invariant(String),
    /// A Monte-Carlo check strayed beyond the sigma gate (exit 4).
    Oracle(String),
    /// File input/output failed (exit 5).
    Io(String),
    /// A Schur-concavity violation was detected (exit 6).
    Schur(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Oracle(_) => 4,
            Failure::Io(_) => 5,
            Failure::Schur(_) => 6,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m)
            | Failure::Invariant(m)
            | Failure::Oracle(m)
            | Failure::Io(m)
            | Failure::Schur(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Entropy report for an input state (default q grid {0.5, 1, 2, 5, 10})
    Compute,
    /// Entropy report on a dense q grid (default 50 points in [0.1, 20])
    Scan,
    /// Monte-Carlo estimates against closed forms; exit 4 beyond 4 sigma
    Oracle,
    /// Schur-concavity suites; exit 6 on any violation
    Schur,
    /// Deterministic CSV datasets fig1.csv .. fig4.csv
    Figures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "wehrl",
    version,
    about = "Husimi moments, Wehrl entropy, subentropy and related monotones"
)]
struct Cli {
    /// What to run
    #[arg(long, value_enum)]
    command: Command,

    /// Input state file: {"spectrum":[..]} or {"density":{"re":[[..]],"im":[[..]]}}
    /// or {"bipartite":{"re":[[..]],"im":[[..]]}}
    #[arg(long)]
    input: Option<PathBuf>,

    /// Output file (reports, oracle, schur) or directory (figures); stdout
    /// when omitted
    #[arg(long)]
    output: Option<PathBuf>,

    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Moment order q; repeat for a grid
    #[arg(long = "q")]
    q: Vec<f64>,

    /// Monte-Carlo sample count (oracle)
    #[arg(long, default_value_t = 100_000)]
    samples: u64,

    /// RNG seed; identical seeds give byte-identical outputs
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Dimension; repeat for several (schur), first one is used by oracle
    #[arg(long = "dims")]
    dims: Vec<usize>,

    /// Majorization pairs per dimension (schur)
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
}

const COMPUTE_DEFAULT_GRID: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];

fn scan_default_grid() -> Vec<f64> {
    // 50 points, linear in [0.1, 20]
    (0..50)
        .map(|i| 0.1 + i as f64 * (20.0 - 0.1) / 49.0)
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.samples < 1_000 && cli.command == Command::Oracle {
        return Err(Failure::Parse(format!(
            "--samples must be at least 1000 for oracle runs, got {}",
            cli.samples
        )));
    }
    let cfg = Config {
        input: cli.input,
        output: cli.output,
        format: cli.format,
        q_grid: commands::parse_orders(&cli.q)?,
        samples: cli.samples,
        seed: RngSeed(cli.seed),
        dims: cli.dims,
        pairs: cli.pairs,
    };
    match cli.command {
        Command::Compute => commands::cmd_compute(&cfg, &COMPUTE_DEFAULT_GRID),
        Command::Scan => commands::cmd_compute(&cfg, &scan_default_grid()),
        Command::Oracle => commands::cmd_oracle(&cfg),
        Command::Schur => commands::cmd_schur(&cfg),
        Command::Figures => commands::cmd_figures(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
