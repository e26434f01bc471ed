//! `bandit-lb` command-line front end.

mod commands;
mod inputs;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bandit_lb::game::FeedbackMode;

#[derive(Debug, Parser)]
#[command(
    name = "bandit-lb",
    version,
    about = "Lower-bound experiments for bandit-feedback learning over GF(p)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the exact probability and bucket sweeps.
    Lemma(LemmaArgs),
    /// Search for a vector that spreads a coefficient set evenly over buckets.
    Findu(FinduArgs),
    /// Play one game and write its transcript.
    Play(PlayArgs),
    /// Re-verify a transcript file.
    Replay(ReplayArgs),
    /// Exact optimal mistake bounds for a small class.
    Opt(OptArgs),
    /// Tabulate the guaranteed number of forced mistakes.
    Bound(BoundArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Marginal,
    Conditional,
    Joint,
    Covariance,
    Variance,
    Multiples,
    Falselemma,
    Balanced,
    /// Every sweep except `falselemma`.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Standard,
    Bandit,
}

impl From<Mode> for FeedbackMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Standard => FeedbackMode::Standard,
            Mode::Bandit => FeedbackMode::Bandit,
        }
    }
}

#[derive(Debug, clap::Args)]
struct LemmaArgs {
    #[arg(long, value_enum)]
    which: Which,
    /// Primes: a list such as `3,5,7` or a range such as `3..11`.
    #[arg(long)]
    p: String,
    /// Dimensions, same syntax as `--p`.
    #[arg(long)]
    n: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled pairs (joint) or random subsets (variance, multiples, balanced).
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Sampling budget per set for `balanced`.
    #[arg(long, default_value_t = 64)]
    budget: u64,
    /// Decide `balanced` by scanning every u instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, clap::Args)]
struct FinduArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    /// File with one member of S per line; defaults to all of {1..p-1}^n.
    set: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 64)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scan every u when sampling fails and p^n is small.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, clap::Args)]
struct PlayArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    mode: Mode,
    /// `subspace`, `plurality` or `random:<seed>`.
    #[arg(long)]
    learner: String,
    /// `basis-adversary`, `lemma4-adversary` or `random:<seed>`.
    #[arg(long)]
    adversary: String,
    /// Seed for the adversary's query search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    max_rounds: usize,
    /// Transcript destination (JSON lines).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, clap::Args)]
struct ReplayArgs {
    transcript: std::path::PathBuf,
    /// Linear class dimensions, if `--class` is not given.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    /// `fl:p:n`, `const:k` or a class file.
    #[arg(long)]
    class: Option<String>,
    /// Mode assumed for an empty transcript.
    #[arg(long, value_enum, default_value_t = Mode::Standard)]
    mode: Mode,
}

#[derive(Debug, clap::Args)]
struct OptArgs {
    /// `fl:p:n`, `const:k` or a class file.
    #[arg(required_unless_present = "class_flag")]
    class: Option<String>,
    #[arg(long = "class", id = "class_flag", conflicts_with = "class")]
    class_flag: Option<String>,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, clap::Args)]
struct BoundArgs {
    /// Primes: a list such as `5,7` or a range such as `5..101`.
    #[arg(long)]
    p: String,
    /// Dimensions, same syntax as `--p`.
    #[arg(long)]
    n: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

/// Process outcome; the discriminant is the exit code.
#[derive(Debug)]
enum Failure {
    /// A search ran out of budget, a sweep found violations, or a bound failed.
    Check(String),
    Usage(String),
    Protocol(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Protocol(_) => 3,
        }
    }
}

impl From<bandit_lb::Error> for Failure {
    fn from(e: bandit_lb::Error) -> Self {
        use bandit_lb::Error;
        match e {
            Error::ProtocolViolation { .. } => Failure::Protocol(e.to_string()),
            Error::BoundViolated { .. } => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Lemma(a) => commands::lemma(a),
        Command::Findu(a) => commands::findu(a),
        Command::Play(a) => commands::play(a),
        Command::Replay(a) => commands::replay(a),
        Command::Opt(a) => commands::opt(a),
        Command::Bound(a) => commands::bound(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Check(m) => eprintln!("check failed: {m}"),
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Protocol(m) => eprintln!("{m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
