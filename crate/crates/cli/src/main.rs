//! `rankprob`: transformations between ranking (disbelief) functions and
//! exact-rational probability distributions, plus brute-force checks of
//! the laws relating them.

mod commands;
mod document;
mod render;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// CLI failure carrying its exit code class: plain input/validation
/// problems exit 1, exceeded enumeration guards exit 3. (Exit 2 is
/// reserved for detected property violations, which are not errors.)
#[derive(Debug)]
pub struct CliError {
    message: String,
    guard: bool,
}

impl CliError {
    pub fn input(message: String) -> Self {
        Self {
            message,
            guard: false,
        }
    }

    pub fn guard(message: String) -> Self {
        Self {
            message,
            guard: true,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.guard {
            3
        } else {
            1
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<rankprob_core::Error> for CliError {
    fn from(e: rankprob_core::Error) -> Self {
        match e {
            rankprob_core::Error::SpaceTooLarge { .. } => Self::guard(e.to_string()),
            _ => Self::input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Conditioning,
    Imaging,
}

#[derive(Parser)]
#[command(
    name = "rankprob",
    version,
    about = "Transformations between ranking (disbelief) functions and exact-rational \
             probability, with exhaustive verification of their laws"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Decimal places for rendered values (round half to even).
    #[arg(long, global = true, default_value_t = 4)]
    pub precision: usize,
}

#[derive(Subcommand)]
pub enum Command {
    /// Transform a probability document into the least coarse congruent
    /// ranking, showing the mass countdown.
    ToKappa {
        /// Input document (stdin when absent or `-`).
        input: Option<PathBuf>,
        /// Rescale masses that do not sum to exactly 1.
        #[arg(long)]
        normalize: bool,
    },
    /// Transform a ranking document into its stratified probability
    /// distribution.
    ToProb {
        input: Option<PathBuf>,
        /// Accept rankings with gaps or a nonzero minimum by densifying.
        #[arg(long)]
        densify: bool,
    },
    /// Transform a ranking document with the exponential-law variant.
    ToProbExp {
        input: Option<PathBuf>,
        #[arg(long)]
        densify: bool,
    },
    /// Apply the epsilon-rule transformation to a probability document.
    EpsRule {
        input: Option<PathBuf>,
        /// Epsilon in (0, 1); overrides the document's `eps` field.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        normalize: bool,
    },
    /// Condition a probability or ranking document on an evidence event.
    Condition {
        input: Option<PathBuf>,
        /// Comma-separated world labels; overrides the document's
        /// `evidence` field.
        #[arg(long)]
        evidence: Option<String>,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        densify: bool,
    },
    /// Image a probability document on an evidence event, moving excluded
    /// mass to the closest retained worlds by rank distance.
    Image {
        input: Option<PathBuf>,
        #[arg(long)]
        evidence: Option<String>,
        /// Ranking document supplying the closeness relation; derived from
        /// the input by mass countdown when absent.
        #[arg(long)]
        closeness: Option<PathBuf>,
        #[arg(long)]
        normalize: bool,
    },
    /// Densify a ranking document: close rank gaps, keep the order.
    Densify { input: Option<PathBuf> },
    /// Per-rank probability bounds of a ranking document.
    Bounds {
        input: Option<PathBuf>,
        #[arg(long)]
        densify: bool,
    },
    /// Acceptance thresholds of a ranking document.
    Threshold {
        input: Option<PathBuf>,
        #[arg(long)]
        densify: bool,
    },
    /// Round-trip a ranking document through probability and back.
    Roundtrip {
        input: Option<PathBuf>,
        #[arg(long)]
        densify: bool,
    },
    /// Run a verification suite; exits 2 when a violation is found.
    Check {
        /// Which law to check: 1 = probability-to-ranking congruence,
        /// 2 = ranking-to-probability congruence (both transforms),
        /// 3 = revision commutes with the transformations.
        #[arg(long)]
        theorem: u8,
        /// Document to check; without it, theorems 2 and 3 sweep all dense
        /// strata vectors and theorem 1 requires --random.
        input: Option<PathBuf>,
        /// Check the epsilon-rule ranking instead of the countdown ranking
        /// (theorem 1).
        #[arg(long)]
        eps: Option<String>,
        /// Restrict theorem 3 to one evidence event.
        #[arg(long)]
        evidence: Option<String>,
        /// Enumeration guard and sweep ceiling.
        #[arg(long)]
        max_n: Option<usize>,
        /// Check this many random distributions instead of a document
        /// (theorem 1).
        #[arg(long)]
        random: Option<u64>,
        /// World count for --random.
        #[arg(long)]
        n: Option<usize>,
        /// Seed for --random.
        #[arg(long)]
        seed: Option<u64>,
        /// Revision rule for theorem 3.
        #[arg(long, value_enum, default_value_t = ModeArg::Conditioning)]
        mode: ModeArg,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        densify: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok((output, outcome)) => {
            print!("{output}");
            match outcome {
                commands::Outcome::Clean => ExitCode::SUCCESS,
                commands::Outcome::ViolationFound => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
