//! `orelt` command-line front end.

pub mod commands;
pub mod parse;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{execute, Outcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: parse::ParseError },
    #[error(transparent)]
    Core(#[from] orelt_core::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = "orelt", version, about = "One-relator groups with torsion: classifiers, solvers, certificates")]
pub struct Cli {
    /// Omit wall-clock timings so reports are byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timings: bool,
    /// Exit with status 1 when a yes/no question is answered negatively.
    #[arg(long, global = true)]
    pub fail_on_negative: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free factors, ends, order of the relator root, Fuchsian test.
    Classify(ClassifyArgs),
    /// Word problem: is `w` trivial, or `w = other`?
    Wp(WpArgs),
    /// Whitehead-minimal form of a word in the free group.
    Minimize(FreeWordArgs),
    /// Is the word primitive in the free group?
    Primitive(FreeWordArgs),
    /// Exact order of an element, with certificates.
    Order(OrderArgs),
    /// Count or list homomorphisms to a symmetric group.
    Quotients(QuotientArgs),
    /// Search for a non-malnormality witness for `<x>`.
    Malnormal(MalnormalArgs),
    /// Is `w` in the normal closure of the relator root?
    Tmember(TmemberArgs),
    /// Graph-of-groups tools.
    #[command(subcommand)]
    Gog(GogCommand),
    /// Exhaustive property harnesses.
    #[command(subcommand)]
    Harness(HarnessCommand),
}

#[derive(Debug, Args)]
pub struct PresentationArg {
    /// Presentation file (`gens:` / `rel:` lines).
    #[arg(short = 'p', long = "presentation")]
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub pres: PresentationArg,
    /// Largest free-group rank the Whitehead enumeration accepts.
    #[arg(long, default_value_t = orelt_core::whitehead::DEFAULT_MAX_RANK)]
    pub max_rank: usize,
    /// Largest symmetric group used for order certificates.
    #[arg(long, default_value_t = orelt_core::quotients::DEFAULT_DEGREE_CAP)]
    pub max_degree: usize,
}

#[derive(Debug, Args)]
pub struct WpArgs {
    #[command(flatten)]
    pub pres: PresentationArg,
    #[arg(short = 'w', long)]
    pub word: String,
    /// Compare against this word instead of the identity.
    #[arg(long)]
    pub other: Option<String>,
}

#[derive(Debug, Args)]
pub struct FreeWordArgs {
    /// Take generator names from this presentation (its relators are ignored).
    #[arg(short = 'p', long = "presentation", conflicts_with = "gens")]
    pub path: Option<PathBuf>,
    /// Whitespace-separated generator names.
    #[arg(long)]
    pub gens: Option<String>,
    #[arg(short = 'w', long)]
    pub word: String,
    #[arg(long, default_value_t = orelt_core::whitehead::DEFAULT_MAX_RANK)]
    pub max_rank: usize,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    #[command(flatten)]
    pub pres: PresentationArg,
    #[arg(short = 'w', long)]
    pub word: String,
    /// Largest power tried for the Dehn upper bound.
    #[arg(long, default_value_t = 12)]
    pub bound: u64,
    #[arg(long, default_value_t = orelt_core::quotients::DEFAULT_DEGREE_CAP)]
    pub max_degree: usize,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub pres: PresentationArg,
    /// Degree of the symmetric group.
    #[arg(short = 'k', long)]
    pub degree: usize,
    /// List the homomorphisms, not just count them.
    #[arg(long)]
    pub list: bool,
    #[arg(long, default_value_t = orelt_core::quotients::DEFAULT_DEGREE_CAP)]
    pub degree_cap: usize,
}

#[derive(Debug, Args)]
pub struct MalnormalArgs {
    #[command(flatten)]
    pub pres: PresentationArg,
    /// Generator `x` of the cyclic subgroup.
    #[arg(short = 'w', long)]
    pub word: String,
    #[arg(long, default_value_t = 5)]
    pub max_y_length: usize,
    #[arg(long, default_value_t = 3)]
    pub max_power: u32,
    #[arg(long, default_value_t = 6)]
    pub max_coset_power: u32,
}

#[derive(Debug, Args)]
pub struct TmemberArgs {
    #[command(flatten)]
    pub pres: PresentationArg,
    #[arg(short = 'w', long)]
    pub word: String,
    /// Longest conjugator tried.
    #[arg(long, default_value_t = 2)]
    pub max_conjugator_length: usize,
    /// Most conjugates of the root in a product.
    #[arg(long, default_value_t = 2)]
    pub max_conjugates: u32,
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
}

#[derive(Debug, Subcommand)]
pub enum GogCommand {
    /// Structural and JSJ-shape checks.
    Validate {
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
    },
    /// Fundamental-group presentation.
    Pi1 {
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        /// Also eliminate redundant generators and print the certificate.
        #[arg(long)]
        simplify: bool,
    },
    /// Replay a Tietze certificate and compare with a target.
    Verify {
        /// Start from the fundamental group of this graph...
        #[arg(short = 'g', long = "graph", required_unless_present = "source", conflicts_with = "source")]
        graph: Option<PathBuf>,
        /// ...or from this presentation.
        #[arg(short = 's', long = "source")]
        source: Option<PathBuf>,
        #[arg(short = 't', long = "target")]
        target: PathBuf,
        #[arg(short = 'c', long = "certificate")]
        certificate: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum HarnessCommand {
    /// Ends dichotomy over all non-power cyclic roots up to a length.
    Ends {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 6)]
        max_length: usize,
        #[arg(long, default_value_t = 2)]
        exponent: u32,
    },
}

/// Runs the command and prints its report. Returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{text}");
            if outcome.negative && (cli.fail_on_negative || outcome.always_fail_on_negative) {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
