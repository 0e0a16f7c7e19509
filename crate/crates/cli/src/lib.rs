//! Command-line front end: operators are read from JSON files, results are written as a
//! JSON run report.
//!
//! Exit codes: 0 success, 2 singular block, 3 input or usage error, 4 vanishing overlap
//! in a normalized contraction sum, 5 numerical failure (including a failed `verify`).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermigauss::Error;
use fermigauss_fockoracle::OracleError;

mod commands;
pub mod format;
mod oracle;
pub mod report;
mod verify;

pub use report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "fermigauss", version, about = "Fermionic Gaussian operators: factorizations, overlaps and correlators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor an operator in normal, antinormal or five-factor form.
    Decompose(DecomposeArgs),
    /// Compose two quadratic operators, F_A F_B.
    Compose(ComposeArgs),
    /// Matrix element <bra| F_2^dag F_1 |ket>.
    Overlap(OverlapArgs),
    /// Correlator <bra| F_2^dag A F_1 |ket> of an operator string A.
    Correlate(CorrelateArgs),
    /// Same as `correlate --expand`.
    Wick(CorrelateArgs),
    /// Canonical-permutation scan of the transfer-matrix blocks.
    CpScan(CpScanArgs),
    /// Check every formula on the operator against the dense oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Normal,
    Antinormal,
    Generalized,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "normal")]
    pub form: Form,
    /// Write the factors here instead of embedding them in the report only.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Apply the canonical permutation on these 1-based sites first, e.g. "1,3".
    #[arg(long, value_name = "SITES")]
    pub cp: Option<String>,
    /// Factor M + eps D for the seeded direction D when the block is singular.
    #[arg(long)]
    pub epsilon: bool,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[arg(long, num_args = 2, required = true, value_names = ["A", "B"])]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Ket operator F_1.
    #[arg(long)]
    pub op: PathBuf,
    /// Bra operator F_2; identity when absent.
    #[arg(long)]
    pub op2: Option<PathBuf>,
    #[arg(long)]
    pub bra: String,
    #[arg(long)]
    pub ket: String,
    /// Also evaluate with the dense oracle and report the deviation.
    #[arg(long)]
    pub verify: bool,
    /// Seed of the epsilon direction.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OverlapArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Force the epsilon-regularized evaluation.
    #[arg(long, conflicts_with = "cp_magnitude")]
    pub epsilon: bool,
    /// Force the canonical-permutation magnitude (sign not determined).
    #[arg(long)]
    pub cp_magnitude: bool,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Operator string such as "c1 cd2 c3" (cd = creation, 1-based sites).
    #[arg(long)]
    pub string: String,
    /// Also print the contraction term table.
    #[arg(long)]
    pub expand: bool,
}

#[derive(Debug, Args)]
pub struct CpScanArgs {
    #[arg(long)]
    pub op: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub op: PathBuf,
    #[arg(long, default_value_t = 6)]
    pub max_sites: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("{failed} verification check(s) failed")]
    VerifyFailed { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => match e {
                Error::SingularBlock { .. } | Error::UnsupportedInstance => 2,
                Error::ZeroOverlap { .. } => 4,
                Error::InvalidGenerator { .. }
                | Error::SiteMismatch { .. }
                | Error::SiteOutOfRange { .. }
                | Error::DuplicateSite { .. }
                | Error::InvalidConfig(_)
                | Error::InvalidOperator(_)
                | Error::NotQuadratic => 3,
                _ => 5,
            },
            CliError::Io { .. } | CliError::Parse(_) | CliError::Usage(_) => 3,
            CliError::Oracle(OracleError::TooManySites { .. }) => 3,
            CliError::Oracle(_) | CliError::VerifyFailed { .. } => 5,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "singular",
            3 => "input",
            4 => "zero-overlap",
            _ => "numerical",
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("fermigauss".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome { code, stdout: text, stderr: String::new() } } else { Outcome { code, stdout: String::new(), stderr: text } };
        }
    };
    commands::dispatch(cli.command, args)
}
