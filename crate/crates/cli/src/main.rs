mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppt_core::linalg::DEFAULT_TOL;
use ppt_core::sampling::{Method, DEFAULT_BUDGET, DEFAULT_COND_CAP, DEFAULT_RANK};
use ppt_core::verify::DEFAULT_HUNT_BUDGET;

/// Exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ppt-blocks",
    version,
    about = "Certify PPT 2x2 block matrices and verify the inequalities they satisfy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// PSD, PPT and Schur-complement verdicts for one block (exit 0 iff PPT).
    Check(CheckArgs),
    /// Run verifiers over sampled blocks or blocks read from a file.
    Verify(VerifyArgs),
    /// Emit seeded samples as JSON lines.
    Sample(SampleArgs),
    /// Search for violations of s_j(X) <= s_j((A+B)/2), or replay a stored one.
    Hunt(HuntArgs),
    /// Run the invariant suite at reduced size.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpecArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value = "ppt_separable", value_parser = parse_method)]
    pub method: Method,
    /// Rank of the separable sampler.
    #[arg(long, default_value_t = DEFAULT_RANK)]
    pub r: usize,
    /// Draw budget of the rejection sampler.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Condition-number cap of the `pd` sampler.
    #[arg(long, default_value_t = DEFAULT_COND_CAP)]
    pub cond_cap: f64,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Blocks to verify: one JSON block, an array of blocks, or JSON lines.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Comma-separated verifier names.
    #[arg(long, value_name = "NAME[,NAME...]", conflicts_with = "all")]
    pub only: Option<String>,
    /// Run every verifier.
    #[arg(long)]
    pub all: bool,
    /// Functional for lieb_gm and norm for norm_chain / hiroshima, e.g. kyfan:2.
    #[arg(long, value_name = "SPEC")]
    pub norm: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct HuntArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub j: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Candidate evaluations, counting hill-climbing moves.
    #[arg(long, default_value_t = DEFAULT_HUNT_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = DEFAULT_RANK)]
    pub r: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Re-certify a stored block (or a hunt report containing one).
    #[arg(long, value_name = "PATH")]
    pub replay: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let result = match cli.command {
        Command::Check(a) => commands::check(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Sample(a) => commands::sample(&a),
        Command::Hunt(a) => commands::hunt(&a),
        Command::Selftest(a) => commands::selftest(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
