//! `discount-osc`: tables, plots and self-checks for the discounted game and
//! its Hamilton-Jacobi counterpart.

mod commands;
mod output;
mod plot;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discount_osc::shapley::TruncationRule;
use discount_osc::ExactQuad;

#[derive(Parser, Debug)]
#[command(name = "discount-osc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Values along the two discount sequences λ_n and μ_n = λ_n/2.
    Sequences(SequencesArgs),
    /// Values for an explicit list of discount factors.
    Sweep(SweepArgs),
    /// Run the invariant checks and print a pass/fail table.
    Verify(VerifyArgs),
    /// Finite-difference solve of the discounted equation against the exact solution.
    Pde(PdeArgs),
    /// Table of H(x, p) on a sample grid.
    Hamiltonian(HamiltonianArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Add exact "p/q+r/s*sqrt2" columns.
    #[arg(long)]
    pub exact: bool,
    /// Fractional digits in numeric cells.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=60))]
    pub digits: u32,
}

#[derive(Args, Debug)]
pub struct SequencesArgs {
    #[arg(long, default_value_t = 3)]
    pub n_min: u32,
    #[arg(long, default_value_t = 8)]
    pub n_max: u32,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Also write an SVG plot next to --out.
    #[arg(long, requires = "out")]
    pub plot: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Discount factors, exact: "0.1", "1/7", "3-2*sqrt2".
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_exact)]
    pub lambda: Vec<ExactQuad>,
    /// Action-set truncation N, or "auto".
    #[arg(long, default_value = "auto", value_parser = parse_truncation)]
    pub truncation: TruncationRule,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Inject a fault into the computed values.
    #[arg(long, hide = true)]
    pub perturb: bool,
    /// Write the table here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PdeArgs {
    /// Discount factor in (0.01, 1].
    #[arg(long, default_value = "1/10", value_parser = parse_exact)]
    pub lambda: ExactQuad,
    /// Number of grid cells on the period [−1, 1).
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct HamiltonianArgs {
    #[arg(long, default_value = "16", value_parser = parse_truncation)]
    pub truncation: TruncationRule,
    /// Samples per unit length in x and p.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=1000))]
    pub grid: u32,
    /// Momentum range [−p_max, p_max].
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=1000))]
    pub p_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_exact(s: &str) -> Result<ExactQuad, String> {
    s.trim()
        .parse()
        .map_err(|e: discount_osc::Error| e.to_string())
}

fn parse_truncation(s: &str) -> Result<TruncationRule, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(TruncationRule::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(TruncationRule::Fixed(n)),
        _ => Err(format!(
            "expected a positive integer or \"auto\", got {s:?}"
        )),
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
    let result = match &cli.command {
        Command::Sequences(args) => commands::sequences(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Verify(args) => verify::run(args),
        Command::Pde(args) => commands::pde(args),
        Command::Hamiltonian(args) => commands::hamiltonian(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
