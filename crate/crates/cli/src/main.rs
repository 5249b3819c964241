//! `ambicon`: solve, compare and generate principal-agent instances with
//! exact rational output.

mod commands;
mod error;
mod io;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::check_class::CheckClassArgs;
use commands::gap::GapArgs;
use commands::gen::GenKind;
use commands::solve::SolveArgs;
use commands::validate::ValidateArgs;
use error::{CliError, CliResult};
use output::{render, Format};

#[derive(Debug, Parser)]
#[command(name = "ambicon", version, about = "Exact single and ambiguous contract solvers")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal single or ambiguous contract, or the cheapest one for an action.
    Solve(SolveArgs),
    /// Best ambiguous and first-best utility relative to the best single contract.
    Gap(GapArgs),
    /// Decide whether a contract class admits a proper crossing.
    CheckClass(CheckClassArgs),
    /// Emit a generated instance with reference values.
    #[command(subcommand)]
    Gen(GenKind),
    /// Check that a contract set incentivises an action.
    Validate(ValidateArgs),
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("AMBICON_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::input(format!("AMBICON_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Domain(e.to_string()))
}

fn run(cli: &Cli) -> CliResult<String> {
    configure_threads()?;
    let rendered = match &cli.command {
        Command::Solve(args) => commands::solve::run(args, cli.format)?,
        Command::Gap(args) => commands::gap::run(args)?,
        Command::CheckClass(args) => commands::check_class::run(args)?,
        Command::Gen(kind) => commands::gen::run(kind)?,
        Command::Validate(args) => commands::validate::run(args)?,
    };
    render(rendered, cli.format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|()| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ambicon: {e}");
            e.exit_code()
        }
    }
}
