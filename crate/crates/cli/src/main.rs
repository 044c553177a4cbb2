use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use relmaj_cli::commands::{emit, run, Cli, Command};

fn main() -> ExitCode {
    // Usage errors exit with 2 (clap's convention), help and version with 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if matches!(cli.command, Command::Lorenz { .. }) && cli.out.is_none() {
        Cli::command().error(ErrorKind::MissingRequiredArgument, "lorenz needs --out <file.svg>").exit();
    }
    match run(&cli).and_then(|outcome| emit(&outcome, cli.format).map(|_| outcome.code)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
