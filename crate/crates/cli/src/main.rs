mod args;
mod commands;
mod error;
mod input;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    let (outcome, out) = match &cli.command {
        Command::Eval(a) => (commands::eval(a)?, &a.output),
        Command::Zeros(a) => (commands::zeros(a)?, &a.output),
        Command::Locus(a) => (commands::locus(a)?, &a.output),
        Command::Verify(a) => (commands::verify(a)?, &a.output),
        Command::Sweep(a) => (commands::sweep(a)?, &a.output),
    };
    output::emit(&outcome.doc, out)?;
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
