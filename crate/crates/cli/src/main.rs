mod args;
mod commands;
mod error;
mod files;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use error::CliResult;
use files::Outputs;

fn run(cli: Cli) -> CliResult<()> {
    let (outputs, summary): (Outputs, Option<String>) = match &cli.command {
        Command::Evaluate(a) => (commands::evaluate(a)?, None),
        Command::Simulate(a) => (commands::simulate(a)?, None),
        Command::CompareTta(a) => {
            let (out, s) = commands::compare_tta(a)?;
            (out, Some(s))
        }
        Command::Labels(a) => commands::labels(a)?,
    };
    let written: Vec<String> = outputs.paths().map(|p| p.display().to_string()).collect();
    outputs.commit()?;
    if let Some(s) = summary {
        println!("{s}");
    }
    match written.as_slice() {
        [one] => println!("wrote {one}"),
        many => println!("wrote {} files", many.len()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
