use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use twomeans_cli::args::{Cli, Command};
use twomeans_cli::commands;

/// Exit status when a validation run falls outside its coverage band.
const EXIT_INVALID: u8 = 3;

fn emit(doc: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, doc)?,
        None => std::io::stdout().lock().write_all(doc.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let (doc, out, ok) = match &cli.command {
        Command::Contour(a) => (commands::contour(a)?, a.output.out.as_deref(), true),
        Command::Ci(a) => (commands::ci(a)?, a.output.out.as_deref(), true),
        Command::Lengths(a) => (commands::lengths(a)?, a.output.out.as_deref(), true),
        Command::Compare(a) => (commands::compare(a)?, a.output.out.as_deref(), true),
        Command::Validate(a) => {
            let (doc, valid) = commands::validate(a)?;
            (doc, a.output.out.as_deref(), valid)
        }
    };
    emit(&doc, out)?;
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("coverage fell below the validity band");
        Ok(ExitCode::from(EXIT_INVALID))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
