mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use report::{CliError, CliResult, Outcome};

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Encrypt(a) => commands::encrypt(a, g),
        Command::Decrypt(a) => commands::decrypt(a, g),
        Command::Entropy(a) => commands::entropy(a, g),
        Command::Bounds(a) => commands::bounds(a, g),
        Command::VerifyLemma(a) => commands::verify_lemma(a, g),
        Command::TypicalSet(a) => commands::typical_set(a, g),
        Command::Attack(a) => commands::attack(a, g),
        Command::ShannonAnalysis(a) => commands::shannon(a, g),
        Command::Fit(a) => commands::fit(a, g),
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.global.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))
        }
    }
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", serde_json::to_string(&err.record()).expect("serialisable"));
    ExitCode::from(err.exit_status() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            return fail(&err);
        }
    };
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let doc = report::document(&cli, &outcome);
    if let Err(e) = emit(&cli, &report::render(&doc, cli.global.format)) {
        return fail(&e);
    }
    ExitCode::from(outcome.exit_status() as u8)
}
