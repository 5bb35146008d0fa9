//! `strength`: batch driver for strength certificates and the covariant
//! membership pipeline. See `strength --help` and `strength formats`.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::{exit_code, run};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Some(path) = &cli.global.out {
        let body = outcome
            .document
            .clone()
            .unwrap_or_else(|| serde_json::to_string_pretty(&outcome.json).expect("serializable"));
        if let Err(e) = std::fs::write(path, body + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let mut stdout = std::io::stdout().lock();
    let printed = if cli.global.json {
        writeln!(
            stdout,
            "{}",
            serde_json::to_string_pretty(&outcome.json).expect("serializable")
        )
    } else {
        write!(stdout, "{}", outcome.text)
    };
    // a closed pipe is not an error worth a nonzero status
    drop(printed);
    ExitCode::from(outcome.code)
}
