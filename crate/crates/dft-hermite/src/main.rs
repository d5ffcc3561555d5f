use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dft_hermite::commands::{run, Outcome};
use dft_hermite::config::{Cli, RunConfig, DIGITS_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env = std::env::var(DIGITS_ENV).ok();
    let config = match RunConfig::from_cli(cli, env.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(outcome) => finish(&config, outcome),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
    }
}

fn finish(config: &RunConfig, outcome: Outcome) -> ExitCode {
    for m in &outcome.messages {
        eprintln!("{m}");
    }
    if !outcome.output.is_empty() {
        let written = match &config.output {
            Some(path) => std::fs::write(path, &outcome.output),
            None => std::io::stdout().lock().write_all(outcome.output.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(4);
        }
    }
    ExitCode::from(outcome.status.code())
}
