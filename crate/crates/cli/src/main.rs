use std::process::ExitCode;

use clap::Parser;
use groupgeom_cli::{run, RunConfig};

fn main() -> ExitCode {
    let cli = RunConfig::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = outcome.emit(cli.output.as_deref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
