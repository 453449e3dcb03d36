use std::process::ExitCode;

use clap::Parser;
use envycut::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("envycut: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
