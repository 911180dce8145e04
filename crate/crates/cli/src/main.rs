//! `geohh` command-line front end.
//!
//! Exit codes: 0 success, 1 an inequality failed, 2 bad arguments,
//! 3 a computation did not converge.

mod args;
mod failure;
mod kernels;
mod settings;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use failure::Failure;

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: &str = "1";

/// What a command found, independent of how it reported it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
}

impl Outcome {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Kernels(a) => kernels::run(a),
    };
    match result {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Fails) => ExitCode::from(1),
        Err(Failure::BrokenPipe) => ExitCode::from(2),
        Err(f) => {
            eprintln!("geohh: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
