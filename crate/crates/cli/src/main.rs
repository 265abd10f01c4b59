mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use flintlab::Error;

use crate::args::Cli;

/// Exit statuses.
pub mod status {
    pub const USAGE: u8 = 2;
    pub const PRECISION: u8 = 3;
    pub const VERIFICATION: u8 = 4;
    pub const IO: u8 = 5;
}

/// Why a command failed, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

impl Failure {
    fn status(&self) -> u8 {
        match self {
            Failure::Usage(_) => status::USAGE,
            Failure::Verification(_) => status::VERIFICATION,
            Failure::Lib(e) => match e.root() {
                Error::InvalidArgument(_) | Error::DegenerateInput { .. } | Error::CheckpointMismatch(_) => {
                    status::USAGE
                }
                Error::PoleProximity { .. }
                | Error::PrecisionExhausted(_)
                | Error::Undecidable { .. }
                | Error::TailBound { .. }
                | Error::QuadratureBudget { .. } => status::PRECISION,
                _ => status::IO,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("flintlab: {f}");
            ExitCode::from(f.status())
        }
    }
}
