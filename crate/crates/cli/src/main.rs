mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Usage = 1,
    /// An algorithm declined or a verification did not hold.
    Failure = 2,
    Budget = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            status: Status::Usage,
            message: message.into(),
        }
    }
}

impl From<polycount::Error> for CliError {
    fn from(e: polycount::Error) -> Self {
        let status = match e {
            polycount::Error::Budget(_) => Status::Budget,
            _ => Status::Usage,
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::usage(format!("cannot serialize output: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::usage(format!("cannot write csv: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Status::Usage as u8
            } else {
                0
            });
        }
    };
    let result = match cli.command {
        Command::Decompose(a) => commands::decompose(a),
        Command::Census(a) => commands::census(a),
        Command::Ritt(a) => commands::ritt(a),
        Command::Dickson(a) => commands::dickson(a),
        Command::Bluher(a) => commands::bluher(a),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("polycount: {}", e.message);
            ExitCode::from(e.status as u8)
        }
    }
}
