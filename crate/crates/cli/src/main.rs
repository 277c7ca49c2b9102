mod args;
mod commands;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};

/// Exit status contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    MathFailure = 1,
    Usage = 2,
    Rejected = 3,
}

/// A rendered report in all three formats, plus the status it implies.
pub struct Report {
    pub json: serde_json::Value,
    pub csv: String,
    pub text: String,
    pub status: Status,
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { status: Status::Usage, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            let body = match cli.common.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Csv => report.csv,
                Format::Text => report.text,
            };
            let written = match &cli.common.out {
                Some(path) => fs::write(path, body.as_bytes()),
                None => std::io::stdout().write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(Status::Usage as u8);
            }
            ExitCode::from(report.status as u8)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status as u8)
        }
    }
}
