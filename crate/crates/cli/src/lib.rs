//! Command-line front end for the `gausshappy` library.

pub mod cache;
pub mod commands;
pub mod error;
pub mod json;
pub mod literal;

use std::ffi::OsString;

use clap::Parser;

use commands::{execute, Cli, Format};
use error::{CliError, EXIT_USAGE};

/// Everything a run writes, and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let exit = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                exit,
                stdout,
                stderr,
            };
        }
    };
    let result = execute(&cli).and_then(|out| {
        let body = match cli.format {
            Format::Text => out.text,
            Format::Json => pretty(&out.json),
            Format::Csv => out.csv.ok_or_else(|| {
                CliError::Usage(
                    "csv output is available only for cycles and smallest-heights".into(),
                )
            })?,
        };
        Ok((out.exit, body))
    });
    match result {
        Ok((exit, stdout)) => Outcome {
            exit,
            stdout,
            stderr: String::new(),
        },
        Err(e) => match cli.format {
            Format::Json => Outcome {
                exit: e.exit_code(),
                stdout: pretty(&e.to_json()),
                stderr: String::new(),
            },
            _ => Outcome {
                exit: e.exit_code(),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            },
        },
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
