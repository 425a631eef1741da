mod args;
mod commands;

use std::fs;
use std::process::ExitCode;

use clap::Parser;
use salemlat::{io, Error};
use serde_json::{json, Value};

use args::Args;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("unknown command `{0}`; known: {1}")]
    UnknownCommand(String, String),
    #[error("option {0} must be positive")]
    NonPositive(&'static str),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if !e.is_input_error() && !matches!(e, Error::UnknownStrategy { .. }) => 1,
            _ => 2,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Lib(e) => io::error_json(e),
            CliError::UnknownCommand(..) => json!({"error": "UnknownCommand", "message": self.to_string()}),
            CliError::NonPositive(_) => json!({"error": "ParseError", "message": self.to_string()}),
        }
    }
}

fn check_positive(args: &Args) -> Result<(), CliError> {
    let checks: [(&'static str, bool); 6] = [
        ("--bound", args.bound > 0),
        ("--max-word-len", args.max_word_len > 0),
        ("--budget", args.budget > 0),
        ("--walk-budget", args.walk_budget > 0),
        ("--per-class", args.per_class > 0),
        ("--workers", args.workers > 0),
    ];
    match checks.iter().find(|(_, ok)| !ok) {
        Some((flag, _)) => Err(CliError::NonPositive(flag)),
        None => Ok(()),
    }
}

fn run(args: &Args) -> Result<Value, CliError> {
    check_positive(args)?;
    io::parse_positive_rational(&args.tol)?;
    let registry = commands::commands();
    let command = registry
        .get(&args.command)
        .map_err(|_| {
            let known: Vec<String> = registry
                .iter()
                .map(|c| format!("{} ({})", c.name(), c.summary()))
                .collect();
            CliError::UnknownCommand(args.command.clone(), known.join(", "))
        })?;
    Ok(command.run(args)?)
}

fn emit(args: &Args, text: &str) -> Result<(), CliError> {
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| {
            CliError::Lib(Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (value, code) = match run(&args) {
        Ok(v) => (v, 0),
        Err(e) => {
            eprintln!("salemlat: {e}");
            (e.to_json(), e.exit_code())
        }
    };
    if let Err(e) = emit(&args, &io::render(&value)) {
        eprintln!("salemlat: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
