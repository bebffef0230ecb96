mod args;
mod commands;
mod problem;

use std::io::Write;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use aqabound::{Error, PRNG_ID, VERSION};
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, Format};
use commands::Outcome;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 64;
const SEED_ENV: &str = "AQABOUND_SEED";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_FAILURE,
            CliError::Core(e) => match e {
                Error::PropertyViolation { .. } => commands::EXIT_PROPERTY_VIOLATION,
                Error::InvalidParameter(_)
                | Error::Parse { .. }
                | Error::NotConstantOrBalanced { .. }
                | Error::SizeCap { .. }
                | Error::MissingOverlap
                | Error::DimensionMismatch { .. }
                | Error::BasisMismatch
                | Error::Json(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            },
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got '{v}'"))),
        Err(_) => Ok(flag.unwrap_or(0)),
    }
}

fn envelope(cli: &Cli, outcome: &Outcome) -> Result<Value, CliError> {
    let command = match &cli.command {
        Command::Bound(_) => "bound",
        Command::Simulate(_) => "simulate",
        Command::Gap(_) => "gap",
        Command::Kclique(_) => "kclique",
        Command::Verify(_) => "verify",
        Command::Export(_) => "export",
    };
    let mut doc = json!({
        "tool": "aqabound",
        "version": VERSION,
        "prng": PRNG_ID,
        "command": command,
        "config": serde_json::to_value(cli)?,
        "result": outcome.result,
    });
    if !cli.global.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        doc["timestamp"] = json!(secs);
    }
    Ok(doc)
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.global.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run(cli: &mut Cli) -> Result<u8, CliError> {
    let seed = resolve_seed(cli.global.seed)?;
    cli.global.seed = Some(seed);
    if let Some(jobs) = cli.global.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    }
    let outcome = match &cli.command {
        Command::Bound(a) => commands::bound(a, seed)?,
        Command::Simulate(a) => commands::simulate(a, seed)?,
        Command::Gap(a) => commands::gap(a, seed)?,
        Command::Kclique(a) => commands::kclique_cmd(a, seed)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Export(a) => {
            let p = problem::build(&a.problem, seed)?;
            emit(cli, &(p.to_json()? + "\n"))?;
            return Ok(0);
        }
    };
    let text = match cli.global.format {
        Format::Csv => outcome
            .csv
            .clone()
            .ok_or_else(|| CliError::Usage("this command has no CSV output".into()))?,
        Format::Json => serde_json::to_string_pretty(&envelope(cli, &outcome)?)? + "\n",
    };
    emit(cli, &text)?;
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let mut cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&mut cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
