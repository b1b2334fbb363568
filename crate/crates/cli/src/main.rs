//! `ptwitness`: evaluates separability witnesses and the CFRD inequality on
//! the states described by a scenario file.
//!
//! Exit codes: 0 success (violations are data, not errors), 2 schema,
//! 3 capacity, 4 internal.

mod error;
mod eval;
mod output;
mod run;
mod scenario;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ptwitness_core::Execution;

use error::CliError;
use eval::Overrides;
use scenario::Format;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(name = "ptwitness", version, about = "Partial-transpose witnesses and CFRD checks on Fock states")]
struct Args {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; overrides the scenario's `format`.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Run the density-matrix oracle; overrides `[oracle] enabled`.
    #[arg(long, value_enum)]
    oracle: Option<Toggle>,
    /// Uniform per-mode Fock cutoff for the oracle.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Relative violation threshold.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Evaluate scan points one at a time.
    #[arg(long)]
    sequential: bool,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.scenario)
        .map_err(|e| CliError::Schema(format!("reading {}: {e}", args.scenario.display())))?;
    let doc = scenario::parse(&text)?;
    if let Some(t) = args.tolerance {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::Schema(format!("--tolerance must be finite and >= 0, got {t}")));
        }
    }
    if args.cutoff == Some(0) {
        return Err(CliError::Schema("--cutoff must be >= 1".into()));
    }
    let overrides = Overrides {
        oracle: args.oracle.map(|t| matches!(t, Toggle::On)),
        cutoff: args.cutoff,
        tolerance: args.tolerance,
    };
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let rows = run::run(&doc, &overrides, exec)?;
    let format = args.format.or(doc.scenario.format).unwrap_or(Format::Csv);
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Internal(format!("creating {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    output::write_rows(&mut sink, &rows, format)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ptwitness: {e}");
            e.exit_code()
        }
    }
}
