//! `vclab`: command-line front end. Every run writes `report.json` (the
//! result plus a manifest of the run) and, for sweeps, `sweep.csv`.
//!
//! Exit status is 0 on success, 2 on input errors and 3 when a computation
//! is refused for exceeding its budget.

mod cli;
mod commands;
mod error;
mod input;

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use cli::Cli;
use error::CliError;
use input::Inputs;

fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let output = commands::run(&cli.command, cli.seed, &mut inputs)?;
    let manifest = json!({
        "subcommand": cli.command.name(),
        "config": cli.command,
        "seed": cli.seed,
        "threads": cli.threads,
        "inputs": inputs.digests,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "duration_ms": start.elapsed().as_millis() as u64,
    });
    let report = json!({ "result": output.result, "manifest": manifest });
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";

    let io_err = |path: &std::path::Path, e| CliError::Io(path.display().to_string(), e);
    fs::create_dir_all(&cli.out).map_err(|e| io_err(&cli.out, e))?;
    let path = cli.out.join("report.json");
    fs::write(&path, &text).map_err(|e| io_err(&path, e))?;
    if let Some(csv) = output.sweep {
        let path = cli.out.join("sweep.csv");
        fs::write(&path, csv).map_err(|e| io_err(&path, e))?;
    }
    if !cli.quiet {
        print!("{text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
