//! Command-line front end for `liesys-core`.
//!
//! Each subcommand prints `key: value` report lines. Trajectories go to the
//! CSV file named by `--out`, or to stdout when no file is given (the report
//! then moves to stderr so the CSV stays clean).

pub mod args;
pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;

use std::io::Write;

use args::Command;
use commands::Output;
use error::CliError;

/// Merges the config file (if any) under the flags and runs the command.
pub fn run(mut command: Command) -> Result<Output, CliError> {
    if let Some(path) = command.params().config.clone() {
        config::load_into(command.params_mut(), &path)?;
    }
    let p = command.params();
    match &command {
        Command::Solve(_) => commands::solve(p),
        Command::Superpose(_) => commands::superpose(p),
        Command::Invariant(_) => commands::invariant(p),
        Command::Transform(_) => commands::transform(p),
        Command::Reduce(_) => commands::reduce(p),
        Command::CheckIntegrability(_) => commands::check_integrability(p),
        Command::VerifyAlgebra(_) => commands::verify_algebra(p),
    }
}

/// Runs `command` and writes its output; returns the process exit code.
pub fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let name = command.name();
    let out_path = command.params().out.clone();
    let result = run(command).and_then(|output| {
        let to_file = out_path.is_some() || output.table.is_none();
        let mut report = format!("command: {name}\n");
        for (k, v) in &output.report {
            report.push_str(&format!("{k}: {v}\n"));
        }
        match (&output.table, &out_path) {
            (Some(table), Some(path)) => {
                csvio::write_file(table, path)?;
                report.push_str(&format!("rows: {}\noutput: {}\n", table.rows.len(), path.display()));
            }
            (Some(table), None) => csvio::write_table(table, stdout)?,
            _ => {}
        }
        let sink: &mut dyn Write = if to_file { stdout } else { stderr };
        sink.write_all(report.as_bytes()).map_err(|e| CliError::Usage(format!("cannot write report: {e}")))
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
