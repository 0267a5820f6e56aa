//! Command-line front end for the `entwalk` simulator.
//!
//! [`parse_config`] turns an argument vector into a [`RunConfig`], [`run`]
//! computes a [`RunOutput`] and [`emit`] writes it as CSV or JSON.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

pub use commands::{run, ResultTable, RunOutput};
pub use config::{parse_config, Command, Format, RunConfig};
pub use error::CliError;

/// Environment variable capping the worker threads; `0` or unset means one
/// per core.
pub const THREADS_ENV: &str = "ENTWALK_THREADS";

pub fn configure_threads() -> Result<(), CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|e| CliError::usage(THREADS_ENV, e))?,
        Err(_) => 0,
    };
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Metadata and summary without the table rows.
pub fn summary_document(output: &RunOutput) -> Value {
    json!({
        "metadata": output.table.metadata,
        "summary": output.summary,
    })
}

/// Metadata, summary and the full table.
pub fn json_document(output: &RunOutput) -> Value {
    let rows: Vec<Value> = output
        .table
        .rows
        .iter()
        .map(|r| Value::Array(r.iter().map(|c| c.to_json()).collect()))
        .collect();
    json!({
        "metadata": output.table.metadata,
        "summary": output.summary,
        "columns": output.table.headers,
        "rows": rows,
    })
}

/// `out.csv` → `out.summary.json`.
pub fn summary_path(path: &Path) -> PathBuf {
    path.with_extension("summary.json")
}

/// Writes `output` in the configured format, to `--out` if given and to
/// `stdout` otherwise. CSV output written to a file is accompanied by a JSON
/// summary; CSV on `stdout` sends the summary line to `stderr`.
pub fn emit(
    config: &RunConfig,
    output: &RunOutput,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let json_text = |doc: &Value| {
        let mut s = format::to_json(doc);
        s.push('\n');
        s
    };
    match (config.format, &config.output_path) {
        (Format::Json, None) => stdout.write_all(json_text(&json_document(output)).as_bytes())?,
        (Format::Json, Some(path)) => std::fs::write(path, json_text(&json_document(output)))?,
        (Format::Csv, out) => {
            let csv = format::to_csv(&output.table.headers, &output.table.rows);
            let summary = json_text(&summary_document(output));
            match out {
                None => {
                    stdout.write_all(csv.as_bytes())?;
                    stderr.write_all(summary.as_bytes())?;
                }
                Some(path) => {
                    std::fs::write(path, csv)?;
                    std::fs::write(summary_path(path), summary)?;
                }
            }
        }
    }
    Ok(())
}

/// Full program: parse, compute, write. Returns the process exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_config(argv).and_then(|config| {
        configure_threads()?;
        let output = run(&config)?;
        emit(&config, &output, stdout, stderr)?;
        Ok(output.failures)
    });
    match result {
        Ok(failures) if failures.is_empty() => 0,
        Ok(failures) => {
            for f in &failures {
                let _ = writeln!(stderr, "entwalk: numerical check failed: {f}");
            }
            2
        }
        Err(CliError::Info(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "entwalk: {e}");
            e.exit_code()
        }
    }
}
