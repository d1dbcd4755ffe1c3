//! Command-line front end: argument parsing, report envelopes, and the
//! anchored check suites.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
pub mod suite;

use std::io::Write;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use args::Cli;
use error::{CliError, CliResult, EXIT_FAILURE};
use report::{render, Experiment, ExperimentReport, SCHEMA_VERSION};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs one invocation and returns the report with its rendering.
pub fn execute(cli: Cli) -> CliResult<(ExperimentReport, String)> {
    let global = cli.global.clone();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(global.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let start = Instant::now();
    let experiment = with_timeout(global.timeout, move || pool.install(|| commands::dispatch(&cli.command, &cli.global)))?;
    let runtime_ms = if global.omit_timing { 0 } else { start.elapsed().as_millis() as u64 };
    let Experiment {
        problem,
        parameters,
        result,
        verdict,
        table,
    } = experiment;
    let report = ExperimentReport {
        schema_version: SCHEMA_VERSION,
        problem: problem.to_owned(),
        parameters,
        result,
        verdict,
        seed: global.seed,
        runtime_ms,
        tool_version: TOOL_VERSION.to_owned(),
    };
    let text = render(&report, table.as_ref(), global.format);
    Ok((report, text))
}

/// The work runs on its own thread; on timeout the caller returns and the
/// process exit reclaims the worker.
fn with_timeout<T: Send + 'static>(
    timeout: Option<f64>,
    work: impl FnOnce() -> CliResult<T> + Send + 'static,
) -> CliResult<T> {
    let Some(secs) = timeout else {
        return work();
    };
    if !(secs.is_finite() && secs > 0.0) {
        return Err(CliError::Usage(format!("--timeout must be positive, got {secs}")));
    }
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(work());
    });
    rx.recv_timeout(Duration::from_secs_f64(secs)).map_err(|_| CliError::Timeout(secs))?
}

/// Full process behaviour: run, write the report, and pick the exit code.
pub fn main_with(cli: Cli) -> i32 {
    let out = cli.global.out.clone();
    let is_suite = matches!(cli.command, args::Command::Suite { .. });
    match execute(cli) {
        Ok((report, text)) => {
            let written = match &out {
                Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                }),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                }),
            };
            if let Err(err) = written {
                eprintln!("workbench: {err}");
                return err.exit_code();
            }
            eprintln!("workbench: {} {} in {} ms", report.problem, report::verdict_name(report.verdict), report.runtime_ms);
            if is_suite && report.verdict != report::Verdict::Verified {
                return EXIT_FAILURE;
            }
            0
        }
        Err(err) => {
            eprintln!("workbench: {err}");
            err.exit_code()
        }
    }
}
