//! Command-line front end for the `hypharm` verification toolkit.

pub mod args;
pub mod commands;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use hypharm::report::{Report, RunManifest};

use args::{Cli, Command};
use commands::{Outcome, UsageError};

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_VAR: &str = "HYPHARM_THREADS";

fn configure_threads() -> Result<(), UsageError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            UsageError(format!(
                "{THREADS_VAR} must be a positive integer, got {value:?}"
            ))
        })?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Outcome, UsageError> {
    match &cli.command {
        Command::Search(a) => commands::search_cmd(a, cli.seed),
        Command::Verify(a) => commands::verify_cmd(a, cli.seed, cli.precision_bits),
        Command::Eta(a) => commands::eta_cmd(a, cli.precision_bits),
        Command::Decompose(a) => commands::decompose_cmd(a),
        Command::Reduce(a) => commands::reduce_cmd(a),
    }
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Search(_) => "search",
        Command::Verify(_) => "verify",
        Command::Eta(_) => "eta",
        Command::Decompose(_) => "decompose",
        Command::Reduce(_) => "reduce",
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_VERIFIED
            };
        }
    };
    if let Err(UsageError(msg)) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let elapsed = clock.elapsed();
    let finished = chrono::Utc::now();

    let mut parameters: BTreeMap<String, String> = outcome
        .parameters
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    parameters.insert("precision_bits".into(), cli.precision_bits.to_string());
    let report = Report {
        manifest: RunManifest {
            subcommand: subcommand_name(&cli.command).into(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed: cli.seed,
            started_at: started.to_rfc3339(),
            finished_at: finished.to_rfc3339(),
            wall_time_ms: elapsed.as_millis() as u64,
            outcome: if outcome.holds {
                "verified"
            } else {
                "falsified"
            }
            .into(),
        },
        results: outcome.results,
    };
    let text = output::encode(&report, cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if outcome.holds {
        EXIT_VERIFIED
    } else {
        EXIT_FALSIFIED
    }
}
