//! File formats and the `vpcsp` command-line workbench on top of `vpcsp-core`.

pub mod cli;
mod commands;
pub mod format;

use clap::Parser;
use serde_json::{json, Value};
use std::time::Instant;
use vpcsp_core::Limits;

pub use commands::Outcome;

/// Exit codes of [`run`].
pub mod exit {
    pub const OK: i32 = 0;
    pub const NEGATIVE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const RESOURCE: i32 = 3;
}

impl cli::Guards {
    pub fn limits(&self) -> Limits {
        Limits { max_minion_size: self.max_minion_size, max_mat_pairs: self.max_mat_pairs, max_lp_rows: self.max_lp_rows }
    }
}

/// Exit code for a failed command: resource guards get their own code.
pub fn error_code(err: &anyhow::Error) -> i32 {
    let resource = err.chain().any(|e| matches!(e.downcast_ref::<vpcsp_core::Error>(), Some(vpcsp_core::Error::ResourceLimit { .. })));
    if resource {
        exit::RESOURCE
    } else {
        exit::USAGE
    }
}

/// The report for a finished command. `timing_ms` is the only nondeterministic field.
pub fn report(args: &[String], cli: &cli::Cli, outcome: &Outcome, millis: u128) -> Value {
    json!({
        "command": args.get(1..).unwrap_or_default(),
        "config": {
            "max_minion_size": cli.guards.max_minion_size.to_string(),
            "max_mat_pairs": cli.guards.max_mat_pairs,
            "max_lp_rows": cli.guards.max_lp_rows,
            "jobs": cli.jobs,
            "seed": cli.seed,
        },
        "verdict": if outcome.negative { "negative" } else { "ok" },
        "result": outcome.result,
        "certificates": outcome.certificates,
        "timing_ms": millis,
    })
}

/// Parses `args` (program name first), runs the command and returns the exit code with the
/// report, if any. Diagnostics go to stderr.
pub fn run(args: &[String]) -> (i32, Option<Value>) {
    let cli = match cli::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return (code, None);
        }
    };
    let t0 = Instant::now();
    match commands::execute(&cli) {
        Ok(outcome) => {
            let code = if outcome.negative { exit::NEGATIVE } else { exit::OK };
            (code, Some(report(args, &cli, &outcome, t0.elapsed().as_millis())))
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            (error_code(&e), None)
        }
    }
}

/// Writes the report to `--out` or stdout.
pub fn emit(args: &[String], value: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    let out = cli::Cli::try_parse_from(args).ok().and_then(|c| c.out);
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}
