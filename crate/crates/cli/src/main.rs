//! `kpsum`: summarize argument collections into key points, evaluate
//! summaries, sample coverage suites and score clusterings.
//!
//! Exit codes: 0 success, 2 input or configuration error, 3 backend or
//! transport error, 4 internal error. Failures print a JSON object
//! `{"error": {"kind": ..., "message": ...}}` on stderr.

mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;
use kpsum::ErrorKind;

use crate::args::{Cli, Command};

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Input => 2,
        ErrorKind::Backend => 3,
        ErrorKind::Internal => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Summarize(a) => a.resolve().and_then(|c| commands::summarize(&c)),
        Command::Evaluate(a) => a.resolve().and_then(|(c, files)| commands::evaluate(&c, &files)),
        Command::SampleCoverage(a) => a.resolve().and_then(|c| commands::sample_coverage(&c)),
        Command::ClusterEval(a) => a.resolve().and_then(|(c, files)| commands::cluster_eval(&c, &files)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e.kind() {
                ErrorKind::Input => "input",
                ErrorKind::Backend => "backend",
                ErrorKind::Internal => "internal",
            };
            let report = serde_json::json!({ "error": { "kind": kind, "message": e.to_string() } });
            eprintln!("{report}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
