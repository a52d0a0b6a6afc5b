//! `heu`: batch front end over JSON documents.
//!
//! Exit codes: 0 = success; 1 = a mathematical check failed, with a
//! machine-readable certificate on stdout; 2 = malformed input. The JSON
//! report always goes to stdout (or `--out`); human-readable renderings
//! (scenario tables, theorem PASS/FAIL lines) go to stderr.

mod commands;

use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = commands::dispatch(&args);
    ExitCode::from(code)
}
