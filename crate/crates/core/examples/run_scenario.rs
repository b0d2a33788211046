//! Runs a scenario script and prints its output and trace.
//!
//! cargo run --example run_scenario -- path/to/script.scn
//!
//! With no argument the bundled protocol scenario is run.

use std::path::PathBuf;

use fomforge::scenario::run_script_file;

fn main() {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/aircraft/protocol.scn")
        });
    let report = match run_script_file(&path) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            std::process::exit(1);
        }
    };
    for line in &report.output {
        println!("{line}");
    }
    for event in &report.trace {
        println!("trace: {event}");
    }
    for failure in &report.failures {
        println!("FAILED {failure}");
    }
    println!(
        "{} assertions, {} failures",
        report.assertions,
        report.failures.len()
    );
    if !report.passed() {
        std::process::exit(3);
    }
}
