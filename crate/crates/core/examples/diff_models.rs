//! Prints the differences between two module documents.
//!
//! cargo run --example diff_models -- before.fmod after.fmod
//!
//! With no arguments the MIM plus Module1 is compared with the composite.

use std::path::PathBuf;

use fomforge::{diff_foms, parse_module, ObjectModule};

fn read(path: &PathBuf) -> ObjectModule {
    let bytes = std::fs::read(path).expect("readable file");
    parse_module(&bytes)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .module
}

fn main() {
    let mut args: Vec<PathBuf> = std::env::args_os().skip(1).map(PathBuf::from).collect();
    if args.len() != 2 {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/aircraft");
        args = vec![dir.join("mim_module1.fmod"), dir.join("composite.fmod")];
    }
    let diff = diff_foms(&read(&args[0]), &read(&args[1]));
    if diff.is_empty() {
        println!("no differences");
    }
    print!("{}", diff.to_text());
}
