//! Classifies module documents as standalone or dependent.
//!
//! cargo run --example classify_modules -- a.fmod b.fmod
//!
//! With no arguments the bundled Module1 and Module2 are used.

use std::path::{Path, PathBuf};

use fomforge::{classify_module, parse_module, ModuleKind};

fn main() {
    let mut paths: Vec<PathBuf> = std::env::args_os().skip(1).map(PathBuf::from).collect();
    if paths.is_empty() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/aircraft");
        paths = vec![dir.join("module1.fmod"), dir.join("module2.fmod")];
    }
    for path in paths {
        let bytes = std::fs::read(&path).expect("readable file");
        let module = match parse_module(&bytes) {
            Ok(parsed) => parsed.module,
            Err(errors) => {
                eprintln!("{}: {errors}", path.display());
                continue;
            }
        };
        let c = classify_module(&module);
        let kind = match c.kind {
            ModuleKind::Standalone => "standalone",
            ModuleKind::Dependent => "dependent",
        };
        println!("{} {kind}", module.name());
        for reason in c.reasons {
            println!("  {reason}");
        }
        for warning in c.warnings {
            println!("  warning: {warning}");
        }
    }
}
