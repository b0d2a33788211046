//! Loads Module1, then Module2, and prints the merge reports and the
//! composite FDD.
//!
//! cargo run --example compose_modules

use std::path::Path;

use fomforge::{parse_module, CurrentFom, ObjectModule};

fn fixture(name: &str) -> ObjectModule {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/aircraft")
        .join(name);
    let bytes = std::fs::read(&path).expect("fixture");
    parse_module(&bytes).expect("valid module").module
}

fn main() {
    let mut fom = CurrentFom::with_default_mim();
    for name in ["module1.fmod", "module2.fmod"] {
        let report = fom.load(&[fixture(name)]).expect("accepted");
        println!("# {name}");
        for line in report.to_lines() {
            println!("{line}");
        }
    }
    println!("# designators: {}", fom.module_designators().join(","));
    for (name, handle) in fom.handles().object_classes() {
        println!("# handle {} {name}", handle.get());
    }
    print!("{}", fom.fdd());
}
