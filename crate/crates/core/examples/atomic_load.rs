//! Shows that a load set is all or nothing: a set whose second module breaks
//! the extension rules leaves the Current FOM untouched.
//!
//! cargo run --example atomic_load

use std::path::Path;

use fomforge::{parse_module, CurrentFom, ObjectModule};

fn fixture(rel: &str) -> ObjectModule {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel);
    parse_module(&std::fs::read(path).expect("fixture"))
        .expect("valid module")
        .module
}

fn main() {
    let mut fom = CurrentFom::with_default_mim();
    fom.load(&[fixture("aircraft/module1.fmod")]).expect("accepted");
    let before = fom.fdd().to_owned();
    let generation = fom.generation();

    let set = [
        fixture("aircraft/module2.fmod"),
        fixture("policy/c01_aircraft_callsign.fmod"),
    ];
    match fom.load(&set) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(rejection) => println!("rejected: {rejection}"),
    }
    println!(
        "unchanged: {}",
        fom.fdd() == before && fom.generation() == generation
    );
    println!("loaded: {}", fom.module_designators().join(","));

    let report = fom.load(&set[..1]).expect("accepted alone");
    println!("Module2 alone adds {} classes", report.added_classes.len());
}
