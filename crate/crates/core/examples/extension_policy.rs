//! Runs every policy fixture against its base and prints the outcome next to
//! the expected one from manifest.txt.
//!
//! cargo run --example extension_policy

use std::path::Path;

use fomforge::{parse_module, CurrentFom, ObjectModule};

fn load(dir: &Path, name: &str) -> ObjectModule {
    parse_module(&std::fs::read(dir.join(name)).expect("fixture"))
        .expect("valid module")
        .module
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/policy");
    let manifest = std::fs::read_to_string(dir.join("manifest.txt")).expect("manifest");
    let bases = [
        load(&dir.join("../aircraft"), "module1.fmod"),
        load(&dir.join("../aircraft"), "module2.fmod"),
        load(&dir, "base_comms.fmod"),
    ];
    let mut mismatches = 0;
    for line in manifest
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
    {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (file, expected) = (fields[0], fields[1]);
        let expected_rule = fields.get(3).copied().unwrap_or("-");
        let mut fom = CurrentFom::with_default_mim();
        fom.load(&bases).expect("bases merge");
        let got = match fom.load(&[load(&dir, file)]) {
            Ok(_) => ("accept", "-".to_owned()),
            Err(r) => ("reject", r.rule.to_string()),
        };
        let ok = got.0 == expected && got.1 == expected_rule;
        mismatches += usize::from(!ok);
        println!(
            "{} {file} {} {}",
            if ok { "ok  " } else { "DIFF" },
            got.0,
            got.1
        );
    }
    println!("{mismatches} mismatches");
}
