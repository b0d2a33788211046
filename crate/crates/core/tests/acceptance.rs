//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use fomforge::merge::CurrentFom;
use fomforge::model::*;
use fomforge::{default_mim, parse_module, serialize_module, RuleId};
use rand::seq::SliceRandom;
use rand::Rng;

const GOLDEN_TIME_LIMIT: Duration = Duration::from_secs(1);
const POISONED_SETS: usize = 150;
const COMPATIBLE_SETS: usize = 1000;
const UNION_TIME_LIMIT: Duration = Duration::from_secs(30);
const MAX_MODULES_PER_SET: usize = 4;
const MIN_POLICY_FIXTURES: usize = 20;
const ROUND_TRIP_MODULES: usize = 1000;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The composite of the worked example, written out by hand: class, parent
/// and attribute names. The root attribute is listed under its short name.
const COMPOSITE_ORACLE: &[(&str, &str, &[&str])] = &[
    ("HLAobjectRoot", "", &["PrivilegeToDeleteObject"]),
    ("Aircraft", "HLAobjectRoot", &["Name", "Speed", "Height"]),
    ("TransportAircraft", "Aircraft", &["Capability"]),
    ("CombatAircraft", "Aircraft", &["AmmunitionType"]),
    ("BombingPlane", "CombatAircraft", &["BombNumber"]),
    (
        "Groundvehicle",
        "HLAobjectRoot",
        &["Name", "Speed", "Position"],
    ),
    ("Tank", "Groundvehicle", &["Type"]),
];

fn short_name(attr: &str) -> String {
    attr.strip_prefix("HLA").map_or(attr.to_owned(), |rest| {
        let mut c = rest.chars();
        c.next()
            .map(|f| f.to_ascii_uppercase().to_string() + c.as_str())
            .unwrap_or_default()
    })
}

fn golden_composite() -> Outcome {
    let started = Instant::now();
    let build = || {
        let m1 = parse_fixture("aircraft/module1.fmod");
        let m2 = parse_fixture("aircraft/module2.fmod");
        let mut fom = CurrentFom::with_default_mim();
        fom.load(&[m1, m2]).map_err(|r| format!("rejected: {r}"))?;
        Ok::<_, String>(fom)
    };
    let fom = build()?;
    let elapsed = started.elapsed();

    let model = fom.merged_model();
    let mut got: Vec<(String, String, Vec<String>)> = Vec::new();
    let root = model
        .object_root
        .as_ref()
        .ok_or("composite has no object root")?;
    got.push((
        OBJECT_ROOT.into(),
        String::new(),
        root.attributes
            .iter()
            .map(|a| short_name(&a.name))
            .collect(),
    ));
    walk_forest(&model.object_classes, &mut |fqn, class| {
        if fqn.starts_with(&format!("{OBJECT_ROOT}.{MOM_PREFIX}")) {
            return;
        }
        let parts: Vec<&str> = fqn.split('.').collect();
        let attrs = class
            .body
            .regular()
            .map(|s| s.attributes.iter().map(|a| a.name.clone()).collect());
        got.push((
            class.name.clone(),
            parts[parts.len() - 2].to_owned(),
            attrs.unwrap_or_else(|| vec!["<scaffolding>".into()]),
        ));
    });
    let as_set = |v: Vec<(String, String, Vec<String>)>| v.into_iter().collect::<BTreeSet<_>>();
    let expected = as_set(
        COMPOSITE_ORACLE
            .iter()
            .map(|(c, p, a)| {
                (
                    c.to_string(),
                    p.to_string(),
                    a.iter().map(|s| s.to_string()).collect(),
                )
            })
            .collect(),
    );
    check(got.len() == 7, || {
        format!("{} classes, expected 7", got.len())
    })?;
    check(as_set(got.clone()) == expected, || {
        format!("class table mismatch: {got:?}")
    })?;

    let again = build()?.fdd();
    check(again == fom.fdd(), || "FDD differs between runs".into())?;
    let golden =
        String::from_utf8(read_fixture("aircraft/composite.fmod")).map_err(|e| e.to_string())?;
    check(golden == fom.fdd(), || {
        "FDD differs from fixtures/aircraft/composite.fmod".into()
    })?;
    check(elapsed < GOLDEN_TIME_LIMIT, || {
        format!("took {elapsed:?}, limit {GOLDEN_TIME_LIMIT:?}")
    })?;
    Ok(format!(
        "7 classes match, byte-stable, {elapsed:.2?} < {GOLDEN_TIME_LIMIT:?}"
    ))
}

fn atomicity() -> Outcome {
    let mut rng = rng(0xA70_41C);
    let mut by_kind = [0usize; 5];
    for case in 0..POISONED_SETS {
        let kind = Poison::ALL[case % Poison::ALL.len()];
        let set = compatible_set(&mut rng, MAX_MODULES_PER_SET);
        let (poison, target) = poison_module(&mut rng, kind, &set.universe);
        let mut fom = CurrentFom::with_default_mim();

        // Half the cases poison a load on top of the whole set, half poison
        // the set itself at a random position.
        let (load_set, defined_before) = if case % 2 == 0 {
            fom.load(&set.modules)
                .map_err(|r| format!("case {case}: clean set rejected: {r}"))?;
            let mut extra = ObjectModule::fom_module("Extra");
            extra.object_classes = vec![ObjectClassDef::object(
                "ExtraRoot",
                Sharing::Publish,
                vec![],
            )];
            let mut load = vec![poison, extra];
            load.shuffle(&mut rng);
            (load, true)
        } else {
            let mut load = set.modules.clone();
            let at = rng.gen_range(0..=load.len());
            let before = target
                .as_deref()
                .is_some_and(|t| defines_regular(&load[..at], t));
            load.insert(at, poison);
            (load, before)
        };

        let fdd = fom.fdd();
        let snapshot = fom.clone();
        let rejection = match fom.load(&load_set) {
            Ok(_) => return Err(format!("case {case} ({kind:?}) was accepted")),
            Err(r) => r,
        };
        let want = expected_rule(kind, defined_before);
        check(rejection.rule == want, || {
            format!(
                "case {case} ({kind:?}): rule {} expected {want}",
                rejection.rule
            )
        })?;
        check(fom.fdd() == fdd, || {
            format!("case {case}: FDD changed after rejection")
        })?;
        check(fom == snapshot, || {
            format!("case {case}: state changed after rejection")
        })?;
        by_kind[case % 5] += 1;
    }
    Ok(format!(
        "{POISONED_SETS}/{POISONED_SETS} rejected with state unchanged, per kind {by_kind:?}"
    ))
}

fn compatible_sets() -> Vec<common::CompatibleSet> {
    let mut rng = rng(0x0C0_FFEE);
    (0..COMPATIBLE_SETS)
        .map(|_| compatible_set(&mut rng, MAX_MODULES_PER_SET))
        .collect()
}

/// `generation` is the time spent building the sets and counts toward the limit.
fn union_oracle(sets: &[common::CompatibleSet], generation: Duration) -> Outcome {
    let started = Instant::now();
    let mim = default_mim();
    let (mut modules, mut scaffolds) = (0, 0);
    for (i, set) in sets.iter().enumerate() {
        modules += set.modules.len();
        scaffolds += set
            .modules
            .iter()
            .map(|m| m.scaffolding_names().len())
            .sum::<usize>();
        let mut fom = CurrentFom::with_default_mim();
        fom.load(&set.modules)
            .map_err(|r| format!("set {i} rejected: {r}"))?;
        let merged = fom.merged_model();

        let mut expected: BTreeSet<String> = BTreeSet::new();
        for m in std::iter::once(&mim).chain(&set.modules) {
            expected.extend(m.object_class_names());
            expected.extend(m.interaction_class_names());
        }
        let got: BTreeSet<String> = merged
            .object_class_names()
            .into_iter()
            .chain(merged.interaction_class_names())
            .collect();
        check(got == expected, || {
            format!(
                "set {i}: missing {:?}, extra {:?}",
                expected.difference(&got).collect::<Vec<_>>(),
                got.difference(&expected).collect::<Vec<_>>()
            )
        })?;
        check(merged.scaffolding_names().is_empty(), || {
            format!("set {i}: scaffolding survived")
        })?;
    }
    let elapsed = started.elapsed() + generation;
    check(elapsed < UNION_TIME_LIMIT, || {
        format!("took {elapsed:?}, limit {UNION_TIME_LIMIT:?}")
    })?;
    Ok(format!(
        "{} sets ({modules} modules, {scaffolds} scaffolding classes) match the set-union oracle, {elapsed:.2?} < {UNION_TIME_LIMIT:?}",
        sets.len()
    ))
}

fn order_insensitivity(sets: &[common::CompatibleSet]) -> Outcome {
    let mut loads = 0usize;
    for (i, set) in sets.iter().enumerate() {
        let mut reference: Option<String> = None;
        for order in permutations(set.modules.len()) {
            let permuted: Vec<ObjectModule> =
                order.iter().map(|&j| set.modules[j].clone()).collect();
            let mut fom = CurrentFom::with_default_mim();
            fom.load(&permuted)
                .map_err(|r| format!("set {i} order {order:?} rejected: {r}"))?;
            loads += 1;
            let fdd = fom.fdd();
            match &reference {
                None => reference = Some(fdd),
                Some(r) => check(*r == fdd, || {
                    format!("set {i}: order {order:?} gives a different FDD")
                })?,
            }
        }
    }
    Ok(format!(
        "{} sets, {loads} permuted loads, all byte-equal",
        sets.len()
    ))
}

fn idempotence(sets: &[common::CompatibleSet]) -> Outcome {
    let mut reloads = 0usize;
    for (i, set) in sets.iter().enumerate() {
        let mut fom = CurrentFom::with_default_mim();
        fom.load(&set.modules)
            .map_err(|r| format!("set {i} rejected: {r}"))?;
        let fdd = fom.fdd();
        let handles = fom.handles().clone();
        let designators = fom.module_designators().to_vec();
        let subsets: Vec<Vec<ObjectModule>> = set
            .modules
            .iter()
            .map(|m| vec![m.clone()])
            .chain(std::iter::once(set.modules.clone()))
            .collect();
        for subset in subsets {
            let generation = fom.generation();
            let report = fom
                .load(&subset)
                .map_err(|r| format!("set {i}: reload rejected: {r}"))?;
            reloads += 1;
            check(fom.generation() == generation + 1, || {
                format!("set {i}: generation not incremented")
            })?;
            check(report.added_classes.is_empty(), || {
                format!("set {i}: reload added {:?}", report.added_classes)
            })?;
            check(report.added_table_entries.is_empty(), || {
                format!("set {i}: reload added table entries")
            })?;
            check(report.repeated_modules.len() == subset.len(), || {
                format!("set {i}: repeat not detected")
            })?;
            check(fom.fdd() == fdd, || {
                format!("set {i}: FDD changed on reload")
            })?;
            check(fom.handles() == &handles, || {
                format!("set {i}: handles changed on reload")
            })?;
            check(fom.module_designators() == designators, || {
                format!("set {i}: designators changed")
            })?;
        }
    }
    Ok(format!(
        "{reloads} reloads over {} sets were no-ops",
        sets.len()
    ))
}

fn extension_policy() -> Outcome {
    let manifest =
        String::from_utf8(read_fixture("policy/manifest.txt")).map_err(|e| e.to_string())?;
    let base = [
        parse_fixture("aircraft/module1.fmod"),
        parse_fixture("aircraft/module2.fmod"),
        parse_fixture("policy/base_comms.fmod"),
    ];
    let mut fom = CurrentFom::with_default_mim();
    fom.load(&base).map_err(|r| format!("base rejected: {r}"))?;

    let mut count = 0;
    let mut rules_c = BTreeSet::new();
    let mut rules_d = BTreeSet::new();
    for line in manifest
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (file, outcome, option) = (fields[0], fields[1], fields[2]);
        let module = parse_fixture(&format!("policy/{file}"));
        let mut working = fom.clone();
        let result = working.load(&[module]);
        match (outcome, result) {
            ("accept", Ok(_)) => {}
            ("accept", Err(r)) => return Err(format!("{file}: option ({option}) rejected: {r}")),
            ("reject", Ok(_)) => return Err(format!("{file}: option ({option}) accepted")),
            ("reject", Err(r)) => {
                let want = fields.get(3).copied().unwrap_or("?");
                check(r.rule.as_str() == want, || {
                    format!("{file}: rule {} expected {want}", r.rule)
                })?;
                check(working == fom, || format!("{file}: state changed"))?;
                match option {
                    "c" => rules_c.insert(r.rule),
                    "d" => rules_d.insert(r.rule),
                    _ => return Err(format!("{file}: option {option} cannot be rejected")),
                };
            }
            _ => return Err(format!("bad manifest line: {line}")),
        }
        count += 1;
    }
    check(count >= MIN_POLICY_FIXTURES, || {
        format!("only {count} fixtures")
    })?;
    check(
        rules_c == BTreeSet::from([RuleId::AttributeExtension]),
        || format!("option (c) rules {rules_c:?}"),
    )?;
    check(
        rules_d == BTreeSet::from([RuleId::ParameterExtension]),
        || format!("option (d) rules {rules_d:?}"),
    )?;
    Ok(format!(
        "{count}/{count} fixtures as expected; (c) -> {}, (d) -> {}",
        RuleId::AttributeExtension,
        RuleId::ParameterExtension
    ))
}

fn protocol_coherence() -> Outcome {
    let script = fixtures().join("aircraft/protocol.scn");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = fomforge::cli::run(
        ["fomforge".as_ref(), "simulate".as_ref(), script.as_os_str()],
        &mut out,
        &mut err,
        false,
    );
    let stdout = String::from_utf8_lossy(&out);
    check(code == 0, || {
        format!("simulate exited {code}: {}", String::from_utf8_lossy(&err))
    })?;
    let summary = stdout.lines().last().unwrap_or("").to_owned();
    Ok(format!("simulate exit 0 ({summary})"))
}

fn round_trip() -> Outcome {
    let mut rng = rng(0x51DE);
    let mut modules: Vec<ObjectModule> = (0..ROUND_TRIP_MODULES)
        .map(|i| random_module(&mut rng, i))
        .collect();
    modules.push(default_mim());
    modules.push(parse_fixture("aircraft/composite.fmod"));
    for (i, m) in modules.iter().enumerate() {
        let text = serialize_module(m);
        let parsed = parse_module(text.as_bytes())
            .map_err(|e| format!("module {i} does not parse back:\n{e}"))?;
        check(parsed.module == *m, || {
            format!("module {i}: parse(serialize(m)) != m")
        })?;
        check(serialize_module(&parsed.module) == text, || {
            format!("module {i}: serialize not idempotent")
        })?;
    }
    Ok(format!(
        "{} modules round-trip, serialization idempotent",
        modules.len()
    ))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let started = Instant::now();
    let sets = compatible_sets();
    let generation = started.elapsed();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 golden composite", Box::new(golden_composite)),
        ("2 atomicity", Box::new(atomicity)),
        (
            "3 union oracle",
            Box::new(|| union_oracle(&sets, generation)),
        ),
        (
            "4 order insensitivity",
            Box::new(|| order_insensitivity(&sets)),
        ),
        ("5 idempotence", Box::new(|| idempotence(&sets))),
        ("6 extension policy", Box::new(extension_policy)),
        ("7 protocol coherence", Box::new(protocol_coherence)),
        ("8 round trip", Box::new(round_trip)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
