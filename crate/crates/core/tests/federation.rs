mod common;

use common::*;
use fomforge::federation::{fdd_parses_back, Event, MomKind, Scope};
use fomforge::io::ModuleDocument;
use fomforge::{parse_module, CurrentFom, FederationExecution, Rti, RuleId};
use rand::seq::SliceRandom;
use rand::Rng;

fn doc(path: &str) -> ModuleDocument {
    ModuleDocument::parse(read_fixture(path)).unwrap()
}

#[test]
fn incremental_joins_match_single_load() {
    for seed in 0..60u64 {
        let mut rng = rng(seed);
        let set = compatible_set(&mut rng, 4);
        let docs: Vec<ModuleDocument> = set
            .modules
            .iter()
            .cloned()
            .map(ModuleDocument::from)
            .collect();

        // Oracle: one load of everything into a fresh model.
        let mut oracle = CurrentFom::with_default_mim();
        oracle.load(&set.modules).unwrap();

        let mut fed = FederationExecution::create("F", docs[..1].to_vec(), None)
            .or_else(|e| {
                assert_eq!(e.rule(), RuleId::UnresolvedScaffolding, "seed {seed}");
                FederationExecution::create("F", docs.clone(), None)
            })
            .unwrap();
        for (i, d) in docs.iter().enumerate().skip(1) {
            let name = format!("fed{i}");
            if rng.gen_bool(0.5) {
                let _ = fed.join(&name, vec![d.clone()]);
            }
        }
        let _ = fed.join("last", docs.clone()).unwrap();
        assert_eq!(fed.current_fom().fdd(), oracle.fdd(), "seed {seed}");
        assert!(fdd_parses_back(fed.current_fom()));

        let replayed = FederationExecution::replay(fed.event_log()).unwrap();
        assert_eq!(replayed.current_fom().fdd(), fed.current_fom().fdd());
        assert_eq!(replayed.mom_snapshot(), fed.mom_snapshot());
    }
}

#[test]
fn identical_reload_keeps_handles_and_subscriptions() {
    let m1 = doc("aircraft/module1.fmod");
    let m2 = doc("aircraft/module2.fmod");
    let mut fed = FederationExecution::create("F", vec![m1.clone()], None).unwrap();
    fed.join("a", vec![m2.clone()]).unwrap();
    let h = fed.subscribe("a", "BombingPlane").unwrap();
    let before_fdd = fed.current_fom().fdd().to_owned();
    let before = fed.federate("a").unwrap().subscriptions.clone();
    let (_, report) = fed.join("b", vec![m1, m2]).unwrap();
    assert!(report.unwrap().added_classes.is_empty());
    assert_eq!(fed.current_fom().fdd(), before_fdd);
    assert_eq!(fed.federate("a").unwrap().subscriptions, before);
    assert_eq!(fed.get_object_class_handle("BombingPlane").unwrap(), h);
}

#[test]
fn custom_mim_payload_is_the_supplied_document() {
    let mim = doc("misc/extended_mim.fmod");
    let fed =
        FederationExecution::create("F", vec![doc("misc/empty.fmod")], Some(mim.clone())).unwrap();
    let report = fed.request_mim_data();
    assert_eq!(report.kind, MomKind::ReportMimData);
    assert_eq!(&*report.payload, &*mim.source);
    assert_eq!(fed.mom_snapshot().mim_designator, "ExtendedMIM");

    let default = FederationExecution::create("G", vec![doc("misc/empty.fmod")], None).unwrap();
    let payload = default.request_mim_data().payload;
    assert!(parse_module(&payload).is_ok());
}

#[test]
fn module_reports_return_original_bytes() {
    // Non-canonical whitespace must survive the round trip through the MOM.
    let mut bytes = read_fixture("aircraft/module1.fmod");
    bytes.extend_from_slice(b"\n\n<!-- trailing -->\n");
    let m1 = ModuleDocument::parse(bytes.clone()).unwrap();
    let mut fed = FederationExecution::create("F", vec![m1], None).unwrap();
    fed.join("a", vec![doc("aircraft/module2.fmod")]).unwrap();
    let r = fed.request_module_data(&Scope::Federation, 0).unwrap();
    assert_eq!(&*r.payload, &bytes[..]);
    let r = fed
        .request_module_data(&Scope::Federate("a".into()), 0)
        .unwrap();
    assert_eq!(&*r.payload, &read_fixture("aircraft/module2.fmod")[..]);
    assert_eq!(
        fed.request_module_data(&Scope::Federation, 2)
            .unwrap_err()
            .rule(),
        RuleId::IndexOutOfRange
    );
    assert_eq!(
        fed.request_module_data(&Scope::Federate("zz".into()), 0)
            .unwrap_err()
            .rule(),
        RuleId::UnknownFederate
    );
}

#[test]
fn failed_operations_leave_no_trace() {
    let rti = Rti::new();
    let err = rti
        .create_federation_execution("F", vec![doc("aircraft/module2.fmod")], None)
        .unwrap_err();
    assert_eq!(err.rule(), RuleId::UnresolvedScaffolding);
    assert!(rti.federation_names().is_empty());

    rti.create_federation_execution("F", vec![doc("aircraft/module1.fmod")], None)
        .unwrap();
    let before = rti.mom_snapshot("F").unwrap();
    let poison = doc("policy/c01_aircraft_callsign.fmod");
    let err = rti
        .join_federation_execution("x", "F", vec![poison])
        .unwrap_err();
    assert_eq!(err.rule(), RuleId::AttributeExtension);
    let after = rti.mom_snapshot("F").unwrap();
    assert_eq!(after, before);
    assert_eq!(
        rti.create_federation_execution("F", vec![doc("aircraft/module1.fmod")], None)
            .unwrap_err()
            .rule(),
        RuleId::DuplicateFederation
    );
}

#[test]
fn destroy_requires_resigned_federates() {
    let rti = Rti::new();
    rti.create_federation_execution("F", vec![doc("aircraft/module1.fmod")], None)
        .unwrap();
    rti.join_federation_execution("a", "F", vec![]).unwrap();
    assert_eq!(
        rti.destroy_federation_execution("F").unwrap_err().rule(),
        RuleId::FederatesJoined
    );
    rti.resign_federate("F", "a").unwrap();
    rti.destroy_federation_execution("F").unwrap();
    assert_eq!(
        rti.mom_snapshot("F").unwrap_err().rule(),
        RuleId::UnknownFederation
    );
}

#[test]
fn class_lookup_forms() {
    let fed = FederationExecution::create(
        "F",
        vec![doc("aircraft/module1.fmod"), doc("aircraft/module2.fmod")],
        None,
    )
    .unwrap();
    let full = fed
        .get_object_class_handle("HLAobjectRoot.Aircraft.CombatAircraft.BombingPlane")
        .unwrap();
    assert_eq!(
        fed.get_object_class_handle("Aircraft.CombatAircraft.BombingPlane")
            .unwrap(),
        full
    );
    assert_eq!(fed.get_object_class_handle("BombingPlane").unwrap(), full);
    assert_eq!(
        fed.get_object_class_handle("Submarine").unwrap_err().rule(),
        RuleId::UnknownClass
    );
}

#[test]
fn concurrent_federations_are_independent() {
    let rti = std::sync::Arc::new(Rti::new());
    let threads: Vec<_> = (0..8)
        .map(|i| {
            let rti = rti.clone();
            std::thread::spawn(move || {
                let name = format!("F{i}");
                rti.create_federation_execution(&name, vec![doc("aircraft/module1.fmod")], None)
                    .unwrap();
                let mut order = vec!["a", "b", "c"];
                order.shuffle(&mut rng(i));
                for f in order {
                    rti.join_federation_execution(f, &name, vec![doc("aircraft/module2.fmod")])
                        .unwrap();
                }
                rti.mom_snapshot(&name).unwrap().current_fdd
            })
        })
        .collect();
    let composite = String::from_utf8(read_fixture("aircraft/composite.fmod")).unwrap();
    for t in threads {
        assert_eq!(t.join().unwrap(), composite);
    }
    assert_eq!(rti.federation_names().len(), 8);
}

#[test]
fn event_log_records_successes_only() {
    let mut fed = FederationExecution::create("F", vec![doc("aircraft/module1.fmod")], None).unwrap();
    fed.join("a", vec![]).unwrap();
    assert!(fed.join("a", vec![]).is_err());
    assert!(fed.publish("a", "Nothing").is_err());
    fed.publish("a", "Aircraft").unwrap();
    fed.resign("a").unwrap();
    let kinds: Vec<String> = fed.event_log().iter().map(|e| e.to_string()).collect();
    assert_eq!(
        kinds,
        [
            "created F mim=default modules=[Module1]",
            "joined a modules=[]",
            "published a Aircraft",
            "resigned a"
        ]
    );
    assert!(matches!(fed.event_log()[0], Event::Created { .. }));
}
