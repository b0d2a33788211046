//! Seeded generators for modules and load sets.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::num::NonZeroU64;
use std::path::PathBuf;

use fomforge::model::*;
use fomforge::RuleId;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn read_fixture(path: &str) -> Vec<u8> {
    std::fs::read(fixtures().join(path)).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn parse_fixture(path: &str) -> ObjectModule {
    fomforge::parse_module(&read_fixture(path))
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .module
}

const WORDS: &[&str] = &[
    "Aircraft", "Vehicle", "Sensor", "Radar", "Ship", "Convoy", "Depot", "Signal", "Track", "Unit",
    "Cell", "Node", "Route", "Beacon", "Target", "Order", "Report", "Probe", "Relay", "Station",
];

const BASE_TYPES: &[&str] = &[
    "HLAunicodeString",
    "HLAinteger32BE",
    "HLAfloat64BE",
    "HLAboolean",
];

fn pick<'a, T>(rng: &mut TestRng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("non-empty")
}

/// Text that exercises escaping: markup characters, quotes, tabs, CR/LF
/// and non-ASCII, with leading and trailing spaces.
fn awkward_text(rng: &mut TestRng) -> String {
    const PIECES: &[&str] = &[
        "plain", " & ", "<tag>", "\"q\"", "'a'", "\t", "\r\n", "\n", "ü", "→", "]]>", "  ", "x>y",
        ";",
    ];
    let n = rng.gen_range(0..6);
    (0..n).map(|_| *pick(rng, PIECES)).collect()
}

fn sharing(rng: &mut TestRng) -> Sharing {
    *pick(rng, Sharing::ALL)
}

fn attribute(rng: &mut TestRng, name: String, types: &[String]) -> AttributeDef {
    let mut a = AttributeDef::new(name, pick(rng, types).clone());
    a.transportation = pick(rng, &["HLAreliable", "HLAbestEffort"]).to_string();
    a.order = *pick(rng, Order::ALL);
    if rng.gen_bool(0.2) {
        a.dimensions.push("HLAfederateDimension".into());
    }
    if rng.gen_bool(0.3) {
        a.semantics = awkward_text(rng);
    }
    a
}

fn parameter(rng: &mut TestRng, name: String, types: &[String]) -> ParameterDef {
    let mut p = ParameterDef::new(name, pick(rng, types).clone());
    if rng.gen_bool(0.3) {
        p.semantics = awkward_text(rng);
    }
    p
}

fn object_spec(rng: &mut TestRng, prefix: &str, types: &[String]) -> ObjectClassSpec {
    let n = rng.gen_range(0..=4);
    ObjectClassSpec {
        sharing: sharing(rng),
        attributes: (0..n)
            .map(|i| attribute(rng, format!("{prefix}A{i}"), types))
            .collect(),
    }
}

fn interaction_spec(rng: &mut TestRng, prefix: &str, types: &[String]) -> InteractionClassSpec {
    let n = rng.gen_range(0..=3);
    InteractionClassSpec {
        sharing: sharing(rng),
        transportation: pick(rng, &["HLAreliable", "HLAbestEffort"]).to_string(),
        order: *pick(rng, Order::ALL),
        parameters: (0..n)
            .map(|i| parameter(rng, format!("{prefix}P{i}"), types))
            .collect(),
    }
}

/// A random forest of `count` classes with globally unique names
/// `<word><tag><i>`. `make` builds the body of class `i`.
fn forest<S: ClassSpec>(
    rng: &mut TestRng,
    count: usize,
    tag: &str,
    mut make: impl FnMut(&mut TestRng, &str) -> ClassBody<S>,
) -> Vec<ClassDef<S>> {
    // Parent index for every class; `None` is the root.
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut names = Vec::new();
    for i in 0..count {
        let parent = if i == 0 || rng.gen_bool(0.35) {
            None
        } else {
            Some(rng.gen_range(0..i))
        };
        parents.push(parent);
        names.push(format!("{}{tag}{i}", pick(rng, WORDS)));
    }
    let mut bodies: Vec<Option<ClassBody<S>>> = names.iter().map(|n| Some(make(rng, n))).collect();
    fn build<S: ClassSpec>(
        i: usize,
        names: &[String],
        parents: &[Option<usize>],
        bodies: &mut [Option<ClassBody<S>>],
    ) -> ClassDef<S> {
        let children = (0..names.len())
            .filter(|&j| parents[j] == Some(i))
            .map(|j| build(j, names, parents, bodies))
            .collect();
        ClassDef {
            name: names[i].clone(),
            body: bodies[i].take().expect("built once"),
            children,
        }
    }
    (0..count)
        .filter(|&i| parents[i].is_none())
        .map(|i| build(i, &names, &parents, &mut bodies))
        .collect()
}

fn random_tables(rng: &mut TestRng, m: &mut ObjectModule, tag: &str) -> Vec<String> {
    let mut types: Vec<String> = BASE_TYPES.iter().map(|s| s.to_string()).collect();
    for i in 0..rng.gen_range(0..4) {
        let name = format!("Type{tag}{i}");
        let category = *pick(rng, DataTypeCategory::ALL);
        let definition = format!("{}  {}", pick(rng, BASE_TYPES), awkward_text(rng));
        m.data_types
            .insert(DataTypeDef::new(name.clone(), category, &definition))
            .unwrap();
        types.push(name);
    }
    for i in 0..rng.gen_range(0..3) {
        let bound = NonZeroU64::new(rng.gen_range(1..=u32::MAX as u64)).unwrap();
        m.dimensions
            .insert(Dimension {
                name: format!("Dim{tag}{i}"),
                upper_bound: bound,
            })
            .unwrap();
    }
    if rng.gen_bool(0.3) {
        m.transportations
            .insert(Transportation {
                name: format!("Transport{tag}"),
                reliability: *pick(rng, Reliability::ALL),
            })
            .unwrap();
    }
    for i in 0..rng.gen_range(0..3) {
        m.synchronizations
            .insert(SynchronizationPoint {
                label: format!("Sync{tag}{i}"),
                tag_data_type: pick(rng, &types).clone(),
                semantics: awkward_text(rng),
            })
            .unwrap();
    }
    for i in 0..rng.gen_range(0..3) {
        let int = rng.gen_range(1..500u32);
        let rate = if rng.gen_bool(0.5) {
            format!("{int}")
        } else {
            format!("{int}.{}", rng.gen_range(1..99u32))
        };
        let rate = RateHz::parse(&rate).unwrap_or_else(|| RateHz::parse("1").unwrap());
        m.update_rates
            .insert(UpdateRate {
                name: format!("Rate{tag}{i}"),
                rate,
            })
            .unwrap();
    }
    if rng.gen_bool(0.3) {
        let mut s = Switches::all(SwitchValue::Enabled);
        for &key in SwitchKey::ALL {
            s.set(key, *pick(rng, SwitchValue::ALL));
        }
        m.switches = Some(s);
    }
    for i in 0..rng.gen_range(0..3) {
        m.notes
            .insert(NoteEntry {
                label: format!("Note{tag}{i}"),
                body: awkward_text(rng),
            })
            .unwrap();
    }
    types
}

/// A random module that passes validation: classes, members, every table
/// kind, scaffolding, references and text needing escapes.
pub fn random_module(rng: &mut TestRng, index: usize) -> ObjectModule {
    let model_type = *pick(rng, &[ModelType::FomModule, ModelType::SomModule]);
    let mut m = ObjectModule::new(ModelIdentification::new(
        format!("Gen{index}"),
        model_type,
        format!("{}.{}", rng.gen_range(0..5), rng.gen_range(0..20)),
    ));
    if rng.gen_bool(0.4) {
        m.identification
            .references
            .push(Reference::dependency([format!("Gen{}", index + 1)]));
    } else if rng.gen_bool(0.3) {
        m.identification.references.push(Reference::standalone());
    }
    let types = random_tables(rng, &mut m, "");
    let n_obj = rng.gen_range(0..12);
    m.object_classes = forest(rng, n_obj, "O", |rng, name| {
        if rng.gen_bool(0.2) {
            ClassBody::Scaffolding
        } else {
            ClassBody::Regular(object_spec(rng, name, &types))
        }
    });
    let n_int = rng.gen_range(0..8);
    m.interaction_classes = forest(rng, n_int, "I", |rng, name| {
        if rng.gen_bool(0.2) {
            ClassBody::Scaffolding
        } else {
            ClassBody::Regular(interaction_spec(rng, name, &types))
        }
    });
    assert!(
        m.validate().is_empty(),
        "generator produced invalid module: {:?}",
        m.validate()
    );
    m
}

/// A load set whose modules pairwise pass every equivalence check and whose
/// scaffolding resolves within the set.
#[derive(Debug, Clone)]
pub struct CompatibleSet {
    pub modules: Vec<ObjectModule>,
    /// The complete model the modules were cut from (roots excluded).
    pub universe: ObjectModule,
}

fn include<S: ClassSpec>(
    rng: &mut TestRng,
    universe: &[ClassDef<S>],
    prefix: &str,
    owned: &dyn Fn(&str) -> bool,
    wanted: &BTreeSet<String>,
) -> Vec<ClassDef<S>> {
    let mut out = Vec::new();
    for class in universe {
        let fqn = format!("{prefix}.{}", class.name);
        let children = include(rng, &class.children, &fqn, owned, wanted);
        if !wanted.contains(&fqn) && children.is_empty() {
            continue;
        }
        // Owners give the regular definition; others restate it identically
        // now and then, otherwise use scaffolding.
        let body = if owned(&fqn) || (wanted.contains(&fqn) && rng.gen_bool(0.3)) {
            class.body.clone()
        } else {
            ClassBody::Scaffolding
        };
        out.push(ClassDef {
            name: class.name.clone(),
            body,
            children,
        });
    }
    out
}

/// Cuts a random universe into 1..=`max_modules` modules, each holding at
/// most 30 classes. Every class is regular in exactly its owner module.
pub fn compatible_set(rng: &mut TestRng, max_modules: usize) -> CompatibleSet {
    let k = rng.gen_range(1..=max_modules);
    let mut universe = ObjectModule::fom_module("Universe");
    let types = random_tables(rng, &mut universe, "U");
    // Keep switches out so modules agree with the MIM's table.
    universe.switches = None;
    let n_obj = rng.gen_range(1..=(8 * k).min(20));
    let n_int = rng.gen_range(1..=(4 * k).min(10));
    universe.object_classes = forest(rng, n_obj, "O", |rng, name| {
        ClassBody::Regular(object_spec(rng, name, &types))
    });
    universe.interaction_classes = forest(rng, n_int, "I", |rng, name| {
        ClassBody::Regular(interaction_spec(rng, name, &types))
    });

    let objects = flatten_names(&universe.object_classes);
    let interactions = flatten_names(&universe.interaction_classes);
    let owner = |rng: &mut TestRng, names: &[String]| -> Vec<usize> {
        names.iter().map(|_| rng.gen_range(0..k)).collect()
    };
    let obj_owner = owner(rng, &objects);
    let int_owner = owner(rng, &interactions);

    let mut modules = Vec::new();
    for i in 0..k {
        let mut m = ObjectModule::fom_module(format!("Part{i}"));
        // Every module carries the full type tables so references resolve.
        m.data_types = universe.data_types.clone();
        m.dimensions = universe.dimensions.clone();
        m.transportations = universe.transportations.clone();
        if i == 0 {
            m.synchronizations = universe.synchronizations.clone();
            m.update_rates = universe.update_rates.clone();
            m.notes = universe.notes.clone();
        } else if rng.gen_bool(0.5) {
            m.notes = universe.notes.clone();
        }
        let pick_set =
            |rng: &mut TestRng, names: &[String], owners: &[usize]| -> BTreeSet<String> {
                names
                    .iter()
                    .zip(owners)
                    .filter(|(_, &o)| o == i || rng.gen_bool(0.15))
                    .map(|(n, _)| n.clone())
                    .collect()
            };
        let wanted_obj = pick_set(rng, &objects, &obj_owner);
        let wanted_int = pick_set(rng, &interactions, &int_owner);
        let own_obj: BTreeSet<String> = objects
            .iter()
            .zip(&obj_owner)
            .filter(|(_, &o)| o == i)
            .map(|(n, _)| n.clone())
            .collect();
        let own_int: BTreeSet<String> = interactions
            .iter()
            .zip(&int_owner)
            .filter(|(_, &o)| o == i)
            .map(|(n, _)| n.clone())
            .collect();
        m.object_classes = include(
            rng,
            &universe.object_classes,
            OBJECT_ROOT,
            &|f| own_obj.contains(f),
            &wanted_obj,
        );
        m.interaction_classes = include(
            rng,
            &universe.interaction_classes,
            INTERACTION_ROOT,
            &|f| own_int.contains(f),
            &wanted_int,
        );
        assert!(m.object_class_names().len() + m.interaction_class_names().len() <= 30);
        assert!(m.validate().is_empty(), "{:?}", m.validate());
        modules.push(m);
    }
    CompatibleSet { modules, universe }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Poison {
    AttributeExtension,
    ParameterExtension,
    ConflictingDuplicate,
    UnresolvedScaffolding,
    SwitchesMismatch,
}

impl Poison {
    pub const ALL: [Poison; 5] = [
        Poison::AttributeExtension,
        Poison::ParameterExtension,
        Poison::ConflictingDuplicate,
        Poison::UnresolvedScaffolding,
        Poison::SwitchesMismatch,
    ];
}

/// Copies the path down to `fqn` as scaffolding and applies `edit` to the
/// regular copy of the target class.
fn restate<S: ClassSpec>(
    universe: &[ClassDef<S>],
    fqn: &str,
    edit: impl FnOnce(&mut ClassBody<S>),
) -> Vec<ClassDef<S>> {
    let path = path_below_root(fqn, S::ROOT);
    let target = find_class(universe, &path).expect("class exists");
    let mut node = ClassDef {
        name: target.name.clone(),
        body: target.body.clone(),
        children: Vec::new(),
    };
    edit(&mut node.body);
    for name in path[..path.len() - 1].iter().rev() {
        node = ClassDef::scaffolding(*name).with_children(vec![node]);
    }
    vec![node]
}

/// A module that must make any load set containing it fail, and the class
/// it targets (when it targets one).
pub fn poison_module(
    rng: &mut TestRng,
    kind: Poison,
    universe: &ObjectModule,
) -> (ObjectModule, Option<String>) {
    let mut m = ObjectModule::fom_module("Poison");
    m.data_types = universe.data_types.clone();
    let objects = flatten_names(&universe.object_classes);
    let interactions = flatten_names(&universe.interaction_classes);
    let target = match kind {
        Poison::AttributeExtension => {
            let fqn = pick(rng, &objects).clone();
            m.object_classes = restate(&universe.object_classes, &fqn, |body| {
                if let ClassBody::Regular(spec) = body {
                    spec.attributes
                        .push(AttributeDef::new("PoisonAttr", "HLAunicodeString"));
                }
            });
            Some(fqn)
        }
        Poison::ParameterExtension => {
            let fqn = pick(rng, &interactions).clone();
            m.interaction_classes = restate(&universe.interaction_classes, &fqn, |body| {
                if let ClassBody::Regular(spec) = body {
                    spec.parameters
                        .push(ParameterDef::new("PoisonParam", "HLAunicodeString"));
                }
            });
            Some(fqn)
        }
        Poison::ConflictingDuplicate => {
            let fqn = pick(rng, &objects).clone();
            m.object_classes = restate(&universe.object_classes, &fqn, |body| {
                if let ClassBody::Regular(spec) = body {
                    spec.sharing = match spec.sharing {
                        Sharing::Neither => Sharing::Publish,
                        _ => Sharing::Neither,
                    };
                }
            });
            Some(fqn)
        }
        Poison::UnresolvedScaffolding => {
            m.object_classes = vec![ObjectClassDef::scaffolding("Ghost").with_children(vec![
                ObjectClassDef::object("Haunt", Sharing::Publish, vec![]),
            ])];
            Some(format!("{OBJECT_ROOT}.Ghost"))
        }
        Poison::SwitchesMismatch => {
            let key = *pick(rng, SwitchKey::ALL);
            m.switches = Some(Switches::all(SwitchValue::Enabled).with(key, SwitchValue::Disabled));
            None
        }
    };
    (m, target)
}

/// Rule expected when `kind` is applied after `earlier` modules (and a
/// Current FOM that may already define the target regularly).
pub fn expected_rule(kind: Poison, target_defined_before: bool) -> RuleId {
    match kind {
        Poison::AttributeExtension if target_defined_before => RuleId::AttributeExtension,
        Poison::ParameterExtension if target_defined_before => RuleId::ParameterExtension,
        // Loaded first, the extended copy becomes the definition and the
        // owner's copy conflicts with it.
        Poison::AttributeExtension | Poison::ParameterExtension | Poison::ConflictingDuplicate => {
            RuleId::ClassConflict
        }
        Poison::UnresolvedScaffolding => RuleId::UnresolvedScaffolding,
        Poison::SwitchesMismatch => RuleId::SwitchesMismatch,
    }
}

/// Whether `fqn` is regular in any of `modules`.
pub fn defines_regular(modules: &[ObjectModule], fqn: &str) -> bool {
    modules.iter().any(|m| {
        m.find_object_class(fqn)
            .is_some_and(|c| !c.is_scaffolding())
            || m.find_interaction_class(fqn)
                .is_some_and(|c| !c.is_scaffolding())
    })
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}
