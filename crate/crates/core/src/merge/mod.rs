//! The merge engine.
//!
//! A [`CurrentFom`] starts from one MIM and grows by atomic load sets. Each
//! load set is merged against a working copy: class trees top-down via
//! [`merge_class_tree`], flat tables via [`merge_tables`]. Only when every
//! module in the set merges, every scaffolding class is resolved and every
//! name reference resolves does the working copy replace the current state.

mod diff;
mod equivalence;
mod tables;
mod tree;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use diff::{diff_foms, DiffCategory, DiffChange, DiffEntry, FomDiff};
pub use equivalence::{
    check_extension_policy, classes_equivalent, Equivalence, PolicyViolation, Side,
};
pub use tables::{merge_tables, TableMergeReport};
pub use tree::{merge_class_tree, TreeMergeReport};

use crate::io::serialize_module;
use crate::mim::default_mim;
use crate::model::*;
use crate::rule::RuleId;

/// Why a load set was refused.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct Rejection {
    /// Module being merged when the failure was detected.
    pub module: Option<String>,
    /// Fully-qualified class name or `table:entry` of the offending element.
    pub element: Option<String>,
    pub rule: RuleId,
    pub reason: String,
}

impl Rejection {
    pub fn new(rule: RuleId, reason: impl Into<String>) -> Self {
        Rejection {
            module: None,
            element: None,
            rule,
            reason: reason.into(),
        }
    }

    pub fn at(mut self, element: &str) -> Self {
        self.element = Some(element.to_owned());
        self
    }

    pub fn in_module(mut self, module: &str) -> Self {
        self.module.get_or_insert_with(|| module.to_owned());
        self
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rule)?;
        if let Some(module) = &self.module {
            write!(f, " module {module}")?;
        }
        if let Some(element) = &self.element {
            write!(f, " at {element}")?;
        }
        write!(f, ": {}", self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    Rejected(Rejection),
}

/// Outcome of one load set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeReport {
    pub outcome: Outcome,
    /// Classes present after the load that were absent before, in the
    /// depth-first order of the merged model.
    pub added_classes: Vec<String>,
    pub duplicate_classes_ignored: Vec<String>,
    pub scaffolding_resolved: Vec<String>,
    pub added_table_entries: BTreeMap<String, Vec<String>>,
    /// Modules skipped as repeated descriptions of an already loaded module.
    pub repeated_modules: Vec<String>,
    pub warnings: Vec<String>,
}

impl MergeReport {
    fn accepted() -> Self {
        MergeReport {
            outcome: Outcome::Accepted,
            added_classes: Vec::new(),
            duplicate_classes_ignored: Vec::new(),
            scaffolding_resolved: Vec::new(),
            added_table_entries: BTreeMap::new(),
            repeated_modules: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn rejected(rejection: Rejection) -> Self {
        MergeReport {
            outcome: Outcome::Rejected(rejection),
            ..MergeReport::accepted()
        }
    }

    pub fn is_accepted(&self) -> bool {
        self.outcome == Outcome::Accepted
    }

    /// Line-delimited `key<TAB>value` emission.
    pub fn to_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        match &self.outcome {
            Outcome::Accepted => lines.push("outcome\taccepted".to_owned()),
            Outcome::Rejected(r) => {
                lines.push("outcome\trejected".to_owned());
                lines.push(format!("rule\t{}", r.rule));
                if let Some(m) = &r.module {
                    lines.push(format!("module\t{m}"));
                }
                if let Some(e) = &r.element {
                    lines.push(format!("element\t{e}"));
                }
                lines.push(format!("reason\t{}", r.reason));
            }
        }
        let push_all = |lines: &mut Vec<String>, key: &str, items: &[String]| {
            lines.extend(items.iter().map(|i| format!("{key}\t{i}")));
        };
        push_all(&mut lines, "added", &self.added_classes);
        push_all(&mut lines, "duplicate", &self.duplicate_classes_ignored);
        push_all(&mut lines, "resolved", &self.scaffolding_resolved);
        push_all(&mut lines, "repeated", &self.repeated_modules);
        for (table, names) in &self.added_table_entries {
            lines.extend(names.iter().map(|n| format!("added-entry\t{table}:{n}")));
        }
        push_all(&mut lines, "warning", &self.warnings);
        lines
    }
}

/// A run-time handle: a positive integer, never reused within one Current FOM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Handle(u64);

impl Handle {
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Handle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HandleTable {
    object_classes: BTreeMap<String, Handle>,
    interaction_classes: BTreeMap<String, Handle>,
    attributes: BTreeMap<(String, String), Handle>,
    next_object: u64,
    next_interaction: u64,
    next_attribute: u64,
}

fn allocate(next: &mut u64) -> Handle {
    *next += 1;
    Handle(*next)
}

impl HandleTable {
    pub fn object_class(&self, fqn: &str) -> Option<Handle> {
        self.object_classes.get(fqn).copied()
    }

    pub fn interaction_class(&self, fqn: &str) -> Option<Handle> {
        self.interaction_classes.get(fqn).copied()
    }

    pub fn attribute(&self, class_fqn: &str, attribute: &str) -> Option<Handle> {
        self.attributes
            .get(&(class_fqn.to_owned(), attribute.to_owned()))
            .copied()
    }

    pub fn object_classes(&self) -> impl Iterator<Item = (&str, Handle)> {
        self.object_classes.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn interaction_classes(&self) -> impl Iterator<Item = (&str, Handle)> {
        self.interaction_classes
            .iter()
            .map(|(k, v)| (k.as_str(), *v))
    }

    pub fn attributes(&self) -> impl Iterator<Item = (&str, &str, Handle)> {
        self.attributes
            .iter()
            .map(|((c, a), h)| (c.as_str(), a.as_str(), *h))
    }

    /// Assigns handles to every class and attribute of `model` that has
    /// none yet, in depth-first order, continuing from the previous maximum.
    fn assign(&mut self, model: &ObjectModule) {
        let mut visit_object = |fqn: &str, spec: &ObjectClassSpec| {
            if !self.object_classes.contains_key(fqn) {
                let h = allocate(&mut self.next_object);
                self.object_classes.insert(fqn.to_owned(), h);
            }
            for attr in &spec.attributes {
                let key = (fqn.to_owned(), attr.name.clone());
                if !self.attributes.contains_key(&key) {
                    let h = allocate(&mut self.next_attribute);
                    self.attributes.insert(key, h);
                }
            }
        };
        if let Some(root) = &model.object_root {
            visit_object(OBJECT_ROOT, root);
        }
        walk_forest(&model.object_classes, &mut |fqn, class| {
            let empty = ObjectClassSpec {
                sharing: Sharing::Neither,
                attributes: Vec::new(),
            };
            visit_object(fqn, class.body.regular().unwrap_or(&empty));
        });

        let mut visit_interaction = |fqn: &str| {
            if !self.interaction_classes.contains_key(fqn) {
                let h = allocate(&mut self.next_interaction);
                self.interaction_classes.insert(fqn.to_owned(), h);
            }
        };
        if model.interaction_root.is_some() {
            visit_interaction(INTERACTION_ROOT);
        }
        walk_forest(&model.interaction_classes, &mut |fqn, _| {
            visit_interaction(fqn)
        });
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct LoadedModule {
    version: String,
    canonical: String,
}

/// Name given to the composed model's identification.
pub const CURRENT_FOM_NAME: &str = "CurrentFOM";

/// The stateful union of one MIM and every module loaded so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurrentFom {
    merged: ObjectModule,
    module_designators: Vec<String>,
    mim_designator: String,
    loaded: BTreeMap<String, LoadedModule>,
    handles: HandleTable,
    generation: u64,
}

impl CurrentFom {
    /// Starts a Current FOM from a MIM. The MIM must define both roots and
    /// be self-contained.
    pub fn new(mim: ObjectModule) -> Result<CurrentFom, Rejection> {
        let invalid =
            |reason: String| Rejection::new(RuleId::InvalidMim, reason).in_module(mim.name());
        if mim.identification.model_type != ModelType::Mim {
            return Err(invalid(format!(
                "model type is {}, expected MIM",
                mim.identification.model_type
            )));
        }
        if let Some(v) = mim.validate().into_iter().next() {
            return Err(invalid(v.to_string()));
        }
        if mim.object_root.is_none() || mim.interaction_root.is_none() {
            return Err(invalid(format!(
                "MIM must define {OBJECT_ROOT} and {INTERACTION_ROOT}"
            )));
        }
        if let Some(fqn) = mim.scaffolding_names().first() {
            return Err(invalid(format!("MIM may not contain scaffolding ({fqn})")));
        }
        if let Some((table, name, site)) = mim
            .name_references()
            .into_iter()
            .find(|(t, n, _)| !mim.defines(*t, n))
        {
            return Err(invalid(format!(
                "{site} references undefined {} {name}",
                table.as_str()
            )));
        }

        let mut merged = mim.clone();
        merged.identification = ModelIdentification::new(CURRENT_FOM_NAME, ModelType::Fom, "1.0");
        let mut fom = CurrentFom {
            merged,
            module_designators: Vec::new(),
            mim_designator: mim.name().to_owned(),
            loaded: BTreeMap::from([(
                mim.name().to_owned(),
                LoadedModule {
                    version: mim.identification.version.clone(),
                    canonical: serialize_module(&mim),
                },
            )]),
            handles: HandleTable::default(),
            generation: 0,
        };
        fom.finish();
        Ok(fom)
    }

    pub fn with_default_mim() -> CurrentFom {
        CurrentFom::new(default_mim()).expect("default MIM is valid")
    }

    /// The composed model. Contains no scaffolding.
    pub fn merged_model(&self) -> &ObjectModule {
        &self.merged
    }

    /// Canonical serialization of the composed model.
    pub fn fdd(&self) -> String {
        serialize_module(&self.merged)
    }

    /// Names of loaded FOM modules in load order, excluding the MIM.
    pub fn module_designators(&self) -> &[String] {
        &self.module_designators
    }

    pub fn mim_designator(&self) -> &str {
        &self.mim_designator
    }

    /// Number of successful loads.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn handles(&self) -> &HandleTable {
        &self.handles
    }

    pub fn is_loaded(&self, module_name: &str) -> bool {
        self.loaded.contains_key(module_name)
    }

    /// Applies a load set atomically. On rejection `self` is left untouched.
    pub fn load(&mut self, load_set: &[ObjectModule]) -> Result<MergeReport, Rejection> {
        let (next, report) = merge_modules(self, load_set)?;
        *self = next;
        Ok(report)
    }

    /// Sorts siblings and table entries by name, rewrites the composition
    /// reference and assigns handles to anything new.
    fn finish(&mut self) {
        canonicalize(&mut self.merged);
        let constituents: Vec<&str> = self.loaded.keys().map(String::as_str).collect();
        self.merged.identification.references = vec![Reference::composed_from(constituents)];
        self.handles.assign(&self.merged);
    }
}

fn sort_forest<S>(forest: &mut [ClassDef<S>]) {
    forest.sort_by(|a, b| a.name.cmp(&b.name));
    for class in forest {
        sort_forest(&mut class.children);
    }
}

/// Orders a composed model so its serialization does not depend on the
/// order modules were loaded in.
fn canonicalize(model: &mut ObjectModule) {
    sort_forest(&mut model.object_classes);
    sort_forest(&mut model.interaction_classes);
    model.data_types.sort_by_name();
    model.dimensions.sort_by_name();
    model.transportations.sort_by_name();
    model.synchronizations.sort_by_name();
    model.update_rates.sort_by_name();
    model.notes.sort_by_name();
}

fn all_class_names(model: &ObjectModule) -> Vec<String> {
    let mut names = model.object_class_names();
    names.extend(model.interaction_class_names());
    names
}

/// Merges a load set into a copy of `current`.
///
/// Modules are applied in order. A module whose name and version match an
/// already loaded module, with identical canonical content, is a repeated
/// description and skipped. After the whole set, scaffolding must be
/// resolved and every reference must resolve; only then are handles
/// assigned and the generation advanced.
pub fn merge_modules(
    current: &CurrentFom,
    load_set: &[ObjectModule],
) -> Result<(CurrentFom, MergeReport), Rejection> {
    if load_set.is_empty() {
        return Err(Rejection::new(RuleId::EmptyLoadSet, "load set is empty"));
    }
    let mut work = current.clone();
    let mut report = MergeReport::accepted();
    let before: BTreeSet<String> = all_class_names(&work.merged).into_iter().collect();

    for module in load_set {
        let name = module.name();
        let reject = |r: Rejection| r.in_module(name);
        if module.identification.model_type == ModelType::Mim {
            return Err(reject(Rejection::new(
                RuleId::MimInLoadSet,
                format!(
                    "a federation has exactly one MIM ({}); MIMs cannot be loaded later",
                    work.mim_designator
                ),
            )));
        }
        if let Some(v) = module.validate().into_iter().next() {
            return Err(reject(Rejection::new(v.rule, v.message)));
        }
        let canonical = serialize_module(module);
        if let Some(previous) = work.loaded.get(name) {
            if previous.version == module.identification.version && previous.canonical == canonical
            {
                report.repeated_modules.push(name.to_owned());
                report.warnings.push(format!(
                    "module {name} is already loaded; repeated description ignored"
                ));
                continue;
            }
            let reason = if previous.version == module.identification.version {
                format!(
                    "module {name} version {} is already loaded with different content",
                    previous.version
                )
            } else {
                format!(
                    "module {name} is already loaded as version {}, cannot load version {}",
                    previous.version, module.identification.version
                )
            };
            return Err(reject(Rejection::new(RuleId::ModuleIdentity, reason)));
        }

        let mut fragment = TreeMergeReport::default();
        tree::merge_into(
            &mut work.merged.object_classes,
            &module.object_classes,
            &mut fragment,
        )
        .map_err(reject)?;
        tree::merge_into(
            &mut work.merged.interaction_classes,
            &module.interaction_classes,
            &mut fragment,
        )
        .map_err(reject)?;
        let tables = merge_tables(&mut work.merged, module).map_err(reject)?;

        report
            .duplicate_classes_ignored
            .extend(fragment.duplicates_ignored);
        report
            .scaffolding_resolved
            .extend(fragment.scaffolding_resolved);
        report.warnings.extend(
            fragment
                .warnings
                .into_iter()
                .map(|w| format!("{name}: {w}")),
        );
        report
            .warnings
            .extend(tables.warnings.into_iter().map(|w| format!("{name}: {w}")));
        for (table, names) in tables.added {
            report
                .added_table_entries
                .entry(table)
                .or_default()
                .extend(names);
        }
        work.loaded.insert(
            name.to_owned(),
            LoadedModule {
                version: module.identification.version.clone(),
                canonical,
            },
        );
        work.module_designators.push(name.to_owned());
    }

    if let Some(fqn) = work.merged.scaffolding_names().into_iter().next() {
        let owner = load_set
            .iter()
            .find(|m| m.scaffolding_names().contains(&fqn))
            .map(|m| m.name().to_owned());
        return Err(Rejection {
            module: owner,
            element: Some(fqn.clone()),
            rule: RuleId::UnresolvedScaffolding,
            reason: format!(
                "scaffolding {fqn} has no regular definition in the current FOM or in this load set"
            ),
        });
    }

    let merged = &work.merged;
    if let Some((table, name, site)) = merged
        .name_references()
        .into_iter()
        .find(|(t, n, _)| !merged.defines(*t, n))
    {
        let owner = load_set
            .iter()
            .find(|m| {
                m.name_references()
                    .iter()
                    .any(|(t, n, s)| *t == table && *n == name && *s == site)
            })
            .map(|m| m.name().to_owned());
        return Err(Rejection {
            module: owner,
            element: Some(site.clone()),
            rule: RuleId::DanglingReference,
            reason: format!("{site} references undefined {} {name}", table.as_str()),
        });
    }

    work.finish();
    work.generation += 1;
    report.added_classes = all_class_names(&work.merged)
        .into_iter()
        .filter(|n| !before.contains(n))
        .collect();
    report.duplicate_classes_ignored.dedup();
    Ok((work, report))
}
