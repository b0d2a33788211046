use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::io::serialize_module;
use crate::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiffChange {
    Added,
    Removed,
    Changed,
    Reordered,
}

impl DiffChange {
    pub fn as_str(self) -> &'static str {
        match self {
            DiffChange::Added => "added",
            DiffChange::Removed => "removed",
            DiffChange::Changed => "changed",
            DiffChange::Reordered => "reordered",
        }
    }

    fn sigil(self) -> char {
        match self {
            DiffChange::Added => '+',
            DiffChange::Removed => '-',
            DiffChange::Changed => '~',
            DiffChange::Reordered => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiffCategory {
    Identification,
    ObjectClass,
    InteractionClass,
    Attribute,
    Parameter,
    DataType,
    Dimension,
    Transportation,
    Synchronization,
    UpdateRate,
    Switches,
    Note,
    /// Differences in the serialized text not attributable to any element.
    Document,
}

impl DiffCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            DiffCategory::Identification => "identification",
            DiffCategory::ObjectClass => "objectClass",
            DiffCategory::InteractionClass => "interactionClass",
            DiffCategory::Attribute => "attribute",
            DiffCategory::Parameter => "parameter",
            DiffCategory::DataType => "dataType",
            DiffCategory::Dimension => "dimension",
            DiffCategory::Transportation => "transportation",
            DiffCategory::Synchronization => "synchronization",
            DiffCategory::UpdateRate => "updateRate",
            DiffCategory::Switches => "switches",
            DiffCategory::Note => "note",
            DiffCategory::Document => "document",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    pub change: DiffChange,
    pub category: DiffCategory,
    /// Fully-qualified class name, `class.member`, or table entry name.
    pub name: String,
    pub detail: String,
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.change.sigil(),
            self.category.as_str(),
            self.name
        )?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Differences from a first model to a second.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FomDiff {
    pub entries: Vec<DiffEntry>,
}

impl FomDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self, change: DiffChange, category: DiffCategory) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.change == change && e.category == category)
            .map(|e| e.name.as_str())
            .collect()
    }

    /// One human-readable line per entry.
    pub fn to_text(&self) -> String {
        self.entries.iter().map(|e| format!("{e}\n")).collect()
    }

    /// One `change<TAB>category<TAB>name<TAB>detail` line per entry.
    pub fn to_lines(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| {
                format!(
                    "{}\t{}\t{}\t{}",
                    e.change.as_str(),
                    e.category.as_str(),
                    e.name,
                    e.detail
                )
            })
            .collect()
    }
}

struct Differ {
    entries: Vec<DiffEntry>,
}

impl Differ {
    fn push(
        &mut self,
        change: DiffChange,
        category: DiffCategory,
        name: impl Into<String>,
        detail: impl Into<String>,
    ) {
        self.entries.push(DiffEntry {
            change,
            category,
            name: name.into(),
            detail: detail.into(),
        });
    }

    /// Reports a changed relative order of the names common to both lists.
    fn order<'a>(
        &mut self,
        category: DiffCategory,
        name: &str,
        a: impl Iterator<Item = &'a str>,
        b: impl Iterator<Item = &'a str>,
    ) {
        let a: Vec<&str> = a.collect();
        let b: Vec<&str> = b.collect();
        let in_a: HashSet<&str> = a.iter().copied().collect();
        let in_b: HashSet<&str> = b.iter().copied().collect();
        let common_a: Vec<&str> = a.iter().copied().filter(|n| in_b.contains(n)).collect();
        let common_b: Vec<&str> = b.iter().copied().filter(|n| in_a.contains(n)).collect();
        if common_a != common_b {
            self.push(
                DiffChange::Reordered,
                category,
                name,
                format!("[{}] -> [{}]", common_a.join(","), common_b.join(",")),
            );
        }
    }

    fn table<T: Named + PartialEq + fmt::Debug>(
        &mut self,
        category: DiffCategory,
        a: &NamedTable<T>,
        b: &NamedTable<T>,
    ) {
        for entry in a.iter().filter(|e| !b.contains(e.key())) {
            self.push(DiffChange::Removed, category, entry.key(), "");
        }
        for entry in b.iter() {
            match a.get(entry.key()) {
                None => self.push(DiffChange::Added, category, entry.key(), ""),
                Some(old) if old != entry => self.push(
                    DiffChange::Changed,
                    category,
                    entry.key(),
                    format!("{old:?} -> {entry:?}"),
                ),
                Some(_) => {}
            }
        }
        self.order(category, category.as_str(), a.names(), b.names());
    }

    fn classes<S: ClassSpec>(
        &mut self,
        root_a: Option<&S>,
        forest_a: &[ClassDef<S>],
        root_b: Option<&S>,
        forest_b: &[ClassDef<S>],
    ) {
        let (class_cat, member_cat) = if S::ROOT == OBJECT_ROOT {
            (DiffCategory::ObjectClass, DiffCategory::Attribute)
        } else {
            (DiffCategory::InteractionClass, DiffCategory::Parameter)
        };

        // The root carries children in both models but is only a defined
        // class when its properties are present.
        match (root_a, root_b) {
            (None, Some(_)) => self.push(DiffChange::Added, class_cat, S::ROOT, "root properties"),
            (Some(_), None) => {
                self.push(DiffChange::Removed, class_cat, S::ROOT, "root properties")
            }
            (Some(x), Some(y)) => self.body(class_cat, member_cat, S::ROOT, Some(x), Some(y)),
            (None, None) => {}
        }
        self.order(
            class_cat,
            S::ROOT,
            forest_a.iter().map(|c| c.name.as_str()),
            forest_b.iter().map(|c| c.name.as_str()),
        );

        let mut index_a: HashMap<String, &ClassDef<S>> = HashMap::new();
        walk_forest(forest_a, &mut |fqn, c| {
            index_a.insert(fqn.to_owned(), c);
        });
        let mut in_b = Vec::new();
        walk_forest(forest_b, &mut |fqn, c| in_b.push((fqn.to_owned(), c)));
        let names_b: HashSet<&str> = in_b.iter().map(|(n, _)| n.as_str()).collect();

        let mut removed = Vec::new();
        walk_forest(forest_a, &mut |fqn, _| {
            if !names_b.contains(fqn) {
                removed.push(fqn.to_owned());
            }
        });
        for fqn in removed {
            self.push(DiffChange::Removed, class_cat, fqn, "");
        }
        for (fqn, cb) in &in_b {
            let Some(ca) = index_a.get(fqn) else {
                self.push(DiffChange::Added, class_cat, fqn.clone(), "");
                continue;
            };
            self.body(
                class_cat,
                member_cat,
                fqn,
                ca.body.regular(),
                cb.body.regular(),
            );
            self.order(
                class_cat,
                fqn,
                ca.children.iter().map(|c| c.name.as_str()),
                cb.children.iter().map(|c| c.name.as_str()),
            );
        }
    }

    fn body<S: ClassSpec>(
        &mut self,
        class_cat: DiffCategory,
        member_cat: DiffCategory,
        fqn: &str,
        a: Option<&S>,
        b: Option<&S>,
    ) {
        let (a, b) = match (a, b) {
            (None, None) => return,
            (None, Some(_)) => {
                return self.push(
                    DiffChange::Changed,
                    class_cat,
                    fqn,
                    "scaffolding -> regular",
                )
            }
            (Some(_), None) => {
                return self.push(
                    DiffChange::Changed,
                    class_cat,
                    fqn,
                    "regular -> scaffolding",
                )
            }
            (Some(a), Some(b)) => (a, b),
        };
        if let Some(reason) = a.header_mismatch(b) {
            self.push(DiffChange::Changed, class_cat, fqn, reason);
        }
        let member_name = |m: &S::Member| format!("{fqn}.{}", m.name());
        for m in a
            .members()
            .iter()
            .filter(|m| !b.members().iter().any(|n| n.name() == m.name()))
        {
            self.push(DiffChange::Removed, member_cat, member_name(m), "");
        }
        for m in b.members() {
            match a.members().iter().find(|n| n.name() == m.name()) {
                None => self.push(DiffChange::Added, member_cat, member_name(m), ""),
                Some(old) if old != m => {
                    let detail = if old.same_definition(m) {
                        "semantics text differs"
                    } else {
                        "definition differs"
                    };
                    self.push(DiffChange::Changed, member_cat, member_name(m), detail)
                }
                Some(_) => {}
            }
        }
        self.order(
            member_cat,
            fqn,
            a.members().iter().map(Member::name),
            b.members().iter().map(Member::name),
        );
    }
}

fn references(refs: &[Reference]) -> String {
    let one = |r: &Reference| match &r.identification {
        ReferenceIdent::NotAvailable => format!("{}:NA", r.kind.as_str()),
        ReferenceIdent::Modules(names) => format!("{}:{}", r.kind.as_str(), names.join(",")),
    };
    refs.iter().map(one).collect::<Vec<_>>().join("; ")
}

/// Structured differences from `a` to `b`.
///
/// Classes and members are matched by fully-qualified name. The diff is
/// empty exactly when the canonical serializations of `a` and `b` are equal.
pub fn diff_foms(a: &ObjectModule, b: &ObjectModule) -> FomDiff {
    let mut d = Differ {
        entries: Vec::new(),
    };

    let (ia, ib) = (&a.identification, &b.identification);
    if ia.name != ib.name {
        d.push(
            DiffChange::Changed,
            DiffCategory::Identification,
            "name",
            format!("{} -> {}", ia.name, ib.name),
        );
    }
    if ia.model_type != ib.model_type {
        d.push(
            DiffChange::Changed,
            DiffCategory::Identification,
            "modelType",
            format!("{} -> {}", ia.model_type, ib.model_type),
        );
    }
    if ia.version != ib.version {
        d.push(
            DiffChange::Changed,
            DiffCategory::Identification,
            "version",
            format!("{} -> {}", ia.version, ib.version),
        );
    }
    if ia.references != ib.references {
        d.push(
            DiffChange::Changed,
            DiffCategory::Identification,
            "references",
            format!(
                "[{}] -> [{}]",
                references(&ia.references),
                references(&ib.references)
            ),
        );
    }

    d.classes(
        a.object_root.as_ref(),
        &a.object_classes,
        b.object_root.as_ref(),
        &b.object_classes,
    );
    d.classes(
        a.interaction_root.as_ref(),
        &a.interaction_classes,
        b.interaction_root.as_ref(),
        &b.interaction_classes,
    );

    d.table(DiffCategory::DataType, &a.data_types, &b.data_types);
    d.table(DiffCategory::Dimension, &a.dimensions, &b.dimensions);
    d.table(
        DiffCategory::Transportation,
        &a.transportations,
        &b.transportations,
    );
    d.table(
        DiffCategory::Synchronization,
        &a.synchronizations,
        &b.synchronizations,
    );
    d.table(DiffCategory::UpdateRate, &a.update_rates, &b.update_rates);

    match (&a.switches, &b.switches) {
        (None, Some(_)) => d.push(DiffChange::Added, DiffCategory::Switches, "switches", ""),
        (Some(_), None) => d.push(DiffChange::Removed, DiffCategory::Switches, "switches", ""),
        (Some(x), Some(y)) => {
            for ((key, old), (_, new)) in x.iter().zip(y.iter()).filter(|(p, q)| p.1 != q.1) {
                d.push(
                    DiffChange::Changed,
                    DiffCategory::Switches,
                    key.as_str(),
                    format!("{old} -> {new}"),
                );
            }
        }
        (None, None) => {}
    }

    d.table(DiffCategory::Note, &a.notes, &b.notes);

    if d.entries.is_empty() && serialize_module(a) != serialize_module(b) {
        d.push(
            DiffChange::Changed,
            DiffCategory::Document,
            "objectModel",
            "canonical serializations differ",
        );
    }
    FomDiff { entries: d.entries }
}
