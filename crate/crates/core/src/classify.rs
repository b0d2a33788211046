//! Standalone / dependent classification of modules.

use std::fmt;

use crate::mim::default_mim;
use crate::model::{ObjectModule, ReferenceType};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    Standalone,
    Dependent,
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModuleKind::Standalone => "Standalone",
            ModuleKind::Dependent => "Dependent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: ModuleKind,
    /// Why the module is dependent; empty for standalone modules.
    pub reasons: Vec<String>,
    /// Set when the declared References type disagrees with the structure.
    pub warnings: Vec<String>,
}

/// Classifies a module from its structure. A module is dependent when it
/// contains scaffolding, references names defined neither in itself nor in
/// the default MIM, or declares a Dependency reference.
pub fn classify_module(module: &ObjectModule) -> Classification {
    let mim = default_mim();
    let mut reasons = Vec::new();

    for fqn in module.scaffolding_names() {
        reasons.push(format!("scaffolding {fqn}"));
    }
    for (table, name, at) in module.name_references() {
        if !module.defines(table, &name) && !mim.defines(table, &name) {
            reasons.push(format!(
                "{at} references undefined {} {name}",
                table.as_str()
            ));
        }
    }
    if module.identification.declares(&ReferenceType::Dependency) {
        reasons.push("declares a Dependency reference".into());
    }

    let kind = if reasons.is_empty() {
        ModuleKind::Standalone
    } else {
        ModuleKind::Dependent
    };
    let mut warnings = Vec::new();
    if kind == ModuleKind::Dependent && module.identification.declares(&ReferenceType::Standalone) {
        warnings.push(format!(
            "module {} declares Standalone but is Dependent ({})",
            module.name(),
            reasons[0]
        ));
    }
    Classification {
        kind,
        reasons,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    #[test]
    fn empty_module_is_standalone() {
        let c = classify_module(&ObjectModule::fom_module("Empty"));
        assert_eq!(c.kind, ModuleKind::Standalone);
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn scaffolding_makes_dependent() {
        let mut m = ObjectModule::fom_module("M");
        m.object_classes = vec![ObjectClassDef::scaffolding("Aircraft")];
        assert_eq!(classify_module(&m).kind, ModuleKind::Dependent);
    }

    #[test]
    fn dangling_type_makes_dependent_and_warns_on_standalone_claim() {
        let mut m = ObjectModule::fom_module("M");
        m.identification.references.push(Reference::standalone());
        m.object_classes = vec![ObjectClassDef::object(
            "Ship",
            Sharing::Publish,
            vec![AttributeDef::new("Hull", "HullType")],
        )];
        let c = classify_module(&m);
        assert_eq!(c.kind, ModuleKind::Dependent);
        assert_eq!(c.warnings.len(), 1);
        m.data_types
            .insert(DataTypeDef::new(
                "HullType",
                DataTypeCategory::Simple,
                "HLAinteger32BE",
            ))
            .unwrap();
        let c = classify_module(&m);
        assert_eq!(c.kind, ModuleKind::Standalone);
        assert_eq!(c, classify_module(&m));
    }

    #[test]
    fn dependency_reference_makes_dependent() {
        let mut m = ObjectModule::fom_module("M");
        m.identification
            .references
            .push(Reference::dependency(["Other"]));
        assert_eq!(classify_module(&m).kind, ModuleKind::Dependent);
    }
}
