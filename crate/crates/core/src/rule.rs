//! Stable rule identifiers attached to every diagnostic and rejection.

use std::fmt;

/// A short, stable code naming the rule a diagnostic or rejection refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    /// Document is not well-formed XML.
    Malformed,
    /// Element or attribute not part of the module grammar.
    UnknownElement,
    /// Required element or attribute missing.
    MissingField,
    /// Value not in the allowed set, or not parseable.
    InvalidValue,
    /// Name is not a valid dot-free token.
    InvalidName,
    /// Duplicate sibling class, member or table entry.
    Duplicate,
    /// Identification header missing or incomplete.
    MissingIdentification,
    /// References violate the Type/Identification rules.
    References,
    /// A class is declared without its superclasses.
    Closure,
    /// A scaffolding class carries properties.
    ScaffoldingWithProperties,
    /// A non-MIM module defines an HLA root.
    RootDefinition,
    /// A non-MIM module defines a MOM class.
    MomDefinition,
    /// Switches table is missing keys.
    IncompleteSwitches,
    /// Module references names it does not define.
    DanglingInModule,

    /// Parent of a candidate class is absent from the merged tree.
    Ancestry,
    /// Attribute added to an existing object class.
    AttributeExtension,
    /// Parameter added to an existing interaction class.
    ParameterExtension,
    /// Duplicate class that is neither identical nor scaffolding.
    ClassConflict,
    /// Duplicate table entry that is not equivalent.
    TableConflict,
    /// Singleton tables present on both sides and not equal.
    SwitchesMismatch,
    /// Scaffolding left without a regular definition after a load set.
    UnresolvedScaffolding,
    /// Name reference does not resolve in the merged model.
    DanglingReference,
    /// Same module name loaded with different content or version.
    ModuleIdentity,
    /// A MIM appears in a load set.
    MimInLoadSet,
    /// Supplied MIM is unusable.
    InvalidMim,
    /// Load set is empty.
    EmptyLoadSet,

    DuplicateFederation,
    UnknownFederation,
    DuplicateFederate,
    UnknownFederate,
    FederatesJoined,
    UnknownClass,
    AmbiguousClass,
    IndexOutOfRange,
    InvalidRequest,
}

impl RuleId {
    pub const fn as_str(self) -> &'static str {
        use RuleId::*;
        match self {
            Malformed => "PARSE-001",
            UnknownElement => "PARSE-002",
            MissingField => "PARSE-003",
            InvalidValue => "PARSE-004",
            InvalidName => "NAME-001",
            Duplicate => "DUP-001",
            MissingIdentification => "IDENT-001",
            References => "REF-001",
            Closure => "CLOSURE-001",
            ScaffoldingWithProperties => "SCAFF-001",
            RootDefinition => "ROOT-001",
            MomDefinition => "MOM-001",
            IncompleteSwitches => "SWITCH-001",
            DanglingInModule => "REF-003",
            Ancestry => "EXT-001",
            AttributeExtension => "EXT-003",
            ParameterExtension => "EXT-004",
            ClassConflict => "MERGE-001",
            TableConflict => "TABLE-001",
            SwitchesMismatch => "SWITCH-002",
            UnresolvedScaffolding => "SCAFF-002",
            DanglingReference => "REF-002",
            ModuleIdentity => "MODULE-001",
            MimInLoadSet => "MIM-001",
            InvalidMim => "MIM-002",
            EmptyLoadSet => "LOAD-001",
            DuplicateFederation => "FED-001",
            UnknownFederation => "FED-002",
            DuplicateFederate => "FED-003",
            UnknownFederate => "FED-004",
            FederatesJoined => "FED-005",
            UnknownClass => "FED-006",
            AmbiguousClass => "FED-007",
            IndexOutOfRange => "FED-008",
            InvalidRequest => "FED-009",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
