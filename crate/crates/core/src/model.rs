//! Object model types: modules, class trees, OMT-lite tables.
//!
//! Everything here is a plain value. Modules list only the children of the
//! two HLA roots; the roots themselves are explicit only in a MIM or in a
//! composed FOM (see [`ObjectModule::object_root`]).

use std::fmt;
use std::num::NonZeroU64;
use std::str::FromStr;

use indexmap::IndexMap;

use crate::rule::RuleId;

pub const OBJECT_ROOT: &str = "HLAobjectRoot";
pub const INTERACTION_ROOT: &str = "HLAinteractionRoot";
/// First path segment of every MOM class under either root.
pub const MOM_PREFIX: &str = "HLAmanager";

/// Returns true for a non-empty, dot-free, whitespace-free identifier.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

macro_rules! text_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub const fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl FromStr for $name {
            type Err = UnknownVariant;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(UnknownVariant(stringify!($name))),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

/// Returned when a textual enum value is not one of the known variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownVariant(pub &'static str);

impl fmt::Display for UnknownVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a valid {} value", self.0)
    }
}

impl std::error::Error for UnknownVariant {}

text_enum!(ModelType {
    Fom => "FOM",
    Som => "SOM",
    FomModule => "FOMmodule",
    SomModule => "SOMmodule",
    Mim => "MIM",
});

impl ModelType {
    pub fn is_module(self) -> bool {
        matches!(self, ModelType::FomModule | ModelType::SomModule)
    }
}

text_enum!(Sharing {
    Publish => "Publish",
    Subscribe => "Subscribe",
    PublishSubscribe => "PublishSubscribe",
    Neither => "Neither",
});

text_enum!(Order {
    TimeStamp => "TimeStamp",
    Receive => "Receive",
});

text_enum!(DataTypeCategory {
    Basic => "Basic",
    Simple => "Simple",
    Enumerated => "Enumerated",
    Array => "Array",
    FixedRecord => "FixedRecord",
    Variant => "Variant",
});

text_enum!(Reliability {
    Reliable => "Reliable",
    BestEffort => "BestEffort",
});

text_enum!(SwitchValue {
    Enabled => "Enabled",
    Disabled => "Disabled",
});

text_enum!(
    /// Keys of the switches table, in canonical order.
    SwitchKey {
        AutoProvide => "autoProvide",
        AttributeScopeAdvisory => "attributeScopeAdvisory",
        AttributeRelevanceAdvisory => "attributeRelevanceAdvisory",
        ObjectClassRelevanceAdvisory => "objectClassRelevanceAdvisory",
        InteractionRelevanceAdvisory => "interactionRelevanceAdvisory",
        ServiceReporting => "serviceReporting",
    }
);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ReferenceType {
    Standalone,
    Dependency,
    ComposedFrom,
    Other(String),
}

impl ReferenceType {
    pub fn as_str(&self) -> &str {
        match self {
            ReferenceType::Standalone => "Standalone",
            ReferenceType::Dependency => "Dependency",
            ReferenceType::ComposedFrom => "ComposedFrom",
            ReferenceType::Other(text) => text,
        }
    }

    pub fn parse(text: &str) -> ReferenceType {
        match text {
            "Standalone" => ReferenceType::Standalone,
            "Dependency" => ReferenceType::Dependency,
            "ComposedFrom" => ReferenceType::ComposedFrom,
            other => ReferenceType::Other(other.to_owned()),
        }
    }
}

/// The Identification subfield of a reference: `NA` or a list of module names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ReferenceIdent {
    NotAvailable,
    Modules(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reference {
    pub kind: ReferenceType,
    pub identification: ReferenceIdent,
}

impl Reference {
    pub fn standalone() -> Self {
        Reference {
            kind: ReferenceType::Standalone,
            identification: ReferenceIdent::NotAvailable,
        }
    }

    pub fn dependency<I, S>(modules: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Reference {
            kind: ReferenceType::Dependency,
            identification: ReferenceIdent::Modules(modules.into_iter().map(Into::into).collect()),
        }
    }

    pub fn composed_from<I, S>(modules: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Reference {
            kind: ReferenceType::ComposedFrom,
            identification: ReferenceIdent::Modules(modules.into_iter().map(Into::into).collect()),
        }
    }

    fn check(&self) -> Result<(), String> {
        match (&self.kind, &self.identification) {
            (ReferenceType::Standalone, ReferenceIdent::NotAvailable) => Ok(()),
            (ReferenceType::Standalone, _) => Err("Standalone reference must use NA".into()),
            (_, ReferenceIdent::NotAvailable) => Err(format!(
                "NA is only valid for Standalone references, not {}",
                self.kind.as_str()
            )),
            (
                ReferenceType::Dependency | ReferenceType::ComposedFrom,
                ReferenceIdent::Modules(m),
            ) if m.is_empty() => Err(format!(
                "{} reference must name at least one module",
                self.kind.as_str()
            )),
            (_, ReferenceIdent::Modules(m)) => match m.iter().find(|n| !is_valid_name(n)) {
                Some(bad) => Err(format!("invalid module name {bad:?} in reference")),
                None => Ok(()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelIdentification {
    pub name: String,
    pub model_type: ModelType,
    pub version: String,
    pub references: Vec<Reference>,
}

impl ModelIdentification {
    pub fn new(name: impl Into<String>, model_type: ModelType, version: impl Into<String>) -> Self {
        ModelIdentification {
            name: name.into(),
            model_type,
            version: version.into(),
            references: Vec::new(),
        }
    }

    pub fn declares(&self, kind: &ReferenceType) -> bool {
        self.references.iter().any(|r| &r.kind == kind)
    }
}

/// Table a name reference points into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RefTable {
    DataType,
    Transportation,
    Dimension,
}

impl RefTable {
    pub fn as_str(self) -> &'static str {
        match self {
            RefTable::DataType => "dataType",
            RefTable::Transportation => "transportation",
            RefTable::Dimension => "dimension",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeDef {
    pub name: String,
    pub data_type: String,
    pub transportation: String,
    pub order: Order,
    pub dimensions: Vec<String>,
    pub semantics: String,
}

impl AttributeDef {
    pub fn new(name: impl Into<String>, data_type: impl Into<String>) -> Self {
        AttributeDef {
            name: name.into(),
            data_type: data_type.into(),
            transportation: "HLAreliable".into(),
            order: Order::Receive,
            dimensions: Vec::new(),
            semantics: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterDef {
    pub name: String,
    pub data_type: String,
    pub semantics: String,
}

impl ParameterDef {
    pub fn new(name: impl Into<String>, data_type: impl Into<String>) -> Self {
        ParameterDef {
            name: name.into(),
            data_type: data_type.into(),
            semantics: String::new(),
        }
    }
}

/// An attribute or a parameter.
pub trait Member: Clone + PartialEq + fmt::Debug {
    fn name(&self) -> &str;
    fn semantics(&self) -> &str;
    /// Field-by-field equality with the semantics text left out.
    fn same_definition(&self, other: &Self) -> bool;
    fn references(&self) -> Vec<(RefTable, &str)>;
}

impl Member for AttributeDef {
    fn name(&self) -> &str {
        &self.name
    }

    fn semantics(&self) -> &str {
        &self.semantics
    }

    fn same_definition(&self, other: &Self) -> bool {
        self.name == other.name
            && self.data_type == other.data_type
            && self.transportation == other.transportation
            && self.order == other.order
            && self.dimensions == other.dimensions
    }

    fn references(&self) -> Vec<(RefTable, &str)> {
        let mut refs = vec![
            (RefTable::DataType, self.data_type.as_str()),
            (RefTable::Transportation, self.transportation.as_str()),
        ];
        refs.extend(
            self.dimensions
                .iter()
                .map(|d| (RefTable::Dimension, d.as_str())),
        );
        refs
    }
}

impl Member for ParameterDef {
    fn name(&self) -> &str {
        &self.name
    }

    fn semantics(&self) -> &str {
        &self.semantics
    }

    fn same_definition(&self, other: &Self) -> bool {
        self.name == other.name && self.data_type == other.data_type
    }

    fn references(&self) -> Vec<(RefTable, &str)> {
        vec![(RefTable::DataType, self.data_type.as_str())]
    }
}

/// Properties of a regular object class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectClassSpec {
    pub sharing: Sharing,
    pub attributes: Vec<AttributeDef>,
}

/// Properties of a regular interaction class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionClassSpec {
    pub sharing: Sharing,
    pub transportation: String,
    pub order: Order,
    pub parameters: Vec<ParameterDef>,
}

/// Behaviour shared by the two class kinds so tree algorithms can be written once.
pub trait ClassSpec: Clone + PartialEq + fmt::Debug {
    type Member: Member;

    const ROOT: &'static str;
    const CLASS_KIND: &'static str;
    const MEMBER_KIND: &'static str;

    fn sharing(&self) -> Sharing;
    fn members(&self) -> &[Self::Member];
    fn members_mut(&mut self) -> &mut Vec<Self::Member>;
    /// Describes the first class-level difference other than members, if any.
    fn header_mismatch(&self, other: &Self) -> Option<String>;
    /// Class-level name references (members excluded).
    fn header_references(&self) -> Vec<(RefTable, &str)>;
}

impl ClassSpec for ObjectClassSpec {
    type Member = AttributeDef;

    const ROOT: &'static str = OBJECT_ROOT;
    const CLASS_KIND: &'static str = "object class";
    const MEMBER_KIND: &'static str = "attribute";

    fn sharing(&self) -> Sharing {
        self.sharing
    }

    fn members(&self) -> &[AttributeDef] {
        &self.attributes
    }

    fn members_mut(&mut self) -> &mut Vec<AttributeDef> {
        &mut self.attributes
    }

    fn header_mismatch(&self, other: &Self) -> Option<String> {
        (self.sharing != other.sharing)
            .then(|| format!("sharing differs ({} vs {})", self.sharing, other.sharing))
    }

    fn header_references(&self) -> Vec<(RefTable, &str)> {
        Vec::new()
    }
}

impl ClassSpec for InteractionClassSpec {
    type Member = ParameterDef;

    const ROOT: &'static str = INTERACTION_ROOT;
    const CLASS_KIND: &'static str = "interaction class";
    const MEMBER_KIND: &'static str = "parameter";

    fn sharing(&self) -> Sharing {
        self.sharing
    }

    fn members(&self) -> &[ParameterDef] {
        &self.parameters
    }

    fn members_mut(&mut self) -> &mut Vec<ParameterDef> {
        &mut self.parameters
    }

    fn header_mismatch(&self, other: &Self) -> Option<String> {
        if self.sharing != other.sharing {
            Some(format!(
                "sharing differs ({} vs {})",
                self.sharing, other.sharing
            ))
        } else if self.transportation != other.transportation {
            Some(format!(
                "transportation differs ({} vs {})",
                self.transportation, other.transportation
            ))
        } else if self.order != other.order {
            Some(format!("order differs ({} vs {})", self.order, other.order))
        } else {
            None
        }
    }

    fn header_references(&self) -> Vec<(RefTable, &str)> {
        vec![(RefTable::Transportation, self.transportation.as_str())]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassBody<S> {
    /// Name-only placeholder for a class defined regularly elsewhere.
    Scaffolding,
    Regular(S),
}

impl<S> ClassBody<S> {
    pub fn regular(&self) -> Option<&S> {
        match self {
            ClassBody::Regular(spec) => Some(spec),
            ClassBody::Scaffolding => None,
        }
    }
}

/// One node of an object or interaction class tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef<S> {
    pub name: String,
    pub body: ClassBody<S>,
    pub children: Vec<ClassDef<S>>,
}

pub type ObjectClassDef = ClassDef<ObjectClassSpec>;
pub type InteractionClassDef = ClassDef<InteractionClassSpec>;

impl<S: ClassSpec> ClassDef<S> {
    pub fn scaffolding(name: impl Into<String>) -> Self {
        ClassDef {
            name: name.into(),
            body: ClassBody::Scaffolding,
            children: Vec::new(),
        }
    }

    pub fn regular(name: impl Into<String>, spec: S) -> Self {
        ClassDef {
            name: name.into(),
            body: ClassBody::Regular(spec),
            children: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<ClassDef<S>>) -> Self {
        self.children = children;
        self
    }

    pub fn is_scaffolding(&self) -> bool {
        matches!(self.body, ClassBody::Scaffolding)
    }

    /// Visits this class and its descendants depth-first, pre-order, passing
    /// each node's fully-qualified name.
    pub fn walk<'a>(&'a self, parent: &str, visit: &mut impl FnMut(&str, &'a ClassDef<S>)) {
        let fqn = format!("{parent}.{}", self.name);
        visit(&fqn, self);
        for child in &self.children {
            child.walk(&fqn, visit);
        }
    }
}

impl ObjectClassDef {
    pub fn object(
        name: impl Into<String>,
        sharing: Sharing,
        attributes: Vec<AttributeDef>,
    ) -> Self {
        ClassDef::regular(
            name,
            ObjectClassSpec {
                sharing,
                attributes,
            },
        )
    }
}

/// Visits a forest of root children, producing fully-qualified names under `S::ROOT`.
pub fn walk_forest<'a, S: ClassSpec>(
    forest: &'a [ClassDef<S>],
    visit: &mut impl FnMut(&str, &'a ClassDef<S>),
) {
    for class in forest {
        class.walk(S::ROOT, visit);
    }
}

/// Fully-qualified names of every class in the forest, in depth-first order.
pub fn flatten_names<S: ClassSpec>(forest: &[ClassDef<S>]) -> Vec<String> {
    let mut names = Vec::new();
    walk_forest(forest, &mut |fqn, _| names.push(fqn.to_owned()));
    names
}

/// Looks up a class by its path segments below the root.
pub fn find_class<'a, S>(forest: &'a [ClassDef<S>], path: &[&str]) -> Option<&'a ClassDef<S>> {
    let (first, rest) = path.split_first()?;
    let class = forest.iter().find(|c| c.name == *first)?;
    if rest.is_empty() {
        Some(class)
    } else {
        find_class(&class.children, rest)
    }
}

/// Splits a fully-qualified name into path segments below the root.
/// Accepts names with or without the leading root segment.
pub fn path_below_root<'a>(fqn: &'a str, root: &str) -> Vec<&'a str> {
    let mut parts: Vec<&str> = fqn.split('.').collect();
    if parts.first() == Some(&root) {
        parts.remove(0);
    }
    parts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataTypeDef {
    pub name: String,
    pub category: DataTypeCategory,
    /// Canonical definition body; see [`canonical_definition`].
    pub definition: String,
}

impl DataTypeDef {
    pub fn new(name: impl Into<String>, category: DataTypeCategory, definition: &str) -> Self {
        DataTypeDef {
            name: name.into(),
            category,
            definition: canonical_definition(definition),
        }
    }
}

/// Collapses runs of whitespace to single spaces and trims both ends.
pub fn canonical_definition(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimension {
    pub name: String,
    pub upper_bound: NonZeroU64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transportation {
    pub name: String,
    pub reliability: Reliability,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynchronizationPoint {
    pub label: String,
    pub tag_data_type: String,
    pub semantics: String,
}

/// Positive decimal rate held in its single canonical spelling:
/// no leading zeros in the integer part, no trailing zeros in the fraction,
/// no trailing decimal point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RateHz(String);

impl RateHz {
    pub fn parse(text: &str) -> Option<RateHz> {
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) {
            return None;
        }
        let int_part = int_part.trim_start_matches('0');
        let frac_part = frac_part.trim_end_matches('0');
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        Some(if frac_part.is_empty() {
            RateHz(int_part.to_owned())
        } else {
            RateHz(format!("{int_part}.{frac_part}"))
        })
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RateHz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateRate {
    pub name: String,
    pub rate: RateHz,
}

/// The switches table. All six keys are always present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Switches {
    values: [SwitchValue; 6],
}

impl Switches {
    pub fn all(value: SwitchValue) -> Self {
        Switches { values: [value; 6] }
    }

    fn index(key: SwitchKey) -> usize {
        SwitchKey::ALL
            .iter()
            .position(|k| *k == key)
            .expect("key listed in ALL")
    }

    pub fn get(&self, key: SwitchKey) -> SwitchValue {
        self.values[Self::index(key)]
    }

    pub fn set(&mut self, key: SwitchKey, value: SwitchValue) {
        self.values[Self::index(key)] = value;
    }

    pub fn with(mut self, key: SwitchKey, value: SwitchValue) -> Self {
        self.set(key, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (SwitchKey, SwitchValue)> + '_ {
        SwitchKey::ALL
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoteEntry {
    pub label: String,
    pub body: String,
}

/// Entries of a flat, name-keyed table.
pub trait Named {
    fn key(&self) -> &str;
}

macro_rules! named {
    ($($ty:ty => $field:ident),+) => {
        $(impl Named for $ty {
            fn key(&self) -> &str { &self.$field }
        })+
    };
}

named!(
    DataTypeDef => name,
    Dimension => name,
    Transportation => name,
    SynchronizationPoint => label,
    UpdateRate => name,
    NoteEntry => label
);

/// Name-keyed table that keeps insertion order. Equality is order-sensitive,
/// matching the canonical serialization.
#[derive(Debug, Clone)]
pub struct NamedTable<T>(IndexMap<String, T>);

impl<T> Default for NamedTable<T> {
    fn default() -> Self {
        NamedTable(IndexMap::new())
    }
}

impl<T: PartialEq> PartialEq for NamedTable<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().eq(other.0.iter())
    }
}

impl<T: Eq> Eq for NamedTable<T> {}

impl<T: Named> NamedTable<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an entry, handing it back if the name is already taken.
    pub fn insert(&mut self, entry: T) -> Result<(), T> {
        if self.0.contains_key(entry.key()) {
            return Err(entry);
        }
        self.0.insert(entry.key().to_owned(), entry);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.0.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &T> + ExactSizeIterator {
        self.0.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn sort_by_name(&mut self) {
        self.0.sort_keys();
    }
}

impl<T: Named> FromIterator<T> for NamedTable<T> {
    /// Later entries with a duplicate name are dropped.
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut table = NamedTable::new();
        for entry in iter {
            let _ = table.insert(entry);
        }
        table
    }
}

/// A FOM/SOM module, a MIM, or a composed FOM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectModule {
    pub identification: ModelIdentification,
    /// Properties of `HLAobjectRoot`; only a MIM or composed model sets this.
    pub object_root: Option<ObjectClassSpec>,
    /// Children of the implicit `HLAobjectRoot`.
    pub object_classes: Vec<ObjectClassDef>,
    pub interaction_root: Option<InteractionClassSpec>,
    pub interaction_classes: Vec<InteractionClassDef>,
    pub data_types: NamedTable<DataTypeDef>,
    pub dimensions: NamedTable<Dimension>,
    pub transportations: NamedTable<Transportation>,
    pub synchronizations: NamedTable<SynchronizationPoint>,
    pub update_rates: NamedTable<UpdateRate>,
    pub switches: Option<Switches>,
    pub notes: NamedTable<NoteEntry>,
}

/// An invariant violated by a constructed module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelViolation {
    pub rule: RuleId,
    pub message: String,
}

impl ModelViolation {
    fn new(rule: RuleId, message: impl Into<String>) -> Self {
        ModelViolation {
            rule,
            message: message.into(),
        }
    }
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

impl ObjectModule {
    pub fn new(identification: ModelIdentification) -> Self {
        ObjectModule {
            identification,
            object_root: None,
            object_classes: Vec::new(),
            interaction_root: None,
            interaction_classes: Vec::new(),
            data_types: NamedTable::new(),
            dimensions: NamedTable::new(),
            transportations: NamedTable::new(),
            synchronizations: NamedTable::new(),
            update_rates: NamedTable::new(),
            switches: None,
            notes: NamedTable::new(),
        }
    }

    /// Empty FOM module with the given name and version 1.0.
    pub fn fom_module(name: impl Into<String>) -> Self {
        ObjectModule::new(ModelIdentification::new(name, ModelType::FomModule, "1.0"))
    }

    pub fn name(&self) -> &str {
        &self.identification.name
    }

    pub fn object_class_names(&self) -> Vec<String> {
        flatten_names(&self.object_classes)
    }

    pub fn interaction_class_names(&self) -> Vec<String> {
        flatten_names(&self.interaction_classes)
    }

    pub fn find_object_class(&self, fqn: &str) -> Option<&ObjectClassDef> {
        find_class(&self.object_classes, &path_below_root(fqn, OBJECT_ROOT))
    }

    pub fn find_interaction_class(&self, fqn: &str) -> Option<&InteractionClassDef> {
        find_class(
            &self.interaction_classes,
            &path_below_root(fqn, INTERACTION_ROOT),
        )
    }

    /// Fully-qualified names of every scaffolding class, objects first.
    pub fn scaffolding_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        walk_forest(&self.object_classes, &mut |fqn, c| {
            if c.is_scaffolding() {
                names.push(fqn.to_owned());
            }
        });
        walk_forest(&self.interaction_classes, &mut |fqn, c| {
            if c.is_scaffolding() {
                names.push(fqn.to_owned());
            }
        });
        names
    }

    /// Every name reference made by the module, with a description of where it occurs.
    pub fn name_references(&self) -> Vec<(RefTable, String, String)> {
        let mut refs = Vec::new();
        fn collect<'a, S: ClassSpec>(
            root: Option<&'a S>,
            forest: &'a [ClassDef<S>],
            refs: &mut Vec<(RefTable, String, String)>,
        ) {
            let mut add = |fqn: &str, spec: &S| {
                for (table, name) in spec.header_references() {
                    refs.push((table, name.to_owned(), fqn.to_owned()));
                }
                for member in spec.members() {
                    for (table, name) in member.references() {
                        refs.push((table, name.to_owned(), format!("{fqn}.{}", member.name())));
                    }
                }
            };
            if let Some(spec) = root {
                add(S::ROOT, spec);
            }
            walk_forest(forest, &mut |fqn, class| {
                if let ClassBody::Regular(spec) = &class.body {
                    add(fqn, spec);
                }
            });
        }
        collect(self.object_root.as_ref(), &self.object_classes, &mut refs);
        collect(
            self.interaction_root.as_ref(),
            &self.interaction_classes,
            &mut refs,
        );
        for sync in self.synchronizations.iter() {
            refs.push((
                RefTable::DataType,
                sync.tag_data_type.clone(),
                format!("synchronization {}", sync.label),
            ));
        }
        refs
    }

    pub fn defines(&self, table: RefTable, name: &str) -> bool {
        match table {
            RefTable::DataType => self.data_types.contains(name),
            RefTable::Transportation => self.transportations.contains(name),
            RefTable::Dimension => self.dimensions.contains(name),
        }
    }

    /// Checks the structural invariants a module must satisfy regardless of
    /// how it was built. Superclass closure holds by construction of the
    /// tree representation; the document parser enforces it for flat
    /// declarations.
    pub fn validate(&self) -> Vec<ModelViolation> {
        let mut out = Vec::new();
        let ident = &self.identification;
        if !is_valid_name(&ident.name) {
            out.push(ModelViolation::new(
                RuleId::MissingIdentification,
                format!("invalid model name {:?}", ident.name),
            ));
        }
        if ident.version.trim().is_empty() {
            out.push(ModelViolation::new(
                RuleId::MissingIdentification,
                "empty version",
            ));
        }
        for reference in &ident.references {
            if let Err(msg) = reference.check() {
                out.push(ModelViolation::new(RuleId::References, msg));
            }
        }
        if ident.model_type.is_module() {
            for kind in [ReferenceType::Dependency, ReferenceType::ComposedFrom] {
                let count = ident.references.iter().filter(|r| r.kind == kind).count();
                if count > 1 {
                    out.push(ModelViolation::new(
                        RuleId::References,
                        format!(
                            "at most one {} reference is allowed, found {count}",
                            kind.as_str()
                        ),
                    ));
                }
            }
            if self.object_root.is_some() {
                out.push(ModelViolation::new(
                    RuleId::RootDefinition,
                    format!("module defines {OBJECT_ROOT}"),
                ));
            }
            if self.interaction_root.is_some() {
                out.push(ModelViolation::new(
                    RuleId::RootDefinition,
                    format!("module defines {INTERACTION_ROOT}"),
                ));
            }
            check_mom(&self.object_classes, &mut out);
            check_mom(&self.interaction_classes, &mut out);
        }
        if let Some(spec) = &self.object_root {
            check_members(OBJECT_ROOT, spec, &mut out);
        }
        if let Some(spec) = &self.interaction_root {
            check_members(INTERACTION_ROOT, spec, &mut out);
        }
        check_forest(&self.object_classes, OBJECT_ROOT, &mut out);
        check_forest(&self.interaction_classes, INTERACTION_ROOT, &mut out);
        out
    }
}

fn check_mom<S: ClassSpec>(forest: &[ClassDef<S>], out: &mut Vec<ModelViolation>) {
    if let Some(manager) = forest.iter().find(|c| c.name == MOM_PREFIX) {
        manager.walk(S::ROOT, &mut |fqn, class| {
            if !class.is_scaffolding() {
                out.push(ModelViolation::new(
                    RuleId::MomDefinition,
                    format!(
                        "module gives a regular definition of MOM {} {fqn}",
                        S::CLASS_KIND
                    ),
                ));
            }
        });
    }
}

fn check_members<S: ClassSpec>(fqn: &str, spec: &S, out: &mut Vec<ModelViolation>) {
    let mut seen = std::collections::HashSet::new();
    for member in spec.members() {
        if !is_valid_name(member.name()) {
            out.push(ModelViolation::new(
                RuleId::InvalidName,
                format!(
                    "invalid {} name {:?} in {fqn}",
                    S::MEMBER_KIND,
                    member.name()
                ),
            ));
        }
        if !seen.insert(member.name()) {
            out.push(ModelViolation::new(
                RuleId::Duplicate,
                format!("duplicate {} {} in {fqn}", S::MEMBER_KIND, member.name()),
            ));
        }
    }
}

fn check_forest<S: ClassSpec>(forest: &[ClassDef<S>], parent: &str, out: &mut Vec<ModelViolation>) {
    let mut seen = std::collections::HashSet::new();
    for class in forest {
        let fqn = format!("{parent}.{}", class.name);
        if !is_valid_name(&class.name) {
            out.push(ModelViolation::new(
                RuleId::InvalidName,
                format!("invalid class name {:?} under {parent}", class.name),
            ));
        }
        if !seen.insert(class.name.as_str()) {
            out.push(ModelViolation::new(
                RuleId::Duplicate,
                format!("duplicate {} {fqn}", S::CLASS_KIND),
            ));
        }
        if let ClassBody::Regular(spec) = &class.body {
            check_members(&fqn, spec, out);
        }
        check_forest(&class.children, &fqn, out);
    }
}
