use std::collections::{HashMap, HashSet};
use std::num::NonZeroU64;

use roxmltree::{Document, Node};

use super::{ParseDiagnostic, ParseErrors, ParsedModule, Severity};
use crate::io::write::ClassMarkup;
use crate::mim::default_mim;
use crate::model::*;
use crate::rule::RuleId;

/// Parses a module document.
///
/// On success the module satisfies every model invariant, including
/// superclass closure; warnings may accompany it. On failure at least one
/// error diagnostic is returned.
pub fn parse_module(document: &[u8]) -> Result<ParsedModule, ParseErrors> {
    let text = match std::str::from_utf8(document) {
        Ok(text) => text,
        Err(err) => {
            let (line, column) = line_col(document, err.valid_up_to());
            return Err(ParseErrors(vec![ParseDiagnostic {
                severity: Severity::Error,
                line,
                column,
                message: "document is not valid UTF-8".into(),
                rule: RuleId::Malformed,
            }]));
        }
    };
    let doc = match Document::parse(text) {
        Ok(doc) => doc,
        Err(err) => {
            let pos = err.pos();
            return Err(ParseErrors(vec![ParseDiagnostic {
                severity: Severity::Error,
                line: pos.row,
                column: pos.col,
                message: err.to_string(),
                rule: RuleId::Malformed,
            }]));
        }
    };

    let mut parser = Parser {
        doc: &doc,
        diagnostics: Vec::new(),
        anchors: HashMap::new(),
    };
    let module = parser.module(doc.root_element());
    let has_errors = parser
        .diagnostics
        .iter()
        .any(|d| d.severity == Severity::Error);
    match module {
        Some(module) if !has_errors => {
            parser.post_checks(&module);
            if parser
                .diagnostics
                .iter()
                .any(|d| d.severity == Severity::Error)
            {
                Err(ParseErrors(parser.diagnostics))
            } else {
                Ok(ParsedModule {
                    module,
                    warnings: parser.diagnostics,
                })
            }
        }
        _ => {
            if !has_errors {
                parser.diagnostics.push(ParseDiagnostic {
                    severity: Severity::Error,
                    line: 1,
                    column: 1,
                    message: "document could not be parsed".into(),
                    rule: RuleId::Malformed,
                });
            }
            Err(ParseErrors(parser.diagnostics))
        }
    }
}

fn line_col(bytes: &[u8], offset: usize) -> (u32, u32) {
    let before = &bytes[..offset];
    let line = before.iter().filter(|b| **b == b'\n').count() + 1;
    let column = before.iter().rev().take_while(|b| **b != b'\n').count() + 1;
    (line as u32, column as u32)
}

/// Element positions used to locate diagnostics raised after the tree is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Anchor {
    References,
    Objects,
    Interactions,
    ObjectRoot,
    InteractionRoot,
}

struct Parser<'a, 'input> {
    doc: &'a Document<'input>,
    diagnostics: Vec<ParseDiagnostic>,
    anchors: HashMap<Anchor, (u32, u32)>,
}

type Attrs<'a> = HashMap<&'a str, &'a str>;

impl<'a, 'input> Parser<'a, 'input> {
    fn position(&self, node: Node) -> (u32, u32) {
        let pos = self.doc.text_pos_at(node.range().start);
        (pos.row, pos.col)
    }

    fn report_at(
        &mut self,
        (line, column): (u32, u32),
        severity: Severity,
        rule: RuleId,
        message: String,
    ) {
        self.diagnostics.push(ParseDiagnostic {
            severity,
            line,
            column,
            message,
            rule,
        });
    }

    fn error(&mut self, node: Node, rule: RuleId, message: impl Into<String>) {
        let at = self.position(node);
        self.report_at(at, Severity::Error, rule, message.into());
    }

    fn anchor(&mut self, anchor: Anchor, node: Node) {
        let at = self.position(node);
        self.anchors.entry(anchor).or_insert(at);
    }

    fn anchored(&self, anchor: Anchor) -> (u32, u32) {
        self.anchors
            .get(&anchor)
            .copied()
            .unwrap_or_else(|| self.position(self.doc.root_element()))
    }

    /// Element children; stray non-whitespace text is reported.
    fn elements(&mut self, node: Node<'a, 'input>) -> Vec<Node<'a, 'input>> {
        let mut out = Vec::new();
        for child in node.children() {
            if child.is_element() {
                out.push(child);
            } else if child.is_text() && !child.text().unwrap_or("").trim().is_empty() {
                self.error(
                    child,
                    RuleId::UnknownElement,
                    format!("unexpected text inside <{}>", node.tag_name().name()),
                );
            }
        }
        out
    }

    /// Collects the attributes of `node`, checking required and permitted names.
    fn attrs(
        &mut self,
        node: Node<'a, 'input>,
        required: &[&str],
        optional: &[&str],
    ) -> Option<Attrs<'a>> {
        let mut map = HashMap::new();
        let mut ok = true;
        for attr in node.attributes() {
            let name = attr.name();
            if attr.namespace().is_some() || !(required.contains(&name) || optional.contains(&name))
            {
                self.error(
                    node,
                    RuleId::UnknownElement,
                    format!("unknown attribute {name:?} on <{}>", node.tag_name().name()),
                );
                ok = false;
                continue;
            }
            map.insert(name, attr.value());
        }
        for name in required {
            if !map.contains_key(name) {
                self.error(
                    node,
                    RuleId::MissingField,
                    format!("<{}> requires attribute {name:?}", node.tag_name().name()),
                );
                ok = false;
            }
        }
        ok.then_some(map)
    }

    fn no_children(&mut self, node: Node<'a, 'input>) {
        for child in self.elements(node) {
            self.error(
                child,
                RuleId::UnknownElement,
                format!(
                    "<{}> may not contain <{}>",
                    node.tag_name().name(),
                    child.tag_name().name()
                ),
            );
        }
    }

    fn name_value(&mut self, node: Node, what: &str, value: &str) -> Option<String> {
        if is_valid_name(value) {
            Some(value.to_owned())
        } else {
            self.error(
                node,
                RuleId::InvalidName,
                format!("invalid {what} name {value:?}"),
            );
            None
        }
    }

    fn enum_value<T: std::str::FromStr>(
        &mut self,
        node: Node,
        what: &str,
        value: &str,
    ) -> Option<T> {
        match value.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.error(
                    node,
                    RuleId::InvalidValue,
                    format!("invalid {what} {value:?}"),
                );
                None
            }
        }
    }

    fn text_of(&mut self, node: Node<'a, 'input>) -> String {
        for child in node.children().filter(Node::is_element) {
            self.error(
                child,
                RuleId::UnknownElement,
                format!(
                    "<{}> may not contain <{}>",
                    node.tag_name().name(),
                    child.tag_name().name()
                ),
            );
        }
        if node.attributes().len() > 0 {
            self.error(
                node,
                RuleId::UnknownElement,
                format!("<{}> takes no attributes", node.tag_name().name()),
            );
        }
        node.text().unwrap_or("").to_owned()
    }

    fn module(&mut self, root: Node<'a, 'input>) -> Option<ObjectModule> {
        if root.tag_name().name() != "objectModel" || root.tag_name().namespace().is_some() {
            self.error(
                root,
                RuleId::UnknownElement,
                format!("expected <objectModel>, found <{}>", root.tag_name().name()),
            );
            return None;
        }
        let mut ident_ok = true;
        let mut ident_attr = |p: &mut Self, key: &str| -> Option<&'a str> {
            let value = root.attribute(key);
            if value.is_none_or(|v| v.trim().is_empty()) {
                p.error(
                    root,
                    RuleId::MissingIdentification,
                    format!("identification is missing {key:?}"),
                );
                ident_ok = false;
            }
            value
        };
        let name = ident_attr(self, "name");
        let model_type = ident_attr(self, "modelType");
        let version = ident_attr(self, "version");
        for attr in root.attributes() {
            if !matches!(attr.name(), "name" | "modelType" | "version") {
                self.error(
                    root,
                    RuleId::UnknownElement,
                    format!("unknown attribute {:?} on <objectModel>", attr.name()),
                );
            }
        }
        let identification = match (name, model_type, version) {
            (Some(name), Some(model_type), Some(version)) if ident_ok => {
                let name = self.name_value(root, "model", name);
                let model_type: Option<ModelType> = self.enum_value(root, "modelType", model_type);
                ModelIdentification::new(name?, model_type?, version)
            }
            _ => return None,
        };

        let mut module = ObjectModule::new(identification);
        let mut seen_sections = HashSet::new();
        for section in self.elements(root) {
            let tag = section.tag_name().name();
            if !seen_sections.insert(tag) {
                self.error(
                    section,
                    RuleId::Duplicate,
                    format!("section <{tag}> appears twice"),
                );
                continue;
            }
            match tag {
                "references" => {
                    self.anchor(Anchor::References, section);
                    module.identification.references = self.references(section);
                }
                "objects" => {
                    self.anchor(Anchor::Objects, section);
                    let (root_spec, forest) =
                        self.forest::<ObjectClassSpec>(section, Anchor::ObjectRoot);
                    module.object_root = root_spec;
                    module.object_classes = forest;
                }
                "interactions" => {
                    self.anchor(Anchor::Interactions, section);
                    let (root_spec, forest) =
                        self.forest::<InteractionClassSpec>(section, Anchor::InteractionRoot);
                    module.interaction_root = root_spec;
                    module.interaction_classes = forest;
                }
                "dataTypes" => {
                    module.data_types = self.table(section, "dataType", |p, node| {
                        let a = p.attrs(node, &["name", "category", "definition"], &[])?;
                        let name = p.name_value(node, "data type", a["name"])?;
                        let category = p.enum_value(node, "data type category", a["category"])?;
                        p.no_children(node);
                        Some(DataTypeDef::new(name, category, a["definition"]))
                    })
                }
                "dimensions" => {
                    module.dimensions = self.table(section, "dimension", |p, node| {
                        let a = p.attrs(node, &["name", "upperBound"], &[])?;
                        let name = p.name_value(node, "dimension", a["name"])?;
                        p.no_children(node);
                        match a["upperBound"].parse::<NonZeroU64>() {
                            Ok(upper_bound) => Some(Dimension { name, upper_bound }),
                            Err(_) => {
                                p.error(
                                    node,
                                    RuleId::InvalidValue,
                                    format!(
                                        "upperBound must be a positive integer, got {:?}",
                                        a["upperBound"]
                                    ),
                                );
                                None
                            }
                        }
                    })
                }
                "transportations" => {
                    module.transportations = self.table(section, "transportation", |p, node| {
                        let a = p.attrs(node, &["name", "reliability"], &[])?;
                        let name = p.name_value(node, "transportation", a["name"])?;
                        let reliability = p.enum_value(node, "reliability", a["reliability"])?;
                        p.no_children(node);
                        Some(Transportation { name, reliability })
                    })
                }
                "synchronizations" => {
                    module.synchronizations = self.table(section, "synchronization", |p, node| {
                        let a = p.attrs(node, &["label", "tagDataType"], &["semantics"])?;
                        let label = p.name_value(node, "synchronization", a["label"])?;
                        let tag_data_type = p.name_value(node, "data type", a["tagDataType"])?;
                        p.no_children(node);
                        Some(SynchronizationPoint {
                            label,
                            tag_data_type,
                            semantics: a.get("semantics").copied().unwrap_or("").to_owned(),
                        })
                    })
                }
                "updateRates" => {
                    module.update_rates = self.table(section, "updateRate", |p, node| {
                        let a = p.attrs(node, &["name", "rate"], &[])?;
                        let name = p.name_value(node, "update rate", a["name"])?;
                        p.no_children(node);
                        match RateHz::parse(a["rate"]) {
                            Some(rate) => Some(UpdateRate { name, rate }),
                            None => {
                                p.error(
                                    node,
                                    RuleId::InvalidValue,
                                    format!("rate must be a positive decimal, got {:?}", a["rate"]),
                                );
                                None
                            }
                        }
                    })
                }
                "switches" => module.switches = self.switches(section),
                "notes" => {
                    module.notes = self.table(section, "note", |p, node| {
                        let a = p.attrs(node, &["label"], &[])?;
                        let label = p.name_value(node, "note", a["label"])?;
                        for child in node.children().filter(Node::is_element) {
                            p.error(
                                child,
                                RuleId::UnknownElement,
                                "<note> may only contain text",
                            );
                        }
                        let body: String = node
                            .children()
                            .filter(|c| c.is_text())
                            .filter_map(|c| c.text())
                            .collect();
                        Some(NoteEntry { label, body })
                    })
                }
                other => self.error(
                    section,
                    RuleId::UnknownElement,
                    format!("unknown element <{other}>"),
                ),
            }
        }
        Some(module)
    }

    fn references(&mut self, section: Node<'a, 'input>) -> Vec<Reference> {
        let mut out = Vec::new();
        for node in self.elements(section) {
            if node.tag_name().name() != "reference" {
                self.error(
                    node,
                    RuleId::UnknownElement,
                    format!(
                        "unknown element <{}> in <references>",
                        node.tag_name().name()
                    ),
                );
                continue;
            }
            let Some(a) = self.attrs(node, &["type", "idents"], &[]) else {
                continue;
            };
            self.no_children(node);
            let identification = match a["idents"].trim() {
                "NA" => ReferenceIdent::NotAvailable,
                "" => ReferenceIdent::Modules(Vec::new()),
                list => {
                    ReferenceIdent::Modules(list.split(',').map(|s| s.trim().to_owned()).collect())
                }
            };
            out.push(Reference {
                kind: ReferenceType::parse(a["type"]),
                identification,
            });
        }
        out
    }

    fn table<T: Named>(
        &mut self,
        section: Node<'a, 'input>,
        element: &str,
        mut entry: impl FnMut(&mut Self, Node<'a, 'input>) -> Option<T>,
    ) -> NamedTable<T> {
        let mut table = NamedTable::new();
        for node in self.elements(section) {
            if node.tag_name().name() != element {
                self.error(
                    node,
                    RuleId::UnknownElement,
                    format!(
                        "unknown element <{}> in <{}>",
                        node.tag_name().name(),
                        section.tag_name().name()
                    ),
                );
                continue;
            }
            if let Some(item) = entry(self, node) {
                if let Err(dup) = table.insert(item) {
                    self.error(
                        node,
                        RuleId::Duplicate,
                        format!("duplicate {element} {:?}", dup.key()),
                    );
                }
            }
        }
        table
    }

    fn switches(&mut self, section: Node<'a, 'input>) -> Option<Switches> {
        let mut values: HashMap<SwitchKey, SwitchValue> = HashMap::new();
        for node in self.elements(section) {
            if node.tag_name().name() != "switch" {
                self.error(
                    node,
                    RuleId::UnknownElement,
                    format!("unknown element <{}> in <switches>", node.tag_name().name()),
                );
                continue;
            }
            let Some(a) = self.attrs(node, &["name", "value"], &[]) else {
                continue;
            };
            self.no_children(node);
            let key: Option<SwitchKey> = self.enum_value(node, "switch name", a["name"]);
            let value: Option<SwitchValue> = self.enum_value(node, "switch value", a["value"]);
            if let (Some(key), Some(value)) = (key, value) {
                if values.insert(key, value).is_some() {
                    self.error(node, RuleId::Duplicate, format!("duplicate switch {key}"));
                }
            }
        }
        let missing: Vec<_> = SwitchKey::ALL
            .iter()
            .filter(|k| !values.contains_key(k))
            .map(|k| k.as_str())
            .collect();
        if !missing.is_empty() {
            self.error(
                section,
                RuleId::IncompleteSwitches,
                format!("switches table is missing {}", missing.join(", ")),
            );
            return None;
        }
        let mut switches = Switches::all(SwitchValue::Enabled);
        for (key, value) in values {
            switches.set(key, value);
        }
        Some(switches)
    }

    /// Parses the children of `<objects>` or `<interactions>`.
    ///
    /// Top-level classes are either nested trees or flat declarations naming
    /// their superclass path in a `parent` attribute. A top-level element
    /// named after the root either defines the root (MIM, composed models)
    /// or, as scaffolding, merely wraps the root children.
    fn forest<S: ClassGrammar>(
        &mut self,
        section: Node<'a, 'input>,
        root_anchor: Anchor,
    ) -> (Option<S>, Vec<ClassDef<S>>) {
        let mut root_spec = None;
        let mut forest: Vec<ClassDef<S>> = Vec::new();
        for node in self.elements(section) {
            if node.tag_name().name() != S::ELEMENT {
                self.error(
                    node,
                    RuleId::UnknownElement,
                    format!(
                        "unknown element <{}> in <{}>",
                        node.tag_name().name(),
                        S::SECTION
                    ),
                );
                continue;
            }
            let parent = node.attribute("parent");
            for attr in node.attributes().filter(|a| a.name() != "parent") {
                self.error(
                    node,
                    RuleId::UnknownElement,
                    format!("unknown attribute {:?} on <{}>", attr.name(), S::ELEMENT),
                );
            }
            let Some(class) = self.class::<S>(node) else {
                continue;
            };

            if parent.is_none() && class.name == S::ROOT {
                self.anchor(root_anchor, node);
                if let ClassBody::Regular(spec) = class.body {
                    if root_spec.is_some() {
                        self.error(
                            node,
                            RuleId::Duplicate,
                            format!("{} defined twice", S::ROOT),
                        );
                    }
                    root_spec = Some(spec);
                }
                for child in class.children {
                    self.attach(node, &mut forest, child, S::ROOT);
                }
                continue;
            }

            match parent {
                None => self.attach(node, &mut forest, class, S::ROOT),
                Some(path) => {
                    let segments = path_below_root(path.trim(), S::ROOT);
                    if segments.iter().any(|s| !is_valid_name(s)) {
                        self.error(
                            node,
                            RuleId::InvalidName,
                            format!("invalid parent path {path:?}"),
                        );
                        continue;
                    }
                    match resolve_mut(&mut forest, &segments) {
                        Ok(parent_class) => {
                            let parent_fqn = format!("{}.{}", S::ROOT, segments.join("."));
                            self.attach(node, &mut parent_class.children, class, &parent_fqn);
                        }
                        Err(depth) => {
                            let missing = format!("{}.{}", S::ROOT, segments[..=depth].join("."));
                            self.error(
                                node,
                                RuleId::Closure,
                                format!(
                                    "{} {} declares superclass path {path:?} but {missing} is not \
                                     defined in this module, neither regular nor scaffolding",
                                    S::CLASS_KIND,
                                    class.name
                                ),
                            );
                        }
                    }
                }
            }
        }
        (root_spec, forest)
    }

    fn attach<S: ClassSpec>(
        &mut self,
        node: Node,
        siblings: &mut Vec<ClassDef<S>>,
        class: ClassDef<S>,
        parent_fqn: &str,
    ) {
        if siblings.iter().any(|c| c.name == class.name) {
            self.error(
                node,
                RuleId::Duplicate,
                format!("duplicate {} {parent_fqn}.{}", S::CLASS_KIND, class.name),
            );
        } else {
            siblings.push(class);
        }
    }

    fn class<S: ClassGrammar>(&mut self, node: Node<'a, 'input>) -> Option<ClassDef<S>> {
        let mut name = None;
        let mut sharing = None;
        let mut transportation = None;
        let mut order = None;
        let mut members: Vec<S::Member> = Vec::new();
        let mut member_names = HashSet::new();
        let mut property_seen = None;
        let mut children: Vec<ClassDef<S>> = Vec::new();
        let mut ok = true;

        for child in self.elements(node) {
            let tag = child.tag_name().name();
            match tag {
                "name" => {
                    let text = self.text_of(child);
                    if name.is_some() {
                        self.error(child, RuleId::Duplicate, "class has more than one <name>");
                        ok = false;
                    }
                    name = self.name_value(child, S::CLASS_KIND, text.trim());
                    ok &= name.is_some();
                }
                "sharing" => {
                    property_seen.get_or_insert(tag);
                    let text = self.text_of(child);
                    sharing = self.enum_value::<Sharing>(child, "sharing", text.trim());
                    ok &= sharing.is_some();
                }
                "transportation" if S::HAS_DELIVERY => {
                    property_seen.get_or_insert(tag);
                    let text = self.text_of(child);
                    transportation = self.name_value(child, "transportation", text.trim());
                    ok &= transportation.is_some();
                }
                "order" if S::HAS_DELIVERY => {
                    property_seen.get_or_insert(tag);
                    let text = self.text_of(child);
                    order = self.enum_value::<Order>(child, "order", text.trim());
                    ok &= order.is_some();
                }
                t if t == S::MEMBER_ELEMENT => {
                    property_seen.get_or_insert(tag);
                    match S::parse_member(self, child) {
                        Some(member) => {
                            if member_names.insert(member.name().to_owned()) {
                                members.push(member);
                            } else {
                                self.error(
                                    child,
                                    RuleId::Duplicate,
                                    format!("duplicate {} {}", S::MEMBER_KIND, member.name()),
                                );
                                ok = false;
                            }
                        }
                        None => ok = false,
                    }
                }
                t if t == S::ELEMENT => {
                    if child.attribute("parent").is_some() {
                        self.error(
                            child,
                            RuleId::UnknownElement,
                            "parent attribute is only allowed on top-level classes",
                        );
                        ok = false;
                        continue;
                    }
                    for attr in child.attributes() {
                        self.error(
                            child,
                            RuleId::UnknownElement,
                            format!("unknown attribute {:?} on <{}>", attr.name(), S::ELEMENT),
                        );
                        ok = false;
                    }
                    match self.class::<S>(child) {
                        Some(c) => {
                            if children.iter().any(|x| x.name == c.name) {
                                self.error(
                                    child,
                                    RuleId::Duplicate,
                                    format!("duplicate {} {}", S::CLASS_KIND, c.name),
                                );
                                ok = false;
                            } else {
                                children.push(c);
                            }
                        }
                        None => ok = false,
                    }
                }
                other => {
                    self.error(
                        child,
                        RuleId::UnknownElement,
                        format!("unknown element <{other}> in <{}>", S::ELEMENT),
                    );
                    ok = false;
                }
            }
        }

        let Some(name) = name else {
            if ok {
                self.error(
                    node,
                    RuleId::MissingField,
                    format!("<{}> requires <name>", S::ELEMENT),
                );
            }
            return None;
        };
        let body = match property_seen {
            None => ClassBody::Scaffolding,
            Some(first) => match sharing {
                None => {
                    if ok {
                        self.error(
                            node,
                            RuleId::ScaffoldingWithProperties,
                            format!(
                                "{} {name} has <{first}> but no <sharing>; scaffolding classes carry \
                                 only a name and regular classes require a sharing indicator",
                                S::CLASS_KIND
                            ),
                        );
                    }
                    return None;
                }
                Some(sharing) => {
                    let delivery = if S::HAS_DELIVERY {
                        match (transportation, order) {
                            (Some(t), Some(o)) => Some((t, o)),
                            _ => {
                                if ok {
                                    self.error(
                                        node,
                                        RuleId::MissingField,
                                        format!(
                                            "{} {name} requires <transportation> and <order>",
                                            S::CLASS_KIND
                                        ),
                                    );
                                }
                                return None;
                            }
                        }
                    } else {
                        None
                    };
                    ClassBody::Regular(S::assemble(sharing, delivery, members))
                }
            },
        };
        ok.then_some(ClassDef {
            name,
            body,
            children,
        })
    }

    fn post_checks(&mut self, module: &ObjectModule) {
        for violation in module.validate() {
            let at = match violation.rule {
                RuleId::References => self.anchored(Anchor::References),
                RuleId::RootDefinition if violation.message.contains(INTERACTION_ROOT) => {
                    self.anchored(Anchor::InteractionRoot)
                }
                RuleId::RootDefinition => self.anchored(Anchor::ObjectRoot),
                RuleId::MomDefinition if violation.message.contains(INTERACTION_ROOT) => {
                    self.anchored(Anchor::Interactions)
                }
                RuleId::MomDefinition => self.anchored(Anchor::Objects),
                _ => self.position(self.doc.root_element()),
            };
            self.report_at(at, Severity::Error, violation.rule, violation.message);
        }

        let ident = &module.identification;
        if ident.model_type.is_module() && !ident.declares(&ReferenceType::Dependency) {
            let mim = default_mim();
            let at = self.position(self.doc.root_element());
            for (table, name, site) in module.name_references() {
                if !module.defines(table, &name) && !mim.defines(table, &name) {
                    self.report_at(
                        at,
                        Severity::Warning,
                        RuleId::DanglingInModule,
                        format!(
                            "{site} references {} {name}, which this module does not define and \
                             no Dependency reference is declared",
                            table.as_str()
                        ),
                    );
                }
            }
        }
    }
}

fn resolve_mut<'t, S>(
    forest: &'t mut [ClassDef<S>],
    path: &[&str],
) -> Result<&'t mut ClassDef<S>, usize> {
    fn go<'t, S>(
        forest: &'t mut [ClassDef<S>],
        path: &[&str],
        depth: usize,
    ) -> Result<&'t mut ClassDef<S>, usize> {
        let Some(class) = forest.iter_mut().find(|c| c.name == path[depth]) else {
            return Err(depth);
        };
        if depth + 1 == path.len() {
            Ok(class)
        } else {
            go(&mut class.children, path, depth + 1)
        }
    }
    if path.is_empty() {
        return Err(0);
    }
    go(forest, path, 0)
}

trait ClassGrammar: ClassMarkup {
    const HAS_DELIVERY: bool;

    fn parse_member<'a, 'i>(p: &mut Parser<'a, 'i>, node: Node<'a, 'i>) -> Option<Self::Member>;
    fn assemble(
        sharing: Sharing,
        delivery: Option<(String, Order)>,
        members: Vec<Self::Member>,
    ) -> Self;
}

impl ClassGrammar for ObjectClassSpec {
    const HAS_DELIVERY: bool = false;

    fn parse_member<'a, 'i>(p: &mut Parser<'a, 'i>, node: Node<'a, 'i>) -> Option<AttributeDef> {
        let a = p.attrs(
            node,
            &["name", "dataType", "transportation", "order"],
            &["dimensions", "semantics"],
        )?;
        p.no_children(node);
        let name = p.name_value(node, "attribute", a["name"]);
        let data_type = p.name_value(node, "data type", a["dataType"]);
        let transportation = p.name_value(node, "transportation", a["transportation"]);
        let order = p.enum_value::<Order>(node, "order", a["order"]);
        let mut dimensions = Vec::new();
        if let Some(list) = a.get("dimensions") {
            for dim in list.split(',').map(str::trim) {
                dimensions.push(p.name_value(node, "dimension", dim)?);
            }
        }
        Some(AttributeDef {
            name: name?,
            data_type: data_type?,
            transportation: transportation?,
            order: order?,
            dimensions,
            semantics: a.get("semantics").copied().unwrap_or("").to_owned(),
        })
    }

    fn assemble(
        sharing: Sharing,
        _: Option<(String, Order)>,
        attributes: Vec<AttributeDef>,
    ) -> Self {
        ObjectClassSpec {
            sharing,
            attributes,
        }
    }
}

impl ClassGrammar for InteractionClassSpec {
    const HAS_DELIVERY: bool = true;

    fn parse_member<'a, 'i>(p: &mut Parser<'a, 'i>, node: Node<'a, 'i>) -> Option<ParameterDef> {
        let a = p.attrs(node, &["name", "dataType"], &["semantics"])?;
        p.no_children(node);
        let name = p.name_value(node, "parameter", a["name"]);
        let data_type = p.name_value(node, "data type", a["dataType"]);
        Some(ParameterDef {
            name: name?,
            data_type: data_type?,
            semantics: a.get("semantics").copied().unwrap_or("").to_owned(),
        })
    }

    fn assemble(
        sharing: Sharing,
        delivery: Option<(String, Order)>,
        parameters: Vec<ParameterDef>,
    ) -> Self {
        let (transportation, order) = delivery.expect("interactions always carry delivery");
        InteractionClassSpec {
            sharing,
            transportation,
            order,
            parameters,
        }
    }
}
