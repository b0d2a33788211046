use std::fmt::Write as _;

use crate::model::*;

/// Serializes a module to its canonical document form.
///
/// Sections appear in a fixed order, siblings and table entries in model
/// order, two-space indentation and LF line endings. Empty sections are
/// omitted. Equal modules always produce identical bytes.
pub fn serialize_module(module: &ObjectModule) -> String {
    let mut w = Writer::default();
    w.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let ident = &module.identification;
    w.open(
        "objectModel",
        &[
            ("name", ident.name.as_str()),
            ("modelType", ident.model_type.as_str()),
            ("version", ident.version.as_str()),
        ],
    );

    if !ident.references.is_empty() {
        w.open("references", &[]);
        for reference in &ident.references {
            let idents = match &reference.identification {
                ReferenceIdent::NotAvailable => "NA".to_owned(),
                ReferenceIdent::Modules(names) => names.join(","),
            };
            w.empty(
                "reference",
                &[("type", reference.kind.as_str()), ("idents", &idents)],
            );
        }
        w.close("references");
    }

    write_tree(
        &mut w,
        "objects",
        module.object_root.as_ref(),
        &module.object_classes,
    );
    write_tree(
        &mut w,
        "interactions",
        module.interaction_root.as_ref(),
        &module.interaction_classes,
    );

    write_table(&mut w, "dataTypes", &module.data_types, |w, t| {
        w.empty(
            "dataType",
            &[
                ("name", &t.name),
                ("category", t.category.as_str()),
                ("definition", &t.definition),
            ],
        )
    });
    write_table(&mut w, "dimensions", &module.dimensions, |w, d| {
        w.empty(
            "dimension",
            &[
                ("name", &d.name),
                ("upperBound", &d.upper_bound.to_string()),
            ],
        )
    });
    write_table(
        &mut w,
        "transportations",
        &module.transportations,
        |w, t| {
            w.empty(
                "transportation",
                &[("name", &t.name), ("reliability", t.reliability.as_str())],
            )
        },
    );
    write_table(
        &mut w,
        "synchronizations",
        &module.synchronizations,
        |w, s| {
            let mut attrs = vec![
                ("label", s.label.as_str()),
                ("tagDataType", s.tag_data_type.as_str()),
            ];
            if !s.semantics.is_empty() {
                attrs.push(("semantics", &s.semantics));
            }
            w.empty("synchronization", &attrs)
        },
    );
    write_table(&mut w, "updateRates", &module.update_rates, |w, u| {
        w.empty(
            "updateRate",
            &[("name", &u.name), ("rate", u.rate.as_str())],
        )
    });
    if let Some(switches) = &module.switches {
        w.open("switches", &[]);
        for (key, value) in switches.iter() {
            w.empty(
                "switch",
                &[("name", key.as_str()), ("value", value.as_str())],
            );
        }
        w.close("switches");
    }
    write_table(&mut w, "notes", &module.notes, |w, n| {
        if n.body.is_empty() {
            w.empty("note", &[("label", &n.label)]);
        } else {
            w.text_element("note", &[("label", &n.label)], &n.body);
        }
    });

    w.close("objectModel");
    w.out
}

fn write_table<T: Named>(
    w: &mut Writer,
    section: &str,
    table: &NamedTable<T>,
    mut entry: impl FnMut(&mut Writer, &T),
) {
    if table.is_empty() {
        return;
    }
    w.open(section, &[]);
    for item in table.iter() {
        entry(w, item);
    }
    w.close(section);
}

/// Element vocabulary for one kind of class tree.
pub(crate) trait ClassMarkup: ClassSpec {
    const SECTION: &'static str;
    const ELEMENT: &'static str;
    const MEMBER_ELEMENT: &'static str;

    fn write_header(&self, w: &mut Writer);
    fn write_member(member: &Self::Member, w: &mut Writer);
}

impl ClassMarkup for ObjectClassSpec {
    const SECTION: &'static str = "objects";
    const ELEMENT: &'static str = "objectClass";
    const MEMBER_ELEMENT: &'static str = "attribute";

    fn write_header(&self, w: &mut Writer) {
        w.text_element("sharing", &[], self.sharing.as_str());
    }

    fn write_member(a: &AttributeDef, w: &mut Writer) {
        let dims = a.dimensions.join(",");
        let mut attrs = vec![
            ("name", a.name.as_str()),
            ("dataType", a.data_type.as_str()),
            ("transportation", a.transportation.as_str()),
            ("order", a.order.as_str()),
        ];
        if !a.dimensions.is_empty() {
            attrs.push(("dimensions", &dims));
        }
        if !a.semantics.is_empty() {
            attrs.push(("semantics", &a.semantics));
        }
        w.empty("attribute", &attrs);
    }
}

impl ClassMarkup for InteractionClassSpec {
    const SECTION: &'static str = "interactions";
    const ELEMENT: &'static str = "interactionClass";
    const MEMBER_ELEMENT: &'static str = "parameter";

    fn write_header(&self, w: &mut Writer) {
        w.text_element("sharing", &[], self.sharing.as_str());
        w.text_element("transportation", &[], &self.transportation);
        w.text_element("order", &[], self.order.as_str());
    }

    fn write_member(p: &ParameterDef, w: &mut Writer) {
        let mut attrs = vec![
            ("name", p.name.as_str()),
            ("dataType", p.data_type.as_str()),
        ];
        if !p.semantics.is_empty() {
            attrs.push(("semantics", &p.semantics));
        }
        w.empty("parameter", &attrs);
    }
}

fn write_tree<S: ClassMarkup>(
    w: &mut Writer,
    section: &str,
    root: Option<&S>,
    forest: &[ClassDef<S>],
) {
    if root.is_none() && forest.is_empty() {
        return;
    }
    w.open(section, &[]);
    match root {
        Some(spec) => {
            w.open(S::ELEMENT, &[]);
            w.text_element("name", &[], S::ROOT);
            write_spec(w, spec);
            for class in forest {
                write_class(w, class);
            }
            w.close(S::ELEMENT);
        }
        None => {
            for class in forest {
                write_class(w, class);
            }
        }
    }
    w.close(section);
}

fn write_spec<S: ClassMarkup>(w: &mut Writer, spec: &S) {
    spec.write_header(w);
    for member in spec.members() {
        S::write_member(member, w);
    }
}

fn write_class<S: ClassMarkup>(w: &mut Writer, class: &ClassDef<S>) {
    w.open(S::ELEMENT, &[]);
    w.text_element("name", &[], &class.name);
    if let ClassBody::Regular(spec) = &class.body {
        write_spec(w, spec);
    }
    for child in &class.children {
        write_class(w, child);
    }
    w.close(S::ELEMENT);
}

#[derive(Default)]
pub(crate) struct Writer {
    out: String,
    depth: usize,
}

impl Writer {
    fn line_start(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    fn raw(&mut self, text: &str) {
        self.line_start();
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn start_tag(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.line_start();
        self.out.push('<');
        self.out.push_str(name);
        for (key, value) in attrs {
            let _ = write!(self.out, " {key}=\"{}\"", escape_attr(value));
        }
    }

    fn open(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.start_tag(name, attrs);
        self.out.push_str(">\n");
        self.depth += 1;
    }

    fn close(&mut self, name: &str) {
        self.depth -= 1;
        self.line_start();
        let _ = writeln!(self.out, "</{name}>");
    }

    fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.start_tag(name, attrs);
        self.out.push_str("/>\n");
    }

    fn text_element(&mut self, name: &str, attrs: &[(&str, &str)], text: &str) {
        self.start_tag(name, attrs);
        let _ = writeln!(self.out, ">{}</{name}>", escape_text(text));
    }
}

fn escape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

fn escape_attr(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}
