//! Canonical serializer for the extended notation.
//!
//! Statement order: namespaces (sorted by prefix), environments in pre-order
//! of the forest (as bundle blocks in the bundle-family modes), loose
//! elements grouped entity/activity/agent and sorted by id, loose relations
//! sorted by kind then endpoints, sidecar last. Two structurally equal
//! documents produce byte-identical text regardless of insertion order.

use std::fmt::Write as _;

use super::json::{
    sidecar_value, sorted_elements, sorted_relations,
};
use crate::environment::DataEnvironment;
use crate::model::{
    canonical_attrs, AttrValue, Attribute, Element, ElementKind, ProvDocument, QualifiedName,
    Relation,
};

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            other => out.push(other),
        }
    }
    out
}

pub(crate) fn render_attr(attr: &Attribute) -> String {
    match &attr.value {
        AttrValue::Str(s) => format!("{}=\"{}\"", attr.key, escape_string(s)),
        AttrValue::Int(i) => format!("{}=\"{}\" %% xsd:int", attr.key, i),
        AttrValue::Qname(q) => format!("{}='{}'", attr.key, q),
    }
}

pub(crate) fn render_attr_list(attrs: &[Attribute]) -> String {
    let rendered: Vec<String> = canonical_attrs(attrs).into_iter().map(render_attr).collect();
    format!("[{}]", rendered.join(", "))
}

pub(crate) fn render_element(element: &Element) -> String {
    let keyword = element.kind.keyword();
    let has_times = element.start_time.is_some() || element.end_time.is_some();
    let mut out = format!("{keyword}({}", element.id);
    if element.kind == ElementKind::Activity && has_times {
        let fmt_time = |t: Option<crate::model::Timestamp>| {
            t.map(|t| t.to_rfc3339()).unwrap_or_else(|| "-".to_owned())
        };
        let _ = write!(
            out,
            ", {}, {}",
            fmt_time(element.start_time),
            fmt_time(element.end_time)
        );
    }
    if !element.attributes.is_empty() {
        let _ = write!(out, ", {}", render_attr_list(&element.attributes));
    }
    out.push(')');
    out
}

pub(crate) fn render_relation(relation: &Relation) -> String {
    let mut out = format!("{}(", relation.kind.keyword());
    if let Some(id) = &relation.id {
        let _ = write!(out, "{id}; ");
    }
    let _ = write!(out, "{}, {}", relation.subject, relation.object);
    if !relation.attributes.is_empty() {
        let _ = write!(out, ", {}", render_attr_list(&relation.attributes));
    }
    out.push(')');
    out
}

fn push_line(out: &mut String, indent: usize, line: &str) {
    for _ in 0..indent {
        out.push_str("  ");
    }
    out.push_str(line);
    out.push('\n');
}

/// Splits a document's statements into per-environment and loose groups.
/// A relation belongs to an environment iff both endpoints are members of it.
pub(crate) struct StatementGroups<'a> {
    pub by_env: indexmap::IndexMap<&'a QualifiedName, (Vec<&'a Element>, Vec<&'a Relation>)>,
    pub loose_elements: Vec<&'a Element>,
    pub loose_relations: Vec<&'a Relation>,
}

pub(crate) fn group_statements(doc: &ProvDocument) -> StatementGroups<'_> {
    let mut by_env: indexmap::IndexMap<&QualifiedName, (Vec<&Element>, Vec<&Relation>)> =
        indexmap::IndexMap::new();
    let mut env_ids: Vec<&QualifiedName> = doc.environments().map(|e| &e.id).collect();
    env_ids.sort();
    for id in env_ids {
        by_env.insert(id, (Vec::new(), Vec::new()));
    }
    let mut loose_elements = Vec::new();
    for element in sorted_elements(doc.elements().iter()) {
        match doc.environment_of(&element.id) {
            Some(env) => by_env.get_mut(env).expect("listed").0.push(element),
            None => loose_elements.push(element),
        }
    }
    let mut loose_relations = Vec::new();
    for relation in sorted_relations(doc.relations().iter()) {
        let home = match (
            doc.environment_of(&relation.subject),
            doc.environment_of(&relation.object),
        ) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        };
        match home {
            Some(env) => by_env.get_mut(env).expect("listed").1.push(relation),
            None => loose_relations.push(relation),
        }
    }
    StatementGroups {
        by_env,
        loose_elements,
        loose_relations,
    }
}

fn write_bundle(
    out: &mut String,
    doc: &ProvDocument,
    groups: &StatementGroups<'_>,
    env: &DataEnvironment,
    indent: usize,
) {
    let header = if env.attributes.is_empty() {
        format!("bundle {}", env.id)
    } else {
        format!("bundle ({}, {})", env.id, render_attr_list(&env.attributes))
    };
    push_line(out, indent, &header);
    if let Some((elements, relations)) = groups.by_env.get(&env.id) {
        for element in elements {
            push_line(out, indent + 1, &render_element(element));
        }
        for relation in relations {
            push_line(out, indent + 1, &render_relation(relation));
        }
    }
    for child in doc.environment_children(&env.id) {
        write_bundle(out, doc, groups, child, indent + 1);
    }
    push_line(out, indent, "endBundle");
}

/// Serializes a document to canonical extended-notation text.
pub fn serialize_provn(doc: &ProvDocument) -> String {
    let mut out = String::new();
    out.push_str("document\n");
    if doc.mode != crate::environment::EncodingMode::BundlesPlus {
        push_line(&mut out, 1, &format!("@mode {}", doc.mode.name()));
    }
    for (prefix, uri) in doc.namespaces.sorted() {
        push_line(&mut out, 1, &format!("prefix {prefix} <{uri}>"));
    }
    let groups = group_statements(doc);
    if !doc.mode.is_namespace_family() {
        for root in doc.environment_roots() {
            write_bundle(&mut out, doc, &groups, root, 1);
        }
        for element in &groups.loose_elements {
            push_line(&mut out, 1, &render_element(element));
        }
        for relation in &groups.loose_relations {
            push_line(&mut out, 1, &render_relation(relation));
        }
    } else {
        // namespace-family: no bundle blocks; everything is a top-level
        // statement and the environment table lives in the sidecar
        for element in sorted_elements(doc.elements().iter()) {
            push_line(&mut out, 1, &render_element(element));
        }
        for relation in sorted_relations(doc.relations().iter()) {
            push_line(&mut out, 1, &render_relation(relation));
        }
    }
    if let Some(sidecar) = sidecar_value(doc) {
        let rendered = serde_json::to_string_pretty(&sidecar).expect("valid json value");
        push_line(&mut out, 1, &format!("@sidecar {rendered}"));
    }
    out.push_str("endDocument\n");
    out
}
