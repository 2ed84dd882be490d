//! JSON form of a document, and the sidecar object shared with the textual
//! notation. Fixed top-level layout:
//!
//! ```text
//! { "mode", "prefixes", ["base",] "environments", "elements",
//!   "relations", "contracts", "controls", "annotations" }
//! ```
//!
//! `environments` is a forest of nested objects mirroring containment;
//! `relations` mixes element relations and environment relations, dispatched
//! by kind.

use std::fmt;

use indexmap::IndexSet;
use serde_json::{json, Map, Value};

use super::NotationError;
use crate::environment::{
    Contract, ControlRecord, DataEnvironment, EncodingMode, EnvRelationKind, EnvironmentError,
    EnvironmentRelation, Feature,
};
use crate::model::{
    canonical_attrs, AttrValue, Attribute, Element, ElementKind, ProvDocument, QualifiedName,
    Relation, RelationKind,
};

/// Keys admitted in a `@sidecar` block.
pub(crate) const SIDECAR_KEYS: [&str; 6] = [
    "base",
    "environments",
    "envRelations",
    "contracts",
    "controls",
    "annotations",
];

/// A malformed-document error with a JSON-pointer-style path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    fn new(path: &str, message: impl Into<String>) -> Self {
        Self {
            path: path.to_owned(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for SchemaError {}

// ---------------------------------------------------------------------------
// canonical ordering helpers (shared with the text serializer and renderer)
// ---------------------------------------------------------------------------

fn kind_rank(kind: ElementKind) -> u8 {
    match kind {
        ElementKind::Entity => 0,
        ElementKind::Activity => 1,
        ElementKind::Agent => 2,
    }
}

pub(crate) fn sorted_elements<'a>(elements: impl Iterator<Item = &'a Element>) -> Vec<&'a Element> {
    let mut out: Vec<&Element> = elements.collect();
    out.sort_by(|a, b| {
        (kind_rank(a.kind), &a.id, canonical_attrs(&a.attributes), a.start_time, a.end_time).cmp(&(
            kind_rank(b.kind),
            &b.id,
            canonical_attrs(&b.attributes),
            b.start_time,
            b.end_time,
        ))
    });
    out
}

pub(crate) fn sorted_relations<'a>(
    relations: impl Iterator<Item = &'a Relation>,
) -> Vec<&'a Relation> {
    let mut out: Vec<&Relation> = relations.collect();
    out.sort_by(|a, b| {
        (a.kind, &a.subject, &a.object, &a.id, canonical_attrs(&a.attributes)).cmp(&(
            b.kind,
            &b.subject,
            &b.object,
            &b.id,
            canonical_attrs(&b.attributes),
        ))
    });
    out
}

pub(crate) fn sorted_env_relations(doc: &ProvDocument) -> Vec<&EnvironmentRelation> {
    let mut out: Vec<&EnvironmentRelation> = doc.env_relations().iter().collect();
    out.sort();
    out
}

pub(crate) fn sorted_contracts(doc: &ProvDocument) -> Vec<&Contract> {
    let mut out: Vec<&Contract> = doc.contracts().collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

pub(crate) fn sorted_controls(doc: &ProvDocument) -> Vec<&ControlRecord> {
    let mut out: Vec<&ControlRecord> = doc.controls().iter().collect();
    out.sort();
    out
}

pub(crate) fn sorted_annotations(doc: &ProvDocument) -> Vec<(&QualifiedName, &[Attribute])> {
    let mut out: Vec<(&QualifiedName, &[Attribute])> = doc.annotations().collect();
    out.sort_by(|a, b| a.0.cmp(b.0));
    out
}

// ---------------------------------------------------------------------------
// value building
// ---------------------------------------------------------------------------

fn attr_value_to_json(value: &AttrValue) -> Value {
    match value {
        AttrValue::Str(s) => json!(s),
        AttrValue::Int(i) => json!(i),
        AttrValue::Qname(q) => json!({ "$qname": q.to_string() }),
    }
}

fn attrs_to_json(attrs: &[Attribute]) -> Value {
    Value::Array(
        canonical_attrs(attrs)
            .into_iter()
            .map(|a| {
                json!({
                    "key": a.key.to_string(),
                    "value": attr_value_to_json(&a.value),
                })
            })
            .collect(),
    )
}

fn environment_to_json(doc: &ProvDocument, env: &DataEnvironment) -> Value {
    let mut object = Map::new();
    object.insert("id".into(), json!(env.id.to_string()));
    if let Some(uri) = &env.uri {
        object.insert("uri".into(), json!(uri));
    }
    object.insert("attributes".into(), attrs_to_json(&env.attributes));
    let mut members: Vec<String> = env.members.iter().map(ToString::to_string).collect();
    members.sort();
    object.insert("members".into(), json!(members));
    object.insert(
        "children".into(),
        Value::Array(
            doc.environment_children(&env.id)
                .into_iter()
                .map(|child| environment_to_json(doc, child))
                .collect(),
        ),
    );
    Value::Object(object)
}

fn relation_to_json(rel: &Relation) -> Value {
    let mut object = Map::new();
    object.insert("kind".into(), json!(rel.kind.keyword()));
    if let Some(id) = &rel.id {
        object.insert("id".into(), json!(id.to_string()));
    }
    object.insert("subject".into(), json!(rel.subject.to_string()));
    object.insert("object".into(), json!(rel.object.to_string()));
    object.insert("attributes".into(), attrs_to_json(&rel.attributes));
    Value::Object(object)
}

fn element_to_json(element: &Element) -> Value {
    let mut object = Map::new();
    object.insert("kind".into(), json!(element.kind.keyword()));
    object.insert("id".into(), json!(element.id.to_string()));
    object.insert("attributes".into(), attrs_to_json(&element.attributes));
    if let Some(t) = element.start_time {
        object.insert("startTime".into(), json!(t.to_rfc3339()));
    }
    if let Some(t) = element.end_time {
        object.insert("endTime".into(), json!(t.to_rfc3339()));
    }
    Value::Object(object)
}

fn contract_to_json(contract: &Contract) -> Value {
    let mut flows: Vec<String> = contract.governs_flows.iter().map(ToString::to_string).collect();
    flows.sort();
    json!({
        "id": contract.id.to_string(),
        "parties": contract.parties.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "terms": attrs_to_json(&contract.terms),
        "governsFlows": flows,
    })
}

fn control_to_json(record: &ControlRecord) -> Value {
    json!({
        "holder": record.holder.to_string(),
        "target": record.target.to_string(),
        "controlType": record.control_type.name(),
        "controlNature": record.control_nature.name(),
        "responsibility": record.responsibility.name(),
    })
}

fn env_relation_to_json(rel: &EnvironmentRelation) -> Value {
    json!({
        "kind": rel.kind.keyword(),
        "subject": rel.subject.to_string(),
        "object": rel.object.to_string(),
        "attributes": attrs_to_json(&rel.attributes),
    })
}

/// The document as a JSON value, in canonical order.
pub(crate) fn document_to_value(doc: &ProvDocument) -> Value {
    let mut root = Map::new();
    root.insert("mode".into(), json!(doc.mode.name()));
    let mut prefixes = Map::new();
    for (prefix, uri) in doc.namespaces.sorted() {
        prefixes.insert(prefix.to_owned(), json!(uri));
    }
    root.insert("prefixes".into(), Value::Object(prefixes));
    if let Some(base) = doc.environment_base() {
        root.insert("base".into(), json!(base));
    }
    root.insert(
        "environments".into(),
        Value::Array(
            doc.environment_roots()
                .into_iter()
                .map(|env| environment_to_json(doc, env))
                .collect(),
        ),
    );
    root.insert(
        "elements".into(),
        Value::Array(
            sorted_elements(doc.elements().iter())
                .into_iter()
                .map(element_to_json)
                .collect(),
        ),
    );
    let mut relations: Vec<Value> = sorted_relations(doc.relations().iter())
        .into_iter()
        .map(relation_to_json)
        .collect();
    relations.extend(sorted_env_relations(doc).into_iter().map(env_relation_to_json));
    root.insert("relations".into(), Value::Array(relations));
    root.insert(
        "contracts".into(),
        Value::Array(sorted_contracts(doc).into_iter().map(contract_to_json).collect()),
    );
    root.insert(
        "controls".into(),
        Value::Array(sorted_controls(doc).into_iter().map(control_to_json).collect()),
    );
    root.insert(
        "annotations".into(),
        Value::Array(
            sorted_annotations(doc)
                .into_iter()
                .map(|(id, attrs)| {
                    json!({
                        "relation": id.to_string(),
                        "attributes": attrs_to_json(attrs),
                    })
                })
                .collect(),
        ),
    );
    Value::Object(root)
}

/// Serializes a document to its canonical JSON form.
pub fn serialize_json(doc: &ProvDocument) -> String {
    let mut out = serde_json::to_string_pretty(&document_to_value(doc)).expect("valid json value");
    out.push('\n');
    out
}

/// The sidecar JSON object for the textual form, or `None` when the document
/// carries no extension state that needs one.
pub(crate) fn sidecar_value(doc: &ProvDocument) -> Option<Value> {
    let mut object = Map::new();
    if doc.mode.is_namespace_family() {
        if let Some(base) = doc.environment_base() {
            object.insert("base".into(), json!(base));
        }
        let mut environments = Map::new();
        let mut envs: Vec<&DataEnvironment> = doc.environments().collect();
        envs.sort_by(|a, b| a.uri.cmp(&b.uri).then_with(|| a.id.cmp(&b.id)));
        for env in envs {
            let mut entry = Map::new();
            entry.insert("id".into(), json!(env.id.to_string()));
            if let Some(parent) = &env.parent {
                entry.insert("parent".into(), json!(parent.to_string()));
            }
            entry.insert("attributes".into(), attrs_to_json(&env.attributes));
            let mut members: Vec<String> = env.members.iter().map(ToString::to_string).collect();
            members.sort();
            entry.insert("members".into(), json!(members));
            let key = env
                .uri
                .clone()
                .unwrap_or_else(|| format!("urn:de-prov:{}", env.id));
            environments.insert(key, Value::Object(entry));
        }
        if !environments.is_empty() {
            object.insert("environments".into(), Value::Object(environments));
        }
    }
    let env_relations = sorted_env_relations(doc);
    if !env_relations.is_empty() {
        object.insert(
            "envRelations".into(),
            Value::Array(env_relations.into_iter().map(env_relation_to_json).collect()),
        );
    }
    let contracts = sorted_contracts(doc);
    if !contracts.is_empty() {
        object.insert(
            "contracts".into(),
            Value::Array(contracts.into_iter().map(contract_to_json).collect()),
        );
    }
    let controls = sorted_controls(doc);
    if !controls.is_empty() {
        object.insert(
            "controls".into(),
            Value::Array(controls.into_iter().map(control_to_json).collect()),
        );
    }
    let annotations = sorted_annotations(doc);
    if !annotations.is_empty() {
        object.insert(
            "annotations".into(),
            Value::Array(
                annotations
                    .into_iter()
                    .map(|(id, attrs)| {
                        json!({
                            "relation": id.to_string(),
                            "attributes": attrs_to_json(attrs),
                        })
                    })
                    .collect(),
            ),
        );
    }
    if object.is_empty() {
        None
    } else {
        Some(Value::Object(object))
    }
}

// ---------------------------------------------------------------------------
// value reading
// ---------------------------------------------------------------------------

fn as_object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>, SchemaError> {
    value
        .as_object()
        .ok_or_else(|| SchemaError::new(path, "expected an object"))
}

fn as_array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>, SchemaError> {
    value
        .as_array()
        .ok_or_else(|| SchemaError::new(path, "expected an array"))
}

fn as_str<'a>(value: &'a Value, path: &str) -> Result<&'a str, SchemaError> {
    value
        .as_str()
        .ok_or_else(|| SchemaError::new(path, "expected a string"))
}

fn get<'a>(map: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, SchemaError> {
    map.get(key)
        .ok_or_else(|| SchemaError::new(path, format!("missing required key `{key}`")))
}

fn parse_qname(doc: &ProvDocument, raw: &str, path: &str) -> Result<QualifiedName, SchemaError> {
    let q: QualifiedName = raw
        .parse()
        .map_err(|_| SchemaError::new(path, format!("`{raw}` is not a qualified name")))?;
    if !doc.namespaces.contains(q.prefix()) {
        return Err(SchemaError::new(
            path,
            format!("prefix `{}` is not declared", q.prefix()),
        ));
    }
    Ok(q)
}

fn parse_attrs(
    doc: &ProvDocument,
    value: &Value,
    path: &str,
) -> Result<Vec<Attribute>, SchemaError> {
    let array = as_array(value, path)?;
    let mut out = Vec::with_capacity(array.len());
    for (i, item) in array.iter().enumerate() {
        let item_path = format!("{path}/{i}");
        let object = as_object(item, &item_path)?;
        let key_raw = as_str(get(object, "key", &item_path)?, &format!("{item_path}/key"))?;
        let key = parse_qname(doc, key_raw, &format!("{item_path}/key"))?;
        let value_path = format!("{item_path}/value");
        let value = match get(object, "value", &item_path)? {
            Value::String(s) => AttrValue::Str(s.clone()),
            Value::Number(n) => AttrValue::Int(n.as_i64().ok_or_else(|| {
                SchemaError::new(&value_path, "expected an integer, string or {\"$qname\"} value")
            })?),
            Value::Object(o) => {
                let raw = as_str(get(o, "$qname", &value_path)?, &format!("{value_path}/$qname"))?;
                AttrValue::Qname(parse_qname(doc, raw, &format!("{value_path}/$qname"))?)
            }
            _ => {
                return Err(SchemaError::new(
                    &value_path,
                    "expected an integer, string or {\"$qname\"} value",
                ))
            }
        };
        out.push(Attribute { key, value });
    }
    Ok(out)
}

fn parse_time(raw: &str, path: &str) -> Result<crate::model::Timestamp, SchemaError> {
    chrono::DateTime::parse_from_rfc3339(raw)
        .map_err(|e| SchemaError::new(path, format!("`{raw}` is not an RFC 3339 timestamp ({e})")))
}

fn parse_environment_node(
    doc: &mut ProvDocument,
    value: &Value,
    parent: Option<&QualifiedName>,
    path: &str,
) -> Result<(), SchemaError> {
    let object = as_object(value, path)?;
    for key in object.keys() {
        if !["id", "uri", "attributes", "members", "children"].contains(&key.as_str()) {
            return Err(SchemaError::new(path, format!("unknown key `{key}`")));
        }
    }
    let id = parse_qname(
        doc,
        as_str(get(object, "id", path)?, &format!("{path}/id"))?,
        &format!("{path}/id"),
    )?;
    let uri = match object.get("uri") {
        Some(v) => Some(as_str(v, &format!("{path}/uri"))?.to_owned()),
        None => None,
    };
    let attributes = match object.get("attributes") {
        Some(v) => parse_attrs(doc, v, &format!("{path}/attributes"))?,
        None => Vec::new(),
    };
    let mut members = IndexSet::new();
    if let Some(v) = object.get("members") {
        let member_path = format!("{path}/members");
        for (i, m) in as_array(v, &member_path)?.iter().enumerate() {
            let p = format!("{member_path}/{i}");
            members.insert(parse_qname(doc, as_str(m, &p)?, &p)?);
        }
    }
    doc.push_environment_unchecked(DataEnvironment {
        id: id.clone(),
        uri,
        attributes: super::parser::dedup_last_wins(attributes),
        parent: parent.cloned(),
        members,
    });
    if let Some(v) = object.get("children") {
        let child_path = format!("{path}/children");
        for (i, child) in as_array(v, &child_path)?.iter().enumerate() {
            parse_environment_node(doc, child, Some(&id), &format!("{child_path}/{i}"))?;
        }
    }
    Ok(())
}

fn parse_relation_value(
    doc: &mut ProvDocument,
    value: &Value,
    path: &str,
) -> Result<(), SchemaError> {
    let object = as_object(value, path)?;
    let kind_raw = as_str(get(object, "kind", path)?, &format!("{path}/kind"))?;
    let subject = parse_qname(
        doc,
        as_str(get(object, "subject", path)?, &format!("{path}/subject"))?,
        &format!("{path}/subject"),
    )?;
    let object_q = parse_qname(
        doc,
        as_str(get(object, "object", path)?, &format!("{path}/object"))?,
        &format!("{path}/object"),
    )?;
    let attributes = match object.get("attributes") {
        Some(v) => parse_attrs(doc, v, &format!("{path}/attributes"))?,
        None => Vec::new(),
    };
    if let Ok(kind) = kind_raw.parse::<RelationKind>() {
        let id = match object.get("id") {
            Some(v) => Some(parse_qname(
                doc,
                as_str(v, &format!("{path}/id"))?,
                &format!("{path}/id"),
            )?),
            None => None,
        };
        let relation = Relation {
            kind,
            subject,
            object: object_q,
            attributes,
            id,
        };
        if !doc.relations().contains(&relation) {
            doc.push_relation_unchecked(relation);
        }
        return Ok(());
    }
    if let Ok(kind) = kind_raw.parse::<EnvRelationKind>() {
        let mut attributes = attributes;
        attributes.sort();
        let relation = EnvironmentRelation {
            kind,
            subject,
            object: object_q,
            attributes,
        };
        if !doc.env_relations().contains(&relation) {
            doc.push_env_relation_unchecked(relation);
        }
        return Ok(());
    }
    Err(SchemaError::new(
        &format!("{path}/kind"),
        format!("`{kind_raw}` is not a known relation kind"),
    ))
}

fn parse_contract_value(
    doc: &mut ProvDocument,
    value: &Value,
    path: &str,
) -> Result<(), SchemaError> {
    let object = as_object(value, path)?;
    let id = parse_qname(
        doc,
        as_str(get(object, "id", path)?, &format!("{path}/id"))?,
        &format!("{path}/id"),
    )?;
    let mut parties = Vec::new();
    let parties_path = format!("{path}/parties");
    for (i, p) in as_array(get(object, "parties", path)?, &parties_path)?
        .iter()
        .enumerate()
    {
        let p_path = format!("{parties_path}/{i}");
        parties.push(parse_qname(doc, as_str(p, &p_path)?, &p_path)?);
    }
    let terms = match object.get("terms") {
        Some(v) => parse_attrs(doc, v, &format!("{path}/terms"))?,
        None => Vec::new(),
    };
    let mut governs_flows = IndexSet::new();
    if let Some(v) = object.get("governsFlows") {
        let flows_path = format!("{path}/governsFlows");
        for (i, f) in as_array(v, &flows_path)?.iter().enumerate() {
            let f_path = format!("{flows_path}/{i}");
            governs_flows.insert(parse_qname(doc, as_str(f, &f_path)?, &f_path)?);
        }
    }
    doc.push_contract_unchecked(Contract {
        id,
        parties,
        terms: super::parser::dedup_last_wins(terms),
        governs_flows,
    });
    Ok(())
}

fn parse_control_value(
    doc: &mut ProvDocument,
    value: &Value,
    path: &str,
) -> Result<(), SchemaError> {
    let object = as_object(value, path)?;
    let field = |key: &str| -> Result<&str, SchemaError> {
        as_str(get(object, key, path)?, &format!("{path}/{key}"))
    };
    let record = ControlRecord {
        holder: parse_qname(doc, field("holder")?, &format!("{path}/holder"))?,
        target: parse_qname(doc, field("target")?, &format!("{path}/target"))?,
        control_type: field("controlType")?
            .parse()
            .map_err(|_| SchemaError::new(&format!("{path}/controlType"), "expected direct or indirect"))?,
        control_nature: field("controlNature")?
            .parse()
            .map_err(|_| SchemaError::new(&format!("{path}/controlNature"), "expected strategic or operational"))?,
        responsibility: field("responsibility")?
            .parse()
            .map_err(|_| SchemaError::new(&format!("{path}/responsibility"), "expected direct or indirect"))?,
    };
    doc.push_control_unchecked(record);
    Ok(())
}

fn parse_annotation_value(
    doc: &mut ProvDocument,
    value: &Value,
    path: &str,
) -> Result<(), SchemaError> {
    let object = as_object(value, path)?;
    let relation = parse_qname(
        doc,
        as_str(get(object, "relation", path)?, &format!("{path}/relation"))?,
        &format!("{path}/relation"),
    )?;
    let attributes = parse_attrs(doc, get(object, "attributes", path)?, &format!("{path}/attributes"))?;
    doc.push_annotation_unchecked(relation, super::parser::dedup_last_wins(attributes));
    Ok(())
}

/// Merges a sidecar object into a document, honouring encoding-mode gating.
pub(crate) fn apply_sidecar(doc: &mut ProvDocument, value: &Value) -> Result<(), NotationError> {
    let object = as_object(value, "/sidecar")?;
    if let Some(base) = object.get("base") {
        let base = as_str(base, "/sidecar/base").map_err(NotationError::from)?;
        doc.set_environment_base(base)?;
    }
    if let Some(envs) = object.get("environments") {
        if !doc.mode.is_namespace_family() {
            return Err(SchemaError::new(
                "/sidecar/environments",
                "environment tables appear in namespace-family documents only",
            )
            .into());
        }
        let envs = as_object(envs, "/sidecar/environments").map_err(NotationError::from)?;
        for (uri, entry) in envs {
            let path = format!("/sidecar/environments/{uri}");
            let entry_object = as_object(entry, &path).map_err(NotationError::from)?;
            let id = parse_qname(
                doc,
                as_str(get(entry_object, "id", &path)?, &format!("{path}/id"))?,
                &format!("{path}/id"),
            )?;
            let attributes = match entry_object.get("attributes") {
                Some(v) => parse_attrs(doc, v, &format!("{path}/attributes"))?,
                None => Vec::new(),
            };
            if !attributes.is_empty() && !doc.mode.supports(Feature::Attributes) {
                return Err(EnvironmentError::AttributesUnsupported { mode: doc.mode }.into());
            }
            let parent = match entry_object.get("parent") {
                Some(v) => Some(parse_qname(
                    doc,
                    as_str(v, &format!("{path}/parent"))?,
                    &format!("{path}/parent"),
                )?),
                None => None,
            };
            let mut members = IndexSet::new();
            if let Some(v) = entry_object.get("members") {
                let member_path = format!("{path}/members");
                for (i, m) in as_array(v, &member_path)?.iter().enumerate() {
                    let p = format!("{member_path}/{i}");
                    members.insert(parse_qname(doc, as_str(m, &p)?, &p)?);
                }
            }
            doc.push_environment_unchecked(DataEnvironment {
                id,
                uri: Some(uri.clone()),
                attributes: super::parser::dedup_last_wins(attributes),
                parent,
                members,
            });
        }
    }
    if let Some(rels) = object.get("envRelations") {
        if !doc.mode.supports(Feature::Relationships) {
            return Err(EnvironmentError::RelationUnsupported { mode: doc.mode }.into());
        }
        for (i, rel) in as_array(rels, "/sidecar/envRelations")?.iter().enumerate() {
            parse_relation_value(doc, rel, &format!("/sidecar/envRelations/{i}"))?;
        }
    }
    if let Some(contracts) = object.get("contracts") {
        if !doc.mode.supports(Feature::Contracts) {
            return Err(EnvironmentError::ContractsUnsupported { mode: doc.mode }.into());
        }
        for (i, c) in as_array(contracts, "/sidecar/contracts")?.iter().enumerate() {
            parse_contract_value(doc, c, &format!("/sidecar/contracts/{i}"))?;
        }
    }
    if let Some(controls) = object.get("controls") {
        for (i, c) in as_array(controls, "/sidecar/controls")?.iter().enumerate() {
            parse_control_value(doc, c, &format!("/sidecar/controls/{i}"))?;
        }
    }
    if let Some(annotations) = object.get("annotations") {
        if !doc.mode.supports(Feature::Annotation) {
            return Err(EnvironmentError::AnnotationUnsupported { mode: doc.mode }.into());
        }
        for (i, a) in as_array(annotations, "/sidecar/annotations")?.iter().enumerate() {
            parse_annotation_value(doc, a, &format!("/sidecar/annotations/{i}"))?;
        }
    }
    Ok(())
}

const TOP_LEVEL_KEYS: [&str; 9] = [
    "mode",
    "prefixes",
    "base",
    "environments",
    "elements",
    "relations",
    "contracts",
    "controls",
    "annotations",
];

/// Parses the JSON form back into a document.
pub fn parse_json(text: &str) -> Result<ProvDocument, SchemaError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| SchemaError::new("", format!("invalid JSON: {e}")))?;
    let root = as_object(&value, "")?;
    for key in root.keys() {
        if !TOP_LEVEL_KEYS.contains(&key.as_str()) {
            return Err(SchemaError::new("", format!("unknown top-level key `{key}`")));
        }
    }
    let mode_raw = as_str(get(root, "mode", "")?, "/mode")?;
    let mode: EncodingMode = mode_raw
        .parse()
        .map_err(|_| SchemaError::new("/mode", format!("`{mode_raw}` is not an encoding mode")))?;
    let mut doc = ProvDocument::new(mode);
    if let Some(prefixes) = root.get("prefixes") {
        for (prefix, uri) in as_object(prefixes, "/prefixes")? {
            let path = format!("/prefixes/{prefix}");
            doc.declare_namespace(prefix, as_str(uri, &path)?)
                .map_err(|e| SchemaError::new(&path, e.to_string()))?;
        }
    }
    if let Some(base) = root.get("base") {
        doc.set_environment_base(as_str(base, "/base")?)
            .map_err(|e| SchemaError::new("/base", e.to_string()))?;
    }
    if let Some(envs) = root.get("environments") {
        for (i, env) in as_array(envs, "/environments")?.iter().enumerate() {
            parse_environment_node(&mut doc, env, None, &format!("/environments/{i}"))?;
        }
    }
    if let Some(elements) = root.get("elements") {
        for (i, element) in as_array(elements, "/elements")?.iter().enumerate() {
            let path = format!("/elements/{i}");
            let object = as_object(element, &path)?;
            let kind_raw = as_str(get(object, "kind", &path)?, &format!("{path}/kind"))?;
            let kind: ElementKind = kind_raw.parse().map_err(|_| {
                SchemaError::new(&format!("{path}/kind"), format!("`{kind_raw}` is not an element kind"))
            })?;
            let id = parse_qname(
                &doc,
                as_str(get(object, "id", &path)?, &format!("{path}/id"))?,
                &format!("{path}/id"),
            )?;
            let attributes = match object.get("attributes") {
                Some(v) => parse_attrs(&doc, v, &format!("{path}/attributes"))?,
                None => Vec::new(),
            };
            let start_time = match object.get("startTime") {
                Some(v) => Some(parse_time(
                    as_str(v, &format!("{path}/startTime"))?,
                    &format!("{path}/startTime"),
                )?),
                None => None,
            };
            let end_time = match object.get("endTime") {
                Some(v) => Some(parse_time(
                    as_str(v, &format!("{path}/endTime"))?,
                    &format!("{path}/endTime"),
                )?),
                None => None,
            };
            let element = Element {
                id,
                kind,
                attributes,
                start_time,
                end_time,
            };
            let duplicate = doc
                .elements()
                .iter()
                .any(|e| e.id == element.id && e.kind == element.kind && *e == element);
            if !duplicate {
                doc.push_element_unchecked(element);
            }
        }
    }
    if let Some(relations) = root.get("relations") {
        for (i, rel) in as_array(relations, "/relations")?.iter().enumerate() {
            parse_relation_value(&mut doc, rel, &format!("/relations/{i}"))?;
        }
    }
    if let Some(contracts) = root.get("contracts") {
        for (i, c) in as_array(contracts, "/contracts")?.iter().enumerate() {
            parse_contract_value(&mut doc, c, &format!("/contracts/{i}"))?;
        }
    }
    if let Some(controls) = root.get("controls") {
        for (i, c) in as_array(controls, "/controls")?.iter().enumerate() {
            parse_control_value(&mut doc, c, &format!("/controls/{i}"))?;
        }
    }
    if let Some(annotations) = root.get("annotations") {
        for (i, a) in as_array(annotations, "/annotations")?.iter().enumerate() {
            parse_annotation_value(&mut doc, a, &format!("/annotations/{i}"))?;
        }
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QualifiedName {
        s.parse().unwrap()
    }

    #[test]
    fn empty_document_layout() {
        let doc = ProvDocument::new(EncodingMode::BundlesPlus);
        let value = document_to_value(&doc);
        let object = value.as_object().unwrap();
        let keys: Vec<&String> = object.keys().collect();
        assert_eq!(
            keys,
            ["mode", "prefixes", "environments", "elements", "relations", "contracts", "controls", "annotations"]
        );
        assert_eq!(object["mode"], json!("bundles+"));
        assert_eq!(object["prefixes"], json!({}));
    }

    #[test]
    fn json_round_trip_preserves_structure() {
        let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
        doc.declare_namespace("ex", "http://example.org/f/").unwrap();
        doc.declare_namespace("de", crate::model::DE_NS).unwrap();
        doc.create_environment(
            q("ex:gond"),
            vec![Attribute::new(q("de:envType"), "Government")],
            None,
        )
        .unwrap();
        doc.create_environment(q("ex:nrds"), vec![], Some(q("ex:gond"))).unwrap();
        doc.add_element(Element::entity(q("ex:e")).with_attr(q("de:n"), 7i64)).unwrap();
        doc.assign_to_environment(&q("ex:e"), &q("ex:gond")).unwrap();
        doc.add_relation(
            Relation::new(RelationKind::Used, q("ex:a"), q("ex:e")).with_id(q("ex:flow1")),
        )
        .unwrap();
        doc.relate_environments(EnvRelationKind::HostedBy, q("ex:nrds"), q("ex:gond"), vec![])
            .unwrap();
        doc.record_contract(q("ex:c1"), vec![q("ex:gond"), q("ex:nrds")], vec![]).unwrap();
        doc.annotate_relation(&q("ex:flow1"), vec![Attribute::new(q("de:meaning"), "store")])
            .unwrap();
        let text = serialize_json(&doc);
        let back = parse_json(&text).unwrap();
        assert_eq!(doc, back);
    }

    #[test]
    fn unknown_relation_kind_reports_path() {
        let text = r#"{
  "mode": "bundles+",
  "prefixes": {"ex": "http://example.org/f/"},
  "relations": [
    {"kind": "used", "subject": "ex:a", "object": "ex:b"},
    {"kind": "wasInfromed", "subject": "ex:a", "object": "ex:b"}
  ]
}"#;
        let err = parse_json(text).unwrap_err();
        assert_eq!(err.path, "/relations/1/kind");
        assert!(err.message.contains("wasInfromed"));
    }

    #[test]
    fn unknown_top_level_key_rejected() {
        let err = parse_json(r#"{"mode": "bundle", "bogus": 1}"#).unwrap_err();
        assert!(err.message.contains("bogus"));
    }

    #[test]
    fn qname_value_round_trips() {
        let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
        doc.declare_namespace("ex", "http://example.org/f/").unwrap();
        doc.declare_namespace("de", crate::model::DE_NS).unwrap();
        doc.add_element(
            Element::entity(q("ex:e")).with_attr(q("de:ref"), AttrValue::Qname(q("ex:other"))),
        )
        .unwrap();
        let back = parse_json(&serialize_json(&doc)).unwrap();
        assert_eq!(doc, back);
    }

    #[test]
    fn serialization_is_deterministic_across_insertion_order() {
        let build = |reverse: bool| {
            let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
            doc.declare_namespace("ex", "http://example.org/f/").unwrap();
            let mut ids = vec!["ex:a", "ex:b", "ex:c"];
            if reverse {
                ids.reverse();
            }
            for id in ids {
                doc.add_element(Element::entity(q(id))).unwrap();
            }
            doc
        };
        assert_eq!(serialize_json(&build(false)), serialize_json(&build(true)));
    }
}
