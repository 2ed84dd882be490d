//! The constraint component: uniqueness, ordering, impossibility, typing and
//! nesting checks. Each check is a pure function over the (closed) document.

use std::cmp::Ordering as Ord_;
use std::collections::{BTreeMap, BTreeSet};

use crate::environment::{split_environment_path, EncodingMode};
use crate::model::{
    canonical_attrs, AttrValue, Element, ProvDocument, QualifiedName, RelationKind, Timestamp,
};
use crate::validation::{EnvironmentTree, Finding, FindingCategory};

fn err(category: FindingCategory, subjects: Vec<QualifiedName>, message: String) -> Finding {
    Finding::error(category, subjects, message)
}

/// Statement identity key: the resolved URI when the prefix is declared, so
/// aliased prefixes compare equal, otherwise the textual form.
fn resolved_key(doc: &ProvDocument, id: &QualifiedName) -> String {
    id.resolve(&doc.namespaces)
        .unwrap_or_else(|_| id.to_string())
}

/// One finding per id bound to two non-identical statements of the same kind.
pub fn check_uniqueness(doc: &ProvDocument) -> Vec<Finding> {
    let mut findings = Vec::new();
    let mut by_key: BTreeMap<(String, &'static str), Vec<&Element>> = BTreeMap::new();
    for element in doc.elements() {
        by_key
            .entry((resolved_key(doc, &element.id), element.kind.keyword()))
            .or_default()
            .push(element);
    }
    for ((_, kind), statements) in by_key {
        let conflicting = statements.iter().any(|e| {
            let first = statements[0];
            e.start_time != first.start_time
                || e.end_time != first.end_time
                || canonical_attrs(&e.attributes) != canonical_attrs(&first.attributes)
        });
        if conflicting {
            findings.push(err(
                FindingCategory::Uniqueness,
                vec![statements[0].id.clone()],
                format!(
                    "id `{}` is bound to {} non-identical {kind} statements",
                    statements[0].id,
                    statements.len()
                ),
            ));
        }
    }
    // Relation ids must identify one relation.
    let mut rel_ids: BTreeMap<String, Vec<&crate::model::Relation>> = BTreeMap::new();
    for relation in doc.relations() {
        if let Some(id) = &relation.id {
            rel_ids.entry(resolved_key(doc, id)).or_default().push(relation);
        }
    }
    for (_, statements) in rel_ids {
        if statements.len() > 1 && statements.iter().any(|r| *r != statements[0]) {
            let id = statements[0].id.clone().expect("grouped by id");
            findings.push(err(
                FindingCategory::Uniqueness,
                vec![id.clone()],
                format!("relation id `{id}` identifies more than one relation"),
            ));
        }
    }
    findings
}

/// A point on the document's time scale: either a symbolic `t<N>` label or a
/// real timestamp. Points of different flavours are incomparable.
#[derive(Debug, Clone, Copy, PartialEq)]
enum TimePoint {
    Label(u32),
    Stamp(Timestamp),
}

impl TimePoint {
    fn compare(self, other: TimePoint) -> Option<Ord_> {
        match (self, other) {
            (TimePoint::Label(a), TimePoint::Label(b)) => Some(a.cmp(&b)),
            (TimePoint::Stamp(a), TimePoint::Stamp(b)) => Some(a.cmp(&b)),
            _ => None,
        }
    }
}

fn time_label_key() -> QualifiedName {
    QualifiedName::new("de", "timeLabel").expect("static name")
}

fn activity_time(doc: &ProvDocument, id: &QualifiedName) -> Option<TimePoint> {
    let activity = doc.lookup_kind(crate::model::ElementKind::Activity, id)?;
    if let Some(AttrValue::Str(label)) = activity.attr(&time_label_key()) {
        let digits = label.strip_prefix(['t', 'T'])?;
        if let Ok(n) = digits.parse::<u32>() {
            return Some(TimePoint::Label(n));
        }
    }
    activity.start_time.map(TimePoint::Stamp)
}

/// Per entity: usage must not precede generation when both carry comparable
/// time labels or timestamps. Incomparable or missing times are skipped.
pub fn check_ordering(doc: &ProvDocument) -> Vec<Finding> {
    let mut findings = Vec::new();
    let mut generated_by: BTreeMap<&QualifiedName, Vec<&QualifiedName>> = BTreeMap::new();
    let mut used_by: BTreeMap<&QualifiedName, Vec<&QualifiedName>> = BTreeMap::new();
    for relation in doc.relations() {
        match relation.kind {
            RelationKind::WasGeneratedBy => generated_by
                .entry(&relation.subject)
                .or_default()
                .push(&relation.object),
            RelationKind::Used => used_by
                .entry(&relation.object)
                .or_default()
                .push(&relation.subject),
            _ => {}
        }
    }
    for (entity, generators) in &generated_by {
        let Some(users) = used_by.get(entity) else {
            continue;
        };
        for generator in generators {
            let Some(gen_time) = activity_time(doc, generator) else {
                continue;
            };
            for user in users {
                let Some(use_time) = activity_time(doc, user) else {
                    continue;
                };
                if use_time.compare(gen_time) == Some(Ord_::Less) {
                    findings.push(err(
                        FindingCategory::Ordering,
                        vec![(*entity).clone(), (*user).clone(), (*generator).clone()],
                        format!(
                            "entity `{entity}` is used by `{user}` before it is generated by `{generator}`"
                        ),
                    ));
                }
            }
        }
    }
    findings
}

/// Prohibited patterns: derivation cycles, self-communication, ids used as
/// both element and environment, nested bundles in plain-Bundle mode, and
/// containment cycles.
pub fn check_impossibility(doc: &ProvDocument) -> Vec<Finding> {
    let mut findings = Vec::new();

    // Self-communication.
    for relation in doc.relations() {
        if relation.kind == RelationKind::WasInformedBy && relation.subject == relation.object {
            findings.push(err(
                FindingCategory::Impossibility,
                vec![relation.subject.clone()],
                format!("activity `{}` communicates with itself", relation.subject),
            ));
        }
    }

    // Derivation cycles: walk wasDerivedFrom edges (derived → source).
    let mut derivation: BTreeMap<&QualifiedName, BTreeSet<&QualifiedName>> = BTreeMap::new();
    for relation in doc.relations() {
        if relation.kind == RelationKind::WasDerivedFrom {
            derivation
                .entry(&relation.subject)
                .or_default()
                .insert(&relation.object);
        }
    }
    let mut on_cycle: BTreeSet<&QualifiedName> = BTreeSet::new();
    for start in derivation.keys() {
        // start is on a cycle iff it can reach itself
        let mut stack: Vec<&QualifiedName> = derivation[start].iter().copied().collect();
        let mut seen: BTreeSet<&QualifiedName> = BTreeSet::new();
        while let Some(node) = stack.pop() {
            if node == *start {
                on_cycle.insert(start);
                break;
            }
            if seen.insert(node) {
                if let Some(next) = derivation.get(node) {
                    stack.extend(next.iter().copied());
                }
            }
        }
    }
    if !on_cycle.is_empty() {
        let subjects: Vec<QualifiedName> = on_cycle.iter().map(|q| (*q).clone()).collect();
        findings.push(err(
            FindingCategory::Impossibility,
            subjects.clone(),
            format!(
                "derivation chain forms a cycle through {}",
                subjects
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" -> ")
            ),
        ));
    }

    // Ids used as both element and environment.
    for env in doc.environments() {
        if doc.lookup(&env.id).is_some() {
            findings.push(err(
                FindingCategory::Impossibility,
                vec![env.id.clone()],
                format!("id `{}` is used as both an element and a data environment", env.id),
            ));
        }
    }

    // Nested bundles under a plain-Bundle header.
    if doc.mode == EncodingMode::Bundle {
        for env in doc.environments() {
            if let Some(parent) = &env.parent {
                findings.push(err(
                    FindingCategory::Impossibility,
                    vec![env.id.clone(), parent.clone()],
                    format!(
                        "environment `{}` is nested inside `{parent}` but plain bundles do not nest",
                        env.id
                    ),
                ));
            }
        }
    }

    // Containment cycles.
    let mut reported: BTreeSet<QualifiedName> = BTreeSet::new();
    for env in doc.environments() {
        let mut seen = BTreeSet::new();
        seen.insert(&env.id);
        let mut current = env.parent.as_ref();
        while let Some(p) = current {
            if !seen.insert(p) {
                if !reported.contains(&env.id) {
                    let mut cycle: Vec<QualifiedName> = seen.iter().map(|q| (*q).clone()).collect();
                    cycle.sort();
                    reported.extend(cycle.iter().cloned());
                    findings.push(err(
                        FindingCategory::Impossibility,
                        cycle,
                        "environment containment forms a cycle".to_owned(),
                    ));
                }
                break;
            }
            current = doc.environment(p).and_then(|e| e.parent.as_ref());
        }
    }

    findings
}

/// Endpoint kinds must match each relation's signature; ids bound to several
/// kinds are ambiguous when referenced.
pub fn check_typing(doc: &ProvDocument) -> Vec<Finding> {
    let mut findings = Vec::new();
    for relation in doc.relations() {
        let (subject_kind, object_kind) = relation.kind.signature();
        for (role, endpoint, expected) in [
            ("subject", &relation.subject, subject_kind),
            ("object", &relation.object, object_kind),
        ] {
            let kinds = doc.kinds_of(endpoint);
            match kinds.as_slice() {
                [] => findings.push(err(
                    FindingCategory::Typing,
                    vec![endpoint.clone()],
                    format!(
                        "{} {role} `{endpoint}` does not resolve to any element",
                        relation.kind
                    ),
                )),
                [kind] if *kind != expected => findings.push(err(
                    FindingCategory::Typing,
                    vec![endpoint.clone()],
                    format!(
                        "{} {role} `{endpoint}` must be {} but is declared {}",
                        relation.kind,
                        expected.keyword(),
                        kind.keyword()
                    ),
                )),
                [_] => {}
                many => findings.push(err(
                    FindingCategory::Typing,
                    vec![endpoint.clone()],
                    format!(
                        "{} {role} `{endpoint}` is ambiguous: declared as {}",
                        relation.kind,
                        many.iter()
                            .map(|k| k.keyword())
                            .collect::<Vec<_>>()
                            .join(" and ")
                    ),
                )),
            }
        }
    }
    findings
}

/// Builds the environment tree and reports membership partition violations,
/// escapes from the forest, and namespace-path inconsistencies.
pub fn check_nesting(doc: &ProvDocument) -> Vec<Finding> {
    let mut findings = Vec::new();
    let _tree = EnvironmentTree::from_document(doc);

    // Partition: every element id belongs to at most one environment.
    let mut owners: BTreeMap<&QualifiedName, Vec<&QualifiedName>> = BTreeMap::new();
    for env in doc.environments() {
        for member in &env.members {
            owners.entry(member).or_default().push(&env.id);
        }
    }
    for (member, envs) in owners {
        if envs.len() > 1 {
            let mut subjects = vec![member.clone()];
            subjects.extend(envs.iter().map(|e| (*e).clone()));
            findings.push(err(
                FindingCategory::Nesting,
                subjects,
                format!(
                    "element `{member}` is claimed by {} environments: {}",
                    envs.len(),
                    envs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                ),
            ));
        }
    }

    // Escapes: parents must exist in the forest.
    for env in doc.environments() {
        if let Some(parent) = &env.parent {
            if doc.environment(parent).is_none() {
                findings.push(err(
                    FindingCategory::Nesting,
                    vec![env.id.clone(), parent.clone()],
                    format!(
                        "environment `{}` declares unknown parent `{parent}`",
                        env.id
                    ),
                ));
            }
        }
    }

    // Namespace-family path soundness: a child's uri extends its parent's by
    // exactly the child's segment.
    if doc.mode.is_namespace_family() {
        for env in doc.environments() {
            let Some(uri) = &env.uri else { continue };
            let Ok(path) = split_environment_path(uri) else {
                findings.push(err(
                    FindingCategory::Nesting,
                    vec![env.id.clone()],
                    format!("environment `{}` has malformed uri <{uri}>", env.id),
                ));
                continue;
            };
            let parent_path = match &env.parent {
                Some(parent) => match doc.environment(parent).and_then(|p| p.uri.as_ref()) {
                    Some(parent_uri) => match split_environment_path(parent_uri) {
                        Ok(p) => p,
                        Err(_) => continue, // parent reported separately
                    },
                    None => continue,
                },
                None => Vec::new(),
            };
            let mut expected = parent_path;
            expected.push(env.id.local().to_owned());
            if path != expected {
                findings.push(err(
                    FindingCategory::Nesting,
                    vec![env.id.clone()],
                    format!(
                        "environment `{}` has uri path [{}] but the declared forest implies [{}]",
                        env.id,
                        path.join("/"),
                        expected.join("/")
                    ),
                ));
            }
        }
    }

    findings
}
