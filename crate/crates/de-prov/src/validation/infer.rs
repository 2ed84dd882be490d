//! Inference closure: fixes missing information before the constraints run.
//!
//! Two rules are applied, to a fixpoint:
//!
//! 1. ids referenced only in relations get a placeholder element whose kind
//!    is deduced from the relation position;
//! 2. `wasInformedBy(a2, a1)` is added whenever `used(a2, e)` and
//!    `wasGeneratedBy(e, a1)` both hold and the communication edge is absent.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use crate::model::{Element, ElementKind, ProvDocument, QualifiedName, Relation, RelationKind};

/// A statement added by inference.
#[derive(Debug, Clone, PartialEq)]
pub enum InferredStatement {
    Element(Element),
    Relation(Relation),
}

impl InferredStatement {
    pub fn describe(&self) -> serde_json::Value {
        match self {
            InferredStatement::Element(e) => json!({
                "type": "element",
                "kind": e.kind.keyword(),
                "id": e.id.to_string(),
            }),
            InferredStatement::Relation(r) => json!({
                "type": "relation",
                "kind": r.kind.keyword(),
                "subject": r.subject.to_string(),
                "object": r.object.to_string(),
            }),
        }
    }
}

impl fmt::Display for InferredStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InferredStatement::Element(e) => write!(f, "{}({})", e.kind.keyword(), e.id),
            InferredStatement::Relation(r) => {
                write!(f, "{}({}, {})", r.kind.keyword(), r.subject, r.object)
            }
        }
    }
}

/// Error raised by [`infer`] when relation positions force one id to two
/// different kinds; the conflict is reported, never guessed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InferError {
    #[error("relation positions force `{id}` to be more than one kind: {}",
        .kinds.iter().map(|k| k.keyword()).collect::<Vec<_>>().join(", "))]
    AmbiguousKind {
        id: QualifiedName,
        kinds: Vec<ElementKind>,
    },
}

pub(crate) struct Closure {
    pub document: ProvDocument,
    pub inferred: Vec<InferredStatement>,
    pub ambiguities: Vec<(QualifiedName, Vec<ElementKind>)>,
}

/// Closes a document: placeholders for dangling ids, then communication
/// edges. Ids with conflicting demanded kinds get no placeholder and are
/// returned as ambiguities.
pub(crate) fn close(doc: &ProvDocument) -> Closure {
    let mut closed = doc.clone();
    let mut inferred = Vec::new();

    // Rule 1: placeholder elements, kind deduced from relation position.
    let mut demanded: BTreeMap<QualifiedName, Vec<ElementKind>> = BTreeMap::new();
    for rel in closed.relations().to_vec() {
        let (sk, ok) = rel.kind.signature();
        for (endpoint, kind) in [(rel.subject.clone(), sk), (rel.object.clone(), ok)] {
            if closed.lookup(&endpoint).is_none() {
                let slot = demanded.entry(endpoint).or_default();
                if !slot.contains(&kind) {
                    slot.push(kind);
                }
            }
        }
    }
    let mut ambiguities = Vec::new();
    for (id, mut kinds) in demanded {
        if kinds.len() == 1 {
            let element = Element::new(kinds[0], id);
            closed.push_element_unchecked(element.clone());
            inferred.push(InferredStatement::Element(element));
        } else {
            kinds.sort();
            ambiguities.push((id, kinds));
        }
    }

    // Rule 2: communication edges from usage/generation pairs.
    let mut generators: BTreeMap<&QualifiedName, Vec<&QualifiedName>> = BTreeMap::new();
    for rel in closed.relations() {
        if rel.kind == RelationKind::WasGeneratedBy {
            generators.entry(&rel.subject).or_default().push(&rel.object);
        }
    }
    let mut new_edges: Vec<(QualifiedName, QualifiedName)> = Vec::new();
    for rel in closed.relations() {
        if rel.kind != RelationKind::Used {
            continue;
        }
        let user = &rel.subject;
        let entity = &rel.object;
        for generator in generators.get(entity).into_iter().flatten() {
            if user == *generator {
                continue; // a self edge would only feed the impossibility check
            }
            let exists = closed.relations().iter().any(|r| {
                r.kind == RelationKind::WasInformedBy
                    && &r.subject == user
                    && r.object == **generator
            }) || new_edges
                .iter()
                .any(|(s, o)| s == user && o == *generator);
            if !exists {
                new_edges.push((user.clone(), (*generator).clone()));
            }
        }
    }
    for (subject, object) in new_edges {
        let rel = Relation::new(RelationKind::WasInformedBy, subject, object);
        closed.push_relation_unchecked(rel.clone());
        inferred.push(InferredStatement::Relation(rel));
    }

    Closure {
        document: closed,
        inferred,
        ambiguities,
    }
}

/// Public inference entry point: returns the closed document and the list of
/// inferred statements, or an error if any id's kind is ambiguous.
pub fn infer(doc: &ProvDocument) -> Result<(ProvDocument, Vec<InferredStatement>), InferError> {
    let closure = close(doc);
    if let Some((id, kinds)) = closure.ambiguities.into_iter().next() {
        return Err(InferError::AmbiguousKind { id, kinds });
    }
    Ok((closure.document, closure.inferred))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::EncodingMode;

    fn q(s: &str) -> QualifiedName {
        s.parse().unwrap()
    }

    fn doc() -> ProvDocument {
        let mut d = ProvDocument::new(EncodingMode::BundlesPlus);
        d.declare_namespace("ex", "http://example.org/t/").unwrap();
        d
    }

    // Independent position table used as the oracle for placeholder kinds.
    fn expected_kinds(kind: RelationKind) -> (ElementKind, ElementKind) {
        use ElementKind::*;
        match kind.keyword() {
            "wasGeneratedBy" => (Entity, Activity),
            "used" => (Activity, Entity),
            "wasInformedBy" => (Activity, Activity),
            "wasAssociatedWith" => (Activity, Agent),
            "actedOnBehalfOf" => (Agent, Agent),
            "wasDerivedFrom" => (Entity, Entity),
            "wasAttributedTo" => (Entity, Agent),
            _ => unreachable!(),
        }
    }

    #[test]
    fn placeholder_kinds_match_position_table() {
        for kind in RelationKind::ALL {
            let mut d = doc();
            d.add_relation(Relation::new(kind, q("ex:s"), q("ex:o"))).unwrap();
            let (closed, inferred) = infer(&d).unwrap();
            let (sk, ok) = expected_kinds(kind);
            assert_eq!(closed.lookup(&q("ex:s")).unwrap().kind, sk, "{kind}");
            assert_eq!(closed.lookup(&q("ex:o")).unwrap().kind, ok, "{kind}");
            assert_eq!(inferred.len(), 2, "{kind}");
        }
    }

    #[test]
    fn used_entity_inferred() {
        let mut d = doc();
        d.add_element(Element::activity(q("ex:a"))).unwrap();
        d.add_relation(Relation::new(RelationKind::Used, q("ex:a"), q("ex:e")))
            .unwrap();
        assert!(d.lookup(&q("ex:e")).is_none());
        let (closed, inferred) = infer(&d).unwrap();
        assert_eq!(closed.lookup(&q("ex:e")).unwrap().kind, ElementKind::Entity);
        assert_eq!(inferred.len(), 1);
    }

    #[test]
    fn communication_edge_inferred() {
        let mut d = doc();
        d.add_element(Element::activity(q("ex:a1"))).unwrap();
        d.add_element(Element::activity(q("ex:a2"))).unwrap();
        d.add_element(Element::entity(q("ex:e"))).unwrap();
        d.add_relation(Relation::new(
            RelationKind::WasGeneratedBy,
            q("ex:e"),
            q("ex:a1"),
        ))
        .unwrap();
        d.add_relation(Relation::new(RelationKind::Used, q("ex:a2"), q("ex:e")))
            .unwrap();
        let (closed, inferred) = infer(&d).unwrap();
        assert!(closed.relations().iter().any(|r| {
            r.kind == RelationKind::WasInformedBy
                && r.subject == q("ex:a2")
                && r.object == q("ex:a1")
        }));
        assert_eq!(inferred.len(), 1);
    }

    #[test]
    fn closed_document_is_fixpoint() {
        let mut d = doc();
        d.add_element(Element::activity(q("ex:a1"))).unwrap();
        d.add_element(Element::activity(q("ex:a2"))).unwrap();
        d.add_element(Element::entity(q("ex:e"))).unwrap();
        d.add_relation(Relation::new(
            RelationKind::WasGeneratedBy,
            q("ex:e"),
            q("ex:a1"),
        ))
        .unwrap();
        d.add_relation(Relation::new(RelationKind::Used, q("ex:a2"), q("ex:e")))
            .unwrap();
        let (closed, first) = infer(&d).unwrap();
        assert_eq!(first.len(), 1);
        let (again, second) = infer(&closed).unwrap();
        assert!(second.is_empty());
        assert_eq!(closed, again);
    }

    #[test]
    fn fully_closed_document_infers_nothing() {
        let mut d = doc();
        d.add_element(Element::entity(q("ex:e"))).unwrap();
        let (_, inferred) = infer(&d).unwrap();
        assert!(inferred.is_empty());
    }

    #[test]
    fn ambiguous_kind_reported() {
        let mut d = doc();
        // ex:x is demanded as entity (used object) and as activity
        // (wasInformedBy subject)
        d.add_element(Element::activity(q("ex:a"))).unwrap();
        d.add_relation(Relation::new(RelationKind::Used, q("ex:a"), q("ex:x")))
            .unwrap();
        d.add_relation(Relation::new(
            RelationKind::WasInformedBy,
            q("ex:x"),
            q("ex:a"),
        ))
        .unwrap();
        let err = infer(&d).unwrap_err();
        assert!(matches!(err, InferError::AmbiguousKind { .. }));
    }

    #[test]
    fn self_communication_not_inferred() {
        let mut d = doc();
        d.add_element(Element::activity(q("ex:a"))).unwrap();
        d.add_element(Element::entity(q("ex:e"))).unwrap();
        d.add_relation(Relation::new(
            RelationKind::WasGeneratedBy,
            q("ex:e"),
            q("ex:a"),
        ))
        .unwrap();
        d.add_relation(Relation::new(RelationKind::Used, q("ex:a"), q("ex:e")))
            .unwrap();
        let (_, inferred) = infer(&d).unwrap();
        assert!(inferred.is_empty());
    }
}
