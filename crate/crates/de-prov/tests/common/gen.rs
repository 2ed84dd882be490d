//! Seeded random generators for round-trip and chaining tests. Documents are
//! built through the checked operations only, so every generated document is
//! well-formed by construction (gated features simply skip in modes that
//! lack them).

use rand::prelude::*;

use de_prov::environment::{
    ControlNature, ControlRecord, ControlType, EncodingMode, EnvRelationKind, Feature,
    Responsibility,
};
use de_prov::model::{
    AttrValue, Attribute, Element, ProvDocument, QualifiedName, Relation, RelationKind,
};

use super::q;

const STRING_POOL: [&str; 6] = [
    "Government",
    "Restricted",
    "plain value",
    "with \"quotes\" and \\slashes\\",
    "line\nbreak\ttab",
    "ISO27001",
];

fn random_attr_value(rng: &mut impl Rng, qnames: &[QualifiedName]) -> AttrValue {
    match rng.gen_range(0..4) {
        0 => AttrValue::Int(rng.gen_range(-1000..1000)),
        1 if !qnames.is_empty() => {
            AttrValue::Qname(qnames[rng.gen_range(0..qnames.len())].clone())
        }
        _ => AttrValue::Str(STRING_POOL[rng.gen_range(0..STRING_POOL.len())].to_owned()),
    }
}

fn random_attrs(rng: &mut impl Rng, qnames: &[QualifiedName], max: usize) -> Vec<Attribute> {
    let count = rng.gen_range(0..=max);
    (0..count)
        .map(|i| Attribute {
            key: q(&format!("de:attr{}", if rng.gen_bool(0.3) { 0 } else { i })),
            value: random_attr_value(rng, qnames),
        })
        .collect()
}

/// A random document with at most ~50 statements, valid by construction.
pub fn random_document(rng: &mut impl Rng, mode: EncodingMode) -> ProvDocument {
    let mut doc = ProvDocument::new(mode);
    doc.declare_namespace("ex", "http://example.org/gen/").expect("static");
    doc.declare_namespace("de", "http://example.org/de-prov/ns#").expect("static");

    // environment forest
    let env_count = rng.gen_range(0..5);
    let mut envs: Vec<QualifiedName> = Vec::new();
    for i in 0..env_count {
        let id = q(&format!("ex:env{i}"));
        let parent = if !envs.is_empty() && rng.gen_bool(0.4) && mode.supports(Feature::Nesting) {
            Some(envs[rng.gen_range(0..envs.len())].clone())
        } else {
            None
        };
        let attrs = if mode.supports(Feature::Attributes) {
            random_attrs(rng, &[], 3)
        } else {
            Vec::new()
        };
        if doc.create_environment(id.clone(), attrs, parent).is_ok() {
            envs.push(id);
        }
    }

    // elements (overall statement budget stays at or under 50)
    let element_count = rng.gen_range(0..18);
    let mut ids: Vec<QualifiedName> = Vec::new();
    for i in 0..element_count {
        let id = q(&format!("ex:n{i}"));
        let mut element = match rng.gen_range(0..3) {
            0 => Element::entity(id.clone()),
            1 => Element::activity(id.clone()),
            _ => Element::agent(id.clone()),
        };
        element.attributes = random_attrs(rng, &ids, 3);
        if element.kind == de_prov::model::ElementKind::Activity && rng.gen_bool(0.2) {
            let start: de_prov::model::Timestamp =
                "2024-01-01T00:00:00+00:00".parse().expect("static");
            let end: de_prov::model::Timestamp =
                "2024-06-01T12:30:00+00:00".parse().expect("static");
            element.start_time = Some(start);
            if rng.gen_bool(0.5) {
                element.end_time = Some(end);
            }
        }
        if doc.add_element(element).is_ok() {
            if !envs.is_empty() && rng.gen_bool(0.6) {
                let env = envs[rng.gen_range(0..envs.len())].clone();
                let _ = doc.assign_to_environment(&id, &env);
            }
            ids.push(id);
        }
    }

    // relations, possibly dangling
    let relation_count = rng.gen_range(0..13);
    let mut relation_ids: Vec<QualifiedName> = Vec::new();
    for i in 0..relation_count {
        let kind = RelationKind::ALL[rng.gen_range(0..RelationKind::ALL.len())];
        let pick = |rng: &mut dyn RngCore, ids: &[QualifiedName]| -> QualifiedName {
            if !ids.is_empty() && rng.gen_bool(0.8) {
                ids[rng.gen_range(0..ids.len())].clone()
            } else {
                q(&format!("ex:dangling{}", rng.gen_range(0..5)))
            }
        };
        let subject = pick(rng, &ids);
        let object = pick(rng, &ids);
        let mut relation = Relation::new(kind, subject, object);
        relation.attributes = random_attrs(rng, &ids, 2);
        if rng.gen_bool(0.4) {
            let rid = q(&format!("ex:rel{i}"));
            relation = relation.with_id(rid.clone());
            relation_ids.push(rid);
        }
        let _ = doc.add_relation(relation);
    }

    // environment relations
    if envs.len() >= 2 && mode.supports(Feature::Relationships) {
        for _ in 0..rng.gen_range(0..4) {
            let kinds = [
                EnvRelationKind::HostedBy,
                EnvRelationKind::OwnedBy,
                EnvRelationKind::ManagedBy,
                EnvRelationKind::SharesDataWith,
            ];
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let subject = envs[rng.gen_range(0..envs.len())].clone();
            let object = envs[rng.gen_range(0..envs.len())].clone();
            let _ = doc.relate_environments(kind, subject, object, random_attrs(rng, &[], 2));
        }
    }

    // contracts
    if envs.len() >= 2 && mode.supports(Feature::Contracts) {
        for i in 0..rng.gen_range(0..3) {
            let a = envs[rng.gen_range(0..envs.len())].clone();
            let b = envs[rng.gen_range(0..envs.len())].clone();
            if a == b {
                continue;
            }
            let _ = doc.record_contract(
                q(&format!("ex:contract{i}")),
                vec![a, b],
                random_attrs(rng, &[], 2),
            );
        }
    }

    // control records
    if envs.len() >= 2 {
        for _ in 0..rng.gen_range(0..3) {
            let holder = envs[rng.gen_range(0..envs.len())].clone();
            let target = envs[rng.gen_range(0..envs.len())].clone();
            let _ = doc.record_control(ControlRecord {
                holder,
                target,
                control_type: if rng.gen_bool(0.5) {
                    ControlType::Direct
                } else {
                    ControlType::Indirect
                },
                control_nature: if rng.gen_bool(0.5) {
                    ControlNature::Strategic
                } else {
                    ControlNature::Operational
                },
                responsibility: if rng.gen_bool(0.5) {
                    Responsibility::Direct
                } else {
                    Responsibility::Indirect
                },
            });
        }
    }

    // annotations on identified relations
    if mode.supports(Feature::Annotation) {
        for rid in relation_ids.iter().take(2) {
            let attrs = random_attrs(rng, &[], 2);
            if !attrs.is_empty() {
                let _ = doc.annotate_relation(rid, attrs);
            }
        }
    }

    doc
}

/// A random flow DAG over at most `max_nodes` nodes: element flow relations
/// plus optional environments with `sharesDataWith` edges. Returns the
/// document and the flow-direction edge list for the oracle.
pub fn random_flow_dag(
    rng: &mut impl Rng,
    max_nodes: usize,
) -> (ProvDocument, Vec<(QualifiedName, QualifiedName)>) {
    let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
    doc.declare_namespace("ex", "http://example.org/gen/").expect("static");

    let node_count = rng.gen_range(2..=max_nodes.max(2));
    let mut kinds = Vec::with_capacity(node_count);
    let mut nodes = Vec::with_capacity(node_count);
    for i in 0..node_count {
        let id = q(&format!("ex:n{i}"));
        let is_entity = rng.gen_bool(0.5);
        let element = if is_entity {
            Element::entity(id.clone())
        } else {
            Element::activity(id.clone())
        };
        doc.add_element(element).expect("fresh id");
        kinds.push(is_entity);
        nodes.push(id);
    }

    // a few environments holding the nodes
    let env_count = rng.gen_range(0..4);
    let mut envs = Vec::new();
    for i in 0..env_count {
        let id = q(&format!("ex:env{i}"));
        doc.create_environment(id.clone(), vec![], None).expect("fresh env");
        envs.push(id);
    }
    if !envs.is_empty() {
        for node in &nodes {
            if rng.gen_bool(0.7) {
                let env = envs[rng.gen_range(0..envs.len())].clone();
                let _ = doc.assign_to_environment(node, &env);
            }
        }
    }

    let mut edges: Vec<(QualifiedName, QualifiedName)> = Vec::new();
    let edge_count = rng.gen_range(0..node_count * 2);
    for _ in 0..edge_count {
        let i = rng.gen_range(0..node_count - 1);
        let j = rng.gen_range(i + 1..node_count);
        // data flows i -> j; the relation kind is fixed by the endpoint kinds
        let (flow_source, flow_target) = (nodes[i].clone(), nodes[j].clone());
        let relation = match (kinds[i], kinds[j]) {
            // entity -> activity: the activity used the entity
            (true, false) => Relation::new(RelationKind::Used, flow_target.clone(), flow_source.clone()),
            // activity -> entity: the entity was generated by the activity
            (false, true) => Relation::new(
                RelationKind::WasGeneratedBy,
                flow_target.clone(),
                flow_source.clone(),
            ),
            // activity -> activity: communication
            (false, false) => Relation::new(
                RelationKind::WasInformedBy,
                flow_target.clone(),
                flow_source.clone(),
            ),
            // entity -> entity: derivation
            (true, true) => Relation::new(
                RelationKind::WasDerivedFrom,
                flow_target.clone(),
                flow_source.clone(),
            ),
        };
        doc.add_relation(relation).expect("declared endpoints");
        if !edges.contains(&(flow_source.clone(), flow_target.clone())) {
            edges.push((flow_source, flow_target));
        }
    }

    // sharesDataWith edges between environments, also forward-only
    if envs.len() >= 2 {
        for _ in 0..rng.gen_range(0..envs.len()) {
            let i = rng.gen_range(0..envs.len() - 1);
            let j = rng.gen_range(i + 1..envs.len());
            if doc
                .relate_environments(
                    EnvRelationKind::SharesDataWith,
                    envs[i].clone(),
                    envs[j].clone(),
                    vec![],
                )
                .is_ok()
                && !edges.contains(&(envs[i].clone(), envs[j].clone()))
            {
                edges.push((envs[i].clone(), envs[j].clone()));
            }
        }
    }

    (doc, edges)
}
