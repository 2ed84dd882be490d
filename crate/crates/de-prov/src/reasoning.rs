//! Environment-aware lineage reasoning: forward/backward chaining over
//! data-flow edges, control/responsibility queries, and the requirement
//! support checker.
//!
//! The flow graph is a uniform id graph: element ids connected by the
//! generation / usage / communication / derivation relations, and environment
//! ids connected by `sharesDataWith` edges. Agent links (association,
//! delegation, attribution) carry no data and are excluded from closure.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde_json::json;

use crate::environment::{EncodingMode, EnvRelationKind, Feature};
use crate::model::{ProvDocument, QualifiedName, RelationKind};

/// Errors raised by reasoning queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("node `{0}` is neither an element nor an environment of the document")]
    UnknownNode(QualifiedName),
    #[error("environment `{0}` does not exist")]
    UnknownEnvironment(QualifiedName),
}

/// Chaining direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

/// A node reached by a chain, with the environment it sits in and its hop
/// distance from the origin.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReachedNode {
    pub id: QualifiedName,
    pub environment: Option<QualifiedName>,
    pub distance: usize,
}

/// A traversed flow edge whose endpoints sit in different environments.
/// `from`/`to` follow the direction of data flow regardless of which way the
/// chain walked the edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Crossing {
    pub from: Option<QualifiedName>,
    pub to: Option<QualifiedName>,
    pub kind: String,
    pub source: QualifiedName,
    pub target: QualifiedName,
    /// Contracts governing this edge, when the relation carries an id.
    pub contracts: Vec<QualifiedName>,
}

/// Result of a forward or backward chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainResult {
    pub origin: QualifiedName,
    pub direction: Direction,
    pub reached: Vec<ReachedNode>,
    pub crossings: Vec<Crossing>,
    /// Contracts governing any crossed flow, sorted.
    pub contracts: Vec<QualifiedName>,
}

impl ChainResult {
    pub fn reached_ids(&self) -> BTreeSet<&QualifiedName> {
        self.reached.iter().map(|r| &r.id).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "origin": self.origin.to_string(),
            "direction": self.direction.name(),
            "reached": self.reached.iter().map(|r| json!({
                "id": r.id.to_string(),
                "environment": r.environment.as_ref().map(ToString::to_string),
                "distance": r.distance,
            })).collect::<Vec<_>>(),
            "crossings": self.crossings.iter().map(|c| json!({
                "from": c.from.as_ref().map(ToString::to_string),
                "to": c.to.as_ref().map(ToString::to_string),
                "kind": c.kind,
                "source": c.source.to_string(),
                "target": c.target.to_string(),
                "contracts": c.contracts.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "contracts": self.contracts.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

/// A directed flow edge in the uniform id graph. `source → target` follows
/// the direction of data flow.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlowEdge {
    pub source: QualifiedName,
    pub target: QualifiedName,
    pub kind: String,
    pub relation_id: Option<QualifiedName>,
}

/// Extracts the document's flow edges: element relations oriented by data
/// flow, plus `sharesDataWith` edges between environment ids.
pub fn flow_edges(doc: &ProvDocument) -> Vec<FlowEdge> {
    let mut edges = Vec::new();
    for rel in doc.relations() {
        let flow = match rel.kind {
            // activity generated entity: data flows activity → entity
            RelationKind::WasGeneratedBy => Some((rel.object.clone(), rel.subject.clone())),
            // activity used entity: data flows entity → activity
            RelationKind::Used => Some((rel.object.clone(), rel.subject.clone())),
            // informed: data flows informant → informed
            RelationKind::WasInformedBy => Some((rel.object.clone(), rel.subject.clone())),
            // derived: data flows source → derived
            RelationKind::WasDerivedFrom => Some((rel.object.clone(), rel.subject.clone())),
            _ => None,
        };
        if let Some((source, target)) = flow {
            edges.push(FlowEdge {
                source,
                target,
                kind: rel.kind.keyword().to_owned(),
                relation_id: rel.id.clone(),
            });
        }
    }
    for rel in doc.env_relations() {
        if rel.kind == EnvRelationKind::SharesDataWith {
            edges.push(FlowEdge {
                source: rel.subject.clone(),
                target: rel.object.clone(),
                kind: rel.kind.keyword().to_owned(),
                relation_id: None,
            });
        }
    }
    edges
}

fn contracts_governing(
    doc: &ProvDocument,
    relation_id: Option<&QualifiedName>,
) -> Vec<QualifiedName> {
    let Some(rid) = relation_id else {
        return Vec::new();
    };
    let mut out: Vec<QualifiedName> = doc
        .contracts()
        .filter(|c| c.governs_flows.contains(rid))
        .map(|c| c.id.clone())
        .collect();
    out.sort();
    out
}

fn node_environment(doc: &ProvDocument, id: &QualifiedName) -> Option<QualifiedName> {
    if let Some(env) = doc.environment_of(id) {
        return Some(env.clone());
    }
    // environment ids sit in themselves
    doc.environment(id).map(|e| e.id.clone())
}

fn chain(
    doc: &ProvDocument,
    origin: &QualifiedName,
    direction: Direction,
) -> Result<ChainResult, QueryError> {
    let known = doc.lookup(origin).is_some() || doc.environment(origin).is_some();
    if !known {
        return Err(QueryError::UnknownNode(origin.clone()));
    }
    let edges = flow_edges(doc);
    let mut adjacency: BTreeMap<&QualifiedName, Vec<&FlowEdge>> = BTreeMap::new();
    for edge in &edges {
        let key = match direction {
            Direction::Forward => &edge.source,
            Direction::Backward => &edge.target,
        };
        adjacency.entry(key).or_default().push(edge);
    }
    let mut distance: BTreeMap<QualifiedName, usize> = BTreeMap::new();
    let mut crossings: BTreeSet<Crossing> = BTreeSet::new();
    let mut queue = VecDeque::new();
    distance.insert(origin.clone(), 0);
    queue.push_back(origin.clone());
    while let Some(node) = queue.pop_front() {
        let hops = distance[&node];
        for edge in adjacency.get(&node).into_iter().flatten() {
            let next = match direction {
                Direction::Forward => &edge.target,
                Direction::Backward => &edge.source,
            };
            let source_env = node_environment(doc, &edge.source);
            let target_env = node_environment(doc, &edge.target);
            if source_env != target_env {
                crossings.insert(Crossing {
                    from: source_env,
                    to: target_env,
                    kind: edge.kind.clone(),
                    source: edge.source.clone(),
                    target: edge.target.clone(),
                    contracts: contracts_governing(doc, edge.relation_id.as_ref()),
                });
            }
            if !distance.contains_key(next) {
                distance.insert(next.clone(), hops + 1);
                queue.push_back(next.clone());
            }
        }
    }
    let mut reached: Vec<ReachedNode> = distance
        .into_iter()
        .map(|(id, distance)| ReachedNode {
            environment: node_environment(doc, &id),
            id,
            distance,
        })
        .collect();
    reached.sort();
    let mut contracts: BTreeSet<QualifiedName> = BTreeSet::new();
    for crossing in &crossings {
        contracts.extend(crossing.contracts.iter().cloned());
    }
    Ok(ChainResult {
        origin: origin.clone(),
        direction,
        reached,
        crossings: crossings.into_iter().collect(),
        contracts: contracts.into_iter().collect(),
    })
}

/// Downstream reachability over flow edges, plus the contracts governing any
/// crossed environment boundary.
pub fn forward_chain(doc: &ProvDocument, node: &QualifiedName) -> Result<ChainResult, QueryError> {
    chain(doc, node, Direction::Forward)
}

/// Upstream reachability: the sources of data and the contracts it moved
/// under.
pub fn backward_chain(doc: &ProvDocument, node: &QualifiedName) -> Result<ChainResult, QueryError> {
    chain(doc, node, Direction::Backward)
}

/// One controller of an environment: the holder and the shape of its
/// authority. `transitive` marks records inherited from an ancestor
/// environment rather than asserted on the environment itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllerInfo {
    pub holder: QualifiedName,
    pub control_type: crate::environment::ControlType,
    pub control_nature: crate::environment::ControlNature,
    pub responsibility: crate::environment::Responsibility,
    pub transitive: bool,
}

/// All control records targeting `env` or any of its ancestors; ancestor
/// records are marked transitive.
pub fn controllers_of(
    doc: &ProvDocument,
    env: &QualifiedName,
) -> Result<Vec<ControllerInfo>, QueryError> {
    if doc.environment(env).is_none() {
        return Err(QueryError::UnknownEnvironment(env.clone()));
    }
    let mut targets: Vec<(&QualifiedName, bool)> = vec![(env, false)];
    targets.extend(doc.environment_ancestors(env).into_iter().map(|a| (a, true)));
    let mut out = Vec::new();
    for (target, transitive) in targets {
        for record in doc.controls() {
            if &record.target == target {
                out.push(ControllerInfo {
                    holder: record.holder.clone(),
                    control_type: record.control_type,
                    control_nature: record.control_nature,
                    responsibility: record.responsibility,
                    transitive,
                });
            }
        }
    }
    Ok(out)
}

pub fn controllers_to_json(controllers: &[ControllerInfo]) -> serde_json::Value {
    json!(controllers
        .iter()
        .map(|c| json!({
            "holder": c.holder.to_string(),
            "controlType": c.control_type.name(),
            "controlNature": c.control_nature.name(),
            "responsibility": c.responsibility.name(),
            "transitive": c.transitive,
        }))
        .collect::<Vec<_>>())
}

/// The eight representation requirements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Requirement {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl Requirement {
    pub const ALL: [Requirement; 8] = [
        Requirement::R1,
        Requirement::R2,
        Requirement::R3,
        Requirement::R4,
        Requirement::R5,
        Requirement::R6,
        Requirement::R7,
        Requirement::R8,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Requirement::R1 => "R1",
            Requirement::R2 => "R2",
            Requirement::R3 => "R3",
            Requirement::R4 => "R4",
            Requirement::R5 => "R5",
            Requirement::R6 => "R6",
            Requirement::R7 => "R7",
            Requirement::R8 => "R8",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Requirement::R1 => "The data environment construct",
            Requirement::R2 => "Data environments within data environments",
            Requirement::R3 => "Attaching attributes to data environments",
            Requirement::R4 => "Relationships between data environments",
            Requirement::R5 => "Annotation of relational constructs",
            Requirement::R6 => {
                "Representation of agents, data and processes within a data environment"
            }
            Requirement::R7 => "Data governance instruments: contracts",
            Requirement::R8 => "Access and control (direct and indirect)",
        }
    }

    /// The representation feature this requirement exercises.
    pub fn feature(self) -> Feature {
        match self {
            Requirement::R1 => Feature::Construct,
            Requirement::R2 => Feature::Nesting,
            Requirement::R3 => Feature::Attributes,
            Requirement::R4 => Feature::Relationships,
            Requirement::R5 => Feature::Annotation,
            Requirement::R6 => Feature::ElementsWithin,
            Requirement::R7 => Feature::Contracts,
            Requirement::R8 => Feature::AccessControl,
        }
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.code(), self.name())
    }
}

/// Whether `mode` supports `requirement`. A constant truth table.
pub fn check_requirement_support(mode: EncodingMode, requirement: Requirement) -> bool {
    mode.supports(requirement.feature())
}

/// The full 8 × 4 requirement-support matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMatrix;

impl SupportMatrix {
    /// Column order: Bundle, Namespace, Namespaces+, Bundles+.
    pub const MODES: [EncodingMode; 4] = EncodingMode::ALL;

    pub fn cell(requirement: Requirement, mode: EncodingMode) -> bool {
        check_requirement_support(mode, requirement)
    }

    /// All 32 cells, row by row.
    pub fn cells() -> Vec<(Requirement, EncodingMode, bool)> {
        let mut out = Vec::with_capacity(32);
        for requirement in Requirement::ALL {
            for mode in Self::MODES {
                out.push((requirement, mode, Self::cell(requirement, mode)));
            }
        }
        out
    }

    pub fn to_json() -> serde_json::Value {
        let rows: Vec<serde_json::Value> = Requirement::ALL
            .iter()
            .map(|req| {
                let mut row = serde_json::Map::new();
                row.insert("requirement".into(), json!(req.code()));
                row.insert("name".into(), json!(req.name()));
                for mode in Self::MODES {
                    row.insert(mode.name().into(), json!(Self::cell(*req, mode)));
                }
                serde_json::Value::Object(row)
            })
            .collect();
        json!({
            "modes": Self::MODES.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "rows": rows,
        })
    }
}

/// Per-requirement verdict for one document: does the document exercise the
/// requirement, and does its encoding mode support it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequirementAssessment {
    pub requirement: Requirement,
    pub exercised: bool,
    pub supported: bool,
    /// Actionable message when exercised but unsupported.
    pub advice: Option<String>,
}

/// Assesses which requirements a document exercises against what its mode
/// supports. A mismatch names the minimal upgrade mode.
pub fn assess_document(doc: &ProvDocument) -> Vec<RequirementAssessment> {
    Requirement::ALL
        .iter()
        .map(|&requirement| {
            let exercised = match requirement {
                Requirement::R1 => doc.environments().next().is_some(),
                Requirement::R2 => doc.environments().any(|e| e.parent.is_some()),
                Requirement::R3 => doc.environments().any(|e| !e.attributes.is_empty()),
                Requirement::R4 => !doc.env_relations().is_empty(),
                Requirement::R5 => doc.annotations().next().is_some(),
                Requirement::R6 => doc.environments().any(|e| !e.members.is_empty()),
                Requirement::R7 => doc.contracts().next().is_some(),
                Requirement::R8 => !doc.controls().is_empty(),
            };
            let supported = check_requirement_support(doc.mode, requirement);
            let advice = (exercised && !supported).then(|| {
                format!(
                    "{} is exercised but `{}` cannot represent it; use `{}` (or `{}`)",
                    requirement.code(),
                    doc.mode,
                    doc.mode.plus_of_family(),
                    match doc.mode.plus_of_family() {
                        EncodingMode::BundlesPlus => EncodingMode::NamespacesPlus,
                        _ => EncodingMode::BundlesPlus,
                    }
                )
            });
            RequirementAssessment {
                requirement,
                exercised,
                supported,
                advice,
            }
        })
        .collect()
}

pub fn assessment_to_json(assessments: &[RequirementAssessment]) -> serde_json::Value {
    json!(assessments
        .iter()
        .map(|a| json!({
            "requirement": a.requirement.code(),
            "name": a.requirement.name(),
            "exercised": a.exercised,
            "supported": a.supported,
            "advice": a.advice,
        }))
        .collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::{ControlNature, ControlRecord, ControlType, Responsibility};
    use crate::model::{Element, Relation};

    fn q(s: &str) -> QualifiedName {
        s.parse().unwrap()
    }

    fn doc() -> ProvDocument {
        let mut d = ProvDocument::new(EncodingMode::BundlesPlus);
        d.declare_namespace("ex", "http://example.org/t/").unwrap();
        d
    }

    /// Independent brute-force closure used as the oracle for chain results.
    fn brute_force_reachable(
        edges: &[(QualifiedName, QualifiedName)],
        origin: &QualifiedName,
        forward: bool,
    ) -> BTreeSet<QualifiedName> {
        let mut reached = BTreeSet::new();
        reached.insert(origin.clone());
        loop {
            let mut grew = false;
            for (s, t) in edges {
                let (from, to) = if forward { (s, t) } else { (t, s) };
                if reached.contains(from) && reached.insert(to.clone()) {
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        reached
    }

    fn diamond() -> (ProvDocument, Vec<(QualifiedName, QualifiedName)>) {
        // e0 -> a1 -> e1 -> a2 -> e2 and e0 -> a3 -> e2 (two paths)
        let mut d = doc();
        for e in ["ex:e0", "ex:e1", "ex:e2"] {
            d.add_element(Element::entity(q(e))).unwrap();
        }
        for a in ["ex:a1", "ex:a2", "ex:a3"] {
            d.add_element(Element::activity(q(a))).unwrap();
        }
        d.add_relation(Relation::new(RelationKind::Used, q("ex:a1"), q("ex:e0")))
            .unwrap();
        d.add_relation(Relation::new(RelationKind::WasGeneratedBy, q("ex:e1"), q("ex:a1")))
            .unwrap();
        d.add_relation(Relation::new(RelationKind::Used, q("ex:a2"), q("ex:e1")))
            .unwrap();
        d.add_relation(Relation::new(RelationKind::WasGeneratedBy, q("ex:e2"), q("ex:a2")))
            .unwrap();
        d.add_relation(Relation::new(RelationKind::Used, q("ex:a3"), q("ex:e0")))
            .unwrap();
        d.add_relation(Relation::new(RelationKind::WasGeneratedBy, q("ex:e2"), q("ex:a3")))
            .unwrap();
        let edges = flow_edges(&d)
            .into_iter()
            .map(|e| (e.source, e.target))
            .collect();
        (d, edges)
    }

    #[test]
    fn forward_chain_matches_brute_force() {
        let (d, edges) = diamond();
        let result = forward_chain(&d, &q("ex:e0")).unwrap();
        let expected = brute_force_reachable(&edges, &q("ex:e0"), true);
        let got: BTreeSet<QualifiedName> = result.reached.iter().map(|r| r.id.clone()).collect();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn backward_chain_matches_brute_force() {
        let (d, edges) = diamond();
        let result = backward_chain(&d, &q("ex:e2")).unwrap();
        let expected = brute_force_reachable(&edges, &q("ex:e2"), false);
        let got: BTreeSet<QualifiedName> = result.reached.iter().map(|r| r.id.clone()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn chain_from_source_is_singleton_backward() {
        let (d, _) = diamond();
        let result = backward_chain(&d, &q("ex:e0")).unwrap();
        assert_eq!(result.reached.len(), 1);
        assert_eq!(result.reached[0].distance, 0);
    }

    #[test]
    fn chain_from_sink_is_singleton_forward() {
        let (d, _) = diamond();
        let result = forward_chain(&d, &q("ex:e2")).unwrap();
        assert_eq!(result.reached.len(), 1);
    }

    #[test]
    fn chain_duality_on_diamond() {
        let (d, _) = diamond();
        let ids = ["ex:e0", "ex:e1", "ex:e2", "ex:a1", "ex:a2", "ex:a3"];
        for x in ids {
            let fwd = forward_chain(&d, &q(x)).unwrap();
            for y in ids {
                let bwd = backward_chain(&d, &q(y)).unwrap();
                assert_eq!(
                    fwd.reached_ids().contains(&q(y)),
                    bwd.reached_ids().contains(&q(x)),
                    "duality violated for ({x}, {y})"
                );
            }
        }
    }

    #[test]
    fn unknown_node_is_error() {
        let (d, _) = diamond();
        assert!(matches!(
            forward_chain(&d, &q("ex:ghost")),
            Err(QueryError::UnknownNode(_))
        ));
    }

    #[test]
    fn shares_data_with_joins_environment_nodes() {
        let mut d = doc();
        d.create_environment(q("ex:a"), vec![], None).unwrap();
        d.create_environment(q("ex:b"), vec![], None).unwrap();
        d.create_environment(q("ex:c"), vec![], None).unwrap();
        d.relate_environments(EnvRelationKind::SharesDataWith, q("ex:a"), q("ex:b"), vec![])
            .unwrap();
        d.relate_environments(EnvRelationKind::SharesDataWith, q("ex:b"), q("ex:c"), vec![])
            .unwrap();
        let result = forward_chain(&d, &q("ex:a")).unwrap();
        assert_eq!(result.reached.len(), 3);
        let back = backward_chain(&d, &q("ex:c")).unwrap();
        assert_eq!(back.reached.len(), 3);
    }

    #[test]
    fn crossings_and_contracts_collected() {
        let mut d = doc();
        d.create_environment(q("ex:gond"), vec![], None).unwrap();
        d.create_environment(q("ex:nrds"), vec![], None).unwrap();
        d.add_element(Element::entity(q("ex:extract"))).unwrap();
        d.add_element(Element::activity(q("ex:ingest"))).unwrap();
        d.assign_to_environment(&q("ex:extract"), &q("ex:gond")).unwrap();
        d.assign_to_environment(&q("ex:ingest"), &q("ex:nrds")).unwrap();
        d.add_relation(
            Relation::new(RelationKind::Used, q("ex:ingest"), q("ex:extract"))
                .with_id(q("ex:flow1")),
        )
        .unwrap();
        d.record_contract(q("ex:c1"), vec![q("ex:gond"), q("ex:nrds")], vec![])
            .unwrap();
        d.link_contract_flow(&q("ex:c1"), &q("ex:flow1")).unwrap();
        let result = backward_chain(&d, &q("ex:ingest")).unwrap();
        assert_eq!(result.crossings.len(), 1);
        assert_eq!(result.contracts, vec![q("ex:c1")]);
        let crossing = &result.crossings[0];
        assert_eq!(crossing.from, Some(q("ex:gond")));
        assert_eq!(crossing.to, Some(q("ex:nrds")));
        assert_eq!(crossing.contracts, vec![q("ex:c1")]);
    }

    #[test]
    fn controllers_include_ancestors_as_transitive() {
        let mut d = doc();
        d.create_environment(q("ex:bu"), vec![], None).unwrap();
        d.create_environment(q("ex:nrds"), vec![], Some(q("ex:bu"))).unwrap();
        d.create_environment(q("ex:gond"), vec![], None).unwrap();
        d.record_control(ControlRecord {
            holder: q("ex:gond"),
            target: q("ex:bu"),
            control_type: ControlType::Indirect,
            control_nature: ControlNature::Strategic,
            responsibility: Responsibility::Indirect,
        })
        .unwrap();
        let direct = controllers_of(&d, &q("ex:bu")).unwrap();
        assert_eq!(direct.len(), 1);
        assert!(!direct[0].transitive);
        let inherited = controllers_of(&d, &q("ex:nrds")).unwrap();
        assert_eq!(inherited.len(), 1);
        assert!(inherited[0].transitive);
    }

    #[test]
    fn controllers_of_unrecorded_environment_is_empty() {
        let mut d = doc();
        d.create_environment(q("ex:solo"), vec![], None).unwrap();
        assert!(controllers_of(&d, &q("ex:solo")).unwrap().is_empty());
        assert!(matches!(
            controllers_of(&d, &q("ex:ghost")),
            Err(QueryError::UnknownEnvironment(_))
        ));
    }

    #[test]
    fn support_matrix_spot_checks() {
        assert!(!check_requirement_support(EncodingMode::Bundle, Requirement::R2));
        assert!(!check_requirement_support(EncodingMode::Namespace, Requirement::R4));
        assert!(check_requirement_support(EncodingMode::BundlesPlus, Requirement::R7));
        assert!(check_requirement_support(EncodingMode::Bundle, Requirement::R4));
        assert!(check_requirement_support(EncodingMode::Namespace, Requirement::R2));
        for mode in EncodingMode::ALL {
            assert!(check_requirement_support(mode, Requirement::R1));
            assert!(check_requirement_support(mode, Requirement::R6));
            assert!(check_requirement_support(mode, Requirement::R8));
        }
    }

    #[test]
    fn assess_monotone_in_mode_upgrade() {
        let mut d = doc();
        d.create_environment(q("ex:a"), vec![], None).unwrap();
        d.create_environment(q("ex:b"), vec![], Some(q("ex:a"))).unwrap();
        let before = assess_document(&d);
        let mut upgraded = d.clone();
        upgraded.mode = EncodingMode::BundlesPlus;
        let after = assess_document(&upgraded);
        for (b, a) in before.iter().zip(after.iter()) {
            if b.supported {
                assert!(a.supported, "{} regressed", b.requirement);
            }
        }
    }

    #[test]
    fn assess_names_upgrade_mode_for_gaps() {
        let mut d = doc();
        d.create_environment(q("ex:a"), vec![], None).unwrap();
        d.create_environment(q("ex:b"), vec![], Some(q("ex:a"))).unwrap();
        d.mode = EncodingMode::Bundle; // force the gap
        let assessments = assess_document(&d);
        let r2 = assessments
            .iter()
            .find(|a| a.requirement == Requirement::R2)
            .unwrap();
        assert!(r2.exercised);
        assert!(!r2.supported);
        assert!(r2.advice.as_ref().unwrap().contains("bundles+"));
    }
}
