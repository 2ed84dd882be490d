//! The data-environment construct: attributed, nestable boundaries around
//! provenance statements, in four encodings.
//!
//! The plain `Bundle` and `Namespace` encodings are deliberately thin: they
//! exist so the gated operations can demonstrate, with typed errors, exactly
//! which features each encoding cannot carry. `BundlesPlus` and
//! `NamespacesPlus` support everything.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;

use crate::model::{
    Attribute, AttrValue, Element, ModelError, ProvDocument, QualifiedName,
};

/// How data environments are encoded in a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingMode {
    Bundle,
    BundlesPlus,
    Namespace,
    NamespacesPlus,
}

impl EncodingMode {
    /// The four modes in the support-matrix column order.
    pub const ALL: [EncodingMode; 4] = [
        EncodingMode::Bundle,
        EncodingMode::Namespace,
        EncodingMode::NamespacesPlus,
        EncodingMode::BundlesPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncodingMode::Bundle => "bundle",
            EncodingMode::BundlesPlus => "bundles+",
            EncodingMode::Namespace => "namespace",
            EncodingMode::NamespacesPlus => "namespaces+",
        }
    }

    pub fn is_namespace_family(self) -> bool {
        matches!(self, EncodingMode::Namespace | EncodingMode::NamespacesPlus)
    }

    pub fn is_plus(self) -> bool {
        matches!(self, EncodingMode::BundlesPlus | EncodingMode::NamespacesPlus)
    }

    /// The smallest upgrade of this mode that supports every feature.
    pub fn plus_of_family(self) -> EncodingMode {
        match self {
            EncodingMode::Bundle | EncodingMode::BundlesPlus => EncodingMode::BundlesPlus,
            EncodingMode::Namespace | EncodingMode::NamespacesPlus => EncodingMode::NamespacesPlus,
        }
    }

    /// Whether this encoding supports the given representation feature.
    ///
    /// This is the single truth table behind both the operation gating in
    /// this module and the support matrix in [`crate::reasoning`].
    pub fn supports(self, feature: Feature) -> bool {
        use EncodingMode::*;
        use Feature::*;
        match feature {
            Construct | ElementsWithin | AccessControl => true,
            Nesting => !matches!(self, Bundle),
            Attributes | Annotation | Contracts => self.is_plus(),
            Relationships => !matches!(self, Namespace),
        }
    }
}

impl fmt::Display for EncodingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncodingMode {
    type Err = EnvironmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bundle" => Ok(EncodingMode::Bundle),
            "bundles+" | "bundle+" | "bundlesplus" => Ok(EncodingMode::BundlesPlus),
            "namespace" => Ok(EncodingMode::Namespace),
            "namespaces+" | "namespace+" | "namespacesplus" => Ok(EncodingMode::NamespacesPlus),
            other => Err(EnvironmentError::UnknownMode(other.to_owned())),
        }
    }
}

/// The representation features an encoding may or may not support,
/// one per row of the support matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Feature {
    Construct,
    Nesting,
    Attributes,
    Relationships,
    Annotation,
    ElementsWithin,
    Contracts,
    AccessControl,
}

impl Feature {
    pub const ALL: [Feature; 8] = [
        Feature::Construct,
        Feature::Nesting,
        Feature::Attributes,
        Feature::Relationships,
        Feature::Annotation,
        Feature::ElementsWithin,
        Feature::Contracts,
        Feature::AccessControl,
    ];
}

/// The reserved environment descriptor keys, all in the `de:` extension
/// namespace. Values are free-form strings; further keys are permitted.
pub mod vocabulary {
    use crate::model::{QualifiedName, DE_PREFIX};

    pub const ENV_TYPE: &str = "envType";
    pub const GOVERNANCE_ACCESS_TYPE: &str = "governance-accessType";
    pub const GOVERNANCE_USER_DEFINITION: &str = "governance-userdefinition";
    pub const INFRASTRUCTURE: &str = "infrastructure";
    pub const PURPOSE: &str = "purpose";

    pub const RESERVED: [&str; 5] = [
        ENV_TYPE,
        GOVERNANCE_ACCESS_TYPE,
        GOVERNANCE_USER_DEFINITION,
        INFRASTRUCTURE,
        PURPOSE,
    ];

    /// The qualified key for a vocabulary entry, e.g. `de:envType`.
    pub fn key(local: &str) -> QualifiedName {
        QualifiedName::new(DE_PREFIX, local).expect("vocabulary locals are valid")
    }
}

/// Errors raised by environment-extension operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnvironmentError {
    #[error("encoding mode `{mode}` does not support nested data environments")]
    NestingUnsupported { mode: EncodingMode },
    #[error("encoding mode `{mode}` does not support attributes on data environments")]
    AttributesUnsupported { mode: EncodingMode },
    #[error("encoding mode `{mode}` does not support relationships between data environments")]
    RelationUnsupported { mode: EncodingMode },
    #[error("encoding mode `{mode}` does not support contracts")]
    ContractsUnsupported { mode: EncodingMode },
    #[error("encoding mode `{mode}` does not support relation annotations")]
    AnnotationUnsupported { mode: EncodingMode },
    #[error("environment `{0}` already exists")]
    EnvironmentExists(QualifiedName),
    #[error("environment `{0}` does not exist")]
    UnknownEnvironment(QualifiedName),
    #[error("making `{child}` a child of `{parent}` would create a containment cycle")]
    CycleError {
        child: QualifiedName,
        parent: QualifiedName,
    },
    #[error("environment relation endpoints must differ, got `{0}` twice")]
    SelfRelation(QualifiedName),
    #[error("`containedIn({subject}, {object})` disagrees with the declared parent")]
    ContainmentMismatch {
        subject: QualifiedName,
        object: QualifiedName,
    },
    #[error("a contract needs at least two parties, got {0}")]
    TooFewParties(usize),
    #[error("contract `{0}` already exists")]
    ContractExists(QualifiedName),
    #[error("contract `{0}` does not exist")]
    UnknownContract(QualifiedName),
    #[error("relation `{0}` does not exist or has no id")]
    UnknownRelation(QualifiedName),
    #[error("flow `{flow}` has an endpoint outside the contract parties' environments")]
    FlowOutsideParties { flow: QualifiedName },
    #[error("a control record for ({holder}, {target}) already exists")]
    DuplicateControlRecord {
        holder: QualifiedName,
        target: QualifiedName,
    },
    #[error("control holder and target must differ, got `{0}` twice")]
    SelfControl(QualifiedName),
    #[error("element `{element}` is already a member of `{environment}`")]
    AlreadyAssigned {
        element: QualifiedName,
        environment: QualifiedName,
    },
    #[error("path segment `{0}` is malformed (empty or contains a separator)")]
    MalformedSegment(String),
    #[error("`{0}` is not a valid environment uri")]
    MalformedUri(String),
    #[error("`{0}` is not a known encoding mode")]
    UnknownMode(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// An attributed, possibly nested boundary construct holding elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataEnvironment {
    pub id: QualifiedName,
    /// Path-form URI, ending in `/`. Present in the namespace-family modes.
    pub uri: Option<String>,
    /// Descriptor attributes; duplicate keys overwrite (last write wins).
    pub attributes: Vec<Attribute>,
    pub parent: Option<QualifiedName>,
    pub members: IndexSet<QualifiedName>,
}

impl DataEnvironment {
    pub fn attr(&self, key: &QualifiedName) -> Option<&AttrValue> {
        self.attributes
            .iter()
            .find(|a| &a.key == key)
            .map(|a| &a.value)
    }

    // Environment descriptors are map-like: last write wins and the list is
    // kept in canonical key order so structural equality is order-free.
    fn merge_attrs(&mut self, incoming: Vec<Attribute>) {
        for attr in incoming {
            if let Some(existing) = self.attributes.iter_mut().find(|a| a.key == attr.key) {
                existing.value = attr.value;
            } else {
                self.attributes.push(attr);
            }
        }
        self.attributes.sort();
    }
}

/// Relationship kinds between data environments, beyond containment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EnvRelationKind {
    ContainedIn,
    HostedBy,
    OwnedBy,
    ManagedBy,
    SharesDataWith,
}

impl EnvRelationKind {
    pub const ALL: [EnvRelationKind; 5] = [
        EnvRelationKind::ContainedIn,
        EnvRelationKind::HostedBy,
        EnvRelationKind::OwnedBy,
        EnvRelationKind::ManagedBy,
        EnvRelationKind::SharesDataWith,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            EnvRelationKind::ContainedIn => "containedIn",
            EnvRelationKind::HostedBy => "hostedBy",
            EnvRelationKind::OwnedBy => "ownedBy",
            EnvRelationKind::ManagedBy => "managedBy",
            EnvRelationKind::SharesDataWith => "sharesDataWith",
        }
    }
}

impl fmt::Display for EnvRelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for EnvRelationKind {
    type Err = EnvironmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EnvRelationKind::ALL
            .into_iter()
            .find(|k| k.keyword() == s)
            .ok_or_else(|| EnvironmentError::UnknownMode(s.to_owned()))
    }
}

/// A typed, attributed edge between two environments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EnvironmentRelation {
    pub kind: EnvRelationKind,
    pub subject: QualifiedName,
    pub object: QualifiedName,
    pub attributes: Vec<Attribute>,
}

/// A data-sharing agreement between two or more environments, optionally
/// governing identified flow relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contract {
    pub id: QualifiedName,
    pub parties: Vec<QualifiedName>,
    pub terms: Vec<Attribute>,
    pub governs_flows: IndexSet<QualifiedName>,
}

/// Degree of control an organisation holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ControlType {
    Direct,
    Indirect,
}

/// Nature of control an organisation holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ControlNature {
    Strategic,
    Operational,
}

/// Degree of responsibility an organisation carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Responsibility {
    Direct,
    Indirect,
}

macro_rules! lowercase_enum_str {
    ($ty:ident { $($variant:ident => $s:literal),+ $(,)? }) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $($ty::$variant => $s),+ }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $ty {
            type Err = EnvironmentError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($s => Ok($ty::$variant),)+
                    other => Err(EnvironmentError::UnknownMode(other.to_owned())),
                }
            }
        }
    };
}

lowercase_enum_str!(ControlType { Direct => "direct", Indirect => "indirect" });
lowercase_enum_str!(ControlNature { Strategic => "strategic", Operational => "operational" });
lowercase_enum_str!(Responsibility { Direct => "direct", Indirect => "indirect" });

/// A record of who holds access/control authority over an environment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ControlRecord {
    pub holder: QualifiedName,
    pub target: QualifiedName,
    pub control_type: ControlType,
    pub control_nature: ControlNature,
    pub responsibility: Responsibility,
}

/// Joins a path segment onto an environment URI: `parent + segment + "/"`.
pub fn environment_uri(parent_uri: &str, segment: &str) -> Result<String, EnvironmentError> {
    if !parent_uri.ends_with('/') || !parent_uri.contains("://") {
        return Err(EnvironmentError::MalformedUri(parent_uri.to_owned()));
    }
    if segment.is_empty() || segment.contains('/') || segment.contains('#') {
        return Err(EnvironmentError::MalformedSegment(segment.to_owned()));
    }
    Ok(format!("{parent_uri}{segment}/"))
}

/// Splits an environment URI into its path segments, root first.
/// Folding [`environment_uri`] over the result reproduces the input.
pub fn split_environment_path(uri: &str) -> Result<Vec<String>, EnvironmentError> {
    let rest = uri
        .split_once("://")
        .map(|(_, r)| r)
        .ok_or_else(|| EnvironmentError::MalformedUri(uri.to_owned()))?;
    if !uri.ends_with('/') {
        return Err(EnvironmentError::MalformedUri(uri.to_owned()));
    }
    let mut parts = rest.split('/');
    let _authority = parts.next();
    Ok(parts
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect())
}

/// Splits an element URI of the form `<env path><local>#` into the
/// environment path and the element's local name.
pub fn split_element_uri(uri: &str) -> Result<(Vec<String>, String), EnvironmentError> {
    let trimmed = uri
        .strip_suffix('#')
        .ok_or_else(|| EnvironmentError::MalformedUri(uri.to_owned()))?;
    let (env_part, local) = trimmed
        .rsplit_once('/')
        .ok_or_else(|| EnvironmentError::MalformedUri(uri.to_owned()))?;
    if local.is_empty() {
        return Err(EnvironmentError::MalformedUri(uri.to_owned()));
    }
    let path = split_environment_path(&format!("{env_part}/"))?;
    Ok((path, local.to_owned()))
}

impl ProvDocument {
    /// Creates a data environment, optionally nested under `parent`.
    ///
    /// In the namespace-family modes a URI is synthesized from the parent's
    /// path plus the id's local part, and the local part is declared as a
    /// namespace prefix for the environment.
    pub fn create_environment(
        &mut self,
        id: QualifiedName,
        attributes: Vec<Attribute>,
        parent: Option<QualifiedName>,
    ) -> Result<(), EnvironmentError> {
        if parent.is_some() && !self.mode.supports(Feature::Nesting) {
            return Err(EnvironmentError::NestingUnsupported { mode: self.mode });
        }
        if !attributes.is_empty() && !self.mode.supports(Feature::Attributes) {
            return Err(EnvironmentError::AttributesUnsupported { mode: self.mode });
        }
        if self.environments.contains_key(&id) {
            return Err(EnvironmentError::EnvironmentExists(id));
        }
        let parent_uri = match &parent {
            Some(p) => {
                let parent_env = self
                    .environments
                    .get(p)
                    .ok_or_else(|| EnvironmentError::UnknownEnvironment(p.clone()))?;
                if *p == id || self.environment_ancestors(p).contains(&&id) {
                    return Err(EnvironmentError::CycleError {
                        child: id,
                        parent: p.clone(),
                    });
                }
                parent_env.uri.clone()
            }
            None => self.environment_base.clone(),
        };
        self.check_attrs_resolvable(&attributes)?;
        let uri = if self.mode.is_namespace_family() {
            let base = parent_uri.ok_or_else(|| {
                EnvironmentError::MalformedUri("missing environment base uri".to_owned())
            })?;
            let uri = environment_uri(&base, id.local())?;
            self.namespaces.declare(id.local(), &uri)?;
            Some(uri)
        } else {
            None
        };
        let mut env = DataEnvironment {
            id: id.clone(),
            uri,
            attributes: Vec::new(),
            parent,
            members: IndexSet::new(),
        };
        env.merge_attrs(attributes);
        self.environments.insert(id, env);
        Ok(())
    }

    /// Inserts an environment without gating or forest checks.
    /// Exists for loaders and fault injection.
    pub fn push_environment_unchecked(&mut self, env: DataEnvironment) {
        self.environments.insert(env.id.clone(), env);
    }

    /// Merges descriptor attributes into an environment; duplicate keys are
    /// overwritten with the new values.
    pub fn attach_environment_attributes(
        &mut self,
        env_id: &QualifiedName,
        attributes: Vec<Attribute>,
    ) -> Result<(), EnvironmentError> {
        if !attributes.is_empty() && !self.mode.supports(Feature::Attributes) {
            return Err(EnvironmentError::AttributesUnsupported { mode: self.mode });
        }
        self.check_attrs_resolvable(&attributes)?;
        let env = self
            .environments
            .get_mut(env_id)
            .ok_or_else(|| EnvironmentError::UnknownEnvironment(env_id.clone()))?;
        env.merge_attrs(attributes);
        Ok(())
    }

    /// Records a typed relationship between two environments.
    pub fn relate_environments(
        &mut self,
        kind: EnvRelationKind,
        subject: QualifiedName,
        object: QualifiedName,
        attributes: Vec<Attribute>,
    ) -> Result<(), EnvironmentError> {
        if !self.mode.supports(Feature::Relationships) {
            return Err(EnvironmentError::RelationUnsupported { mode: self.mode });
        }
        if subject == object {
            return Err(EnvironmentError::SelfRelation(subject));
        }
        let subject_env = self
            .environments
            .get(&subject)
            .ok_or_else(|| EnvironmentError::UnknownEnvironment(subject.clone()))?;
        if !self.environments.contains_key(&object) {
            return Err(EnvironmentError::UnknownEnvironment(object));
        }
        if kind == EnvRelationKind::ContainedIn && subject_env.parent.as_ref() != Some(&object) {
            return Err(EnvironmentError::ContainmentMismatch { subject, object });
        }
        self.check_attrs_resolvable(&attributes)?;
        let mut attributes = attributes;
        attributes.sort();
        let rel = EnvironmentRelation {
            kind,
            subject,
            object,
            attributes,
        };
        if !self.env_relations.contains(&rel) {
            self.env_relations.push(rel);
        }
        Ok(())
    }

    pub fn push_env_relation_unchecked(&mut self, rel: EnvironmentRelation) {
        self.env_relations.push(rel);
    }

    /// Records a contract between two or more environments. Flows are linked
    /// afterwards with [`Self::link_contract_flow`].
    pub fn record_contract(
        &mut self,
        id: QualifiedName,
        parties: Vec<QualifiedName>,
        terms: Vec<Attribute>,
    ) -> Result<(), EnvironmentError> {
        if !self.mode.supports(Feature::Contracts) {
            return Err(EnvironmentError::ContractsUnsupported { mode: self.mode });
        }
        if parties.len() < 2 {
            return Err(EnvironmentError::TooFewParties(parties.len()));
        }
        for p in &parties {
            if !self.environments.contains_key(p) {
                return Err(EnvironmentError::UnknownEnvironment(p.clone()));
            }
        }
        if self.contracts.contains_key(&id) {
            return Err(EnvironmentError::ContractExists(id));
        }
        self.check_attrs_resolvable(&terms)?;
        let terms = crate::model::dedup_attrs_last_wins(terms);
        self.contracts.insert(
            id.clone(),
            Contract {
                id,
                parties,
                terms,
                governs_flows: IndexSet::new(),
            },
        );
        Ok(())
    }

    pub fn push_contract_unchecked(&mut self, contract: Contract) {
        self.contracts.insert(contract.id.clone(), contract);
    }

    /// Marks an identified flow relation as governed by a contract. Each
    /// endpoint's environment (or an ancestor of it) must be a party.
    pub fn link_contract_flow(
        &mut self,
        contract_id: &QualifiedName,
        relation_id: &QualifiedName,
    ) -> Result<(), EnvironmentError> {
        let relation = self
            .relations
            .iter()
            .find(|r| r.id.as_ref() == Some(relation_id))
            .cloned()
            .ok_or_else(|| EnvironmentError::UnknownRelation(relation_id.clone()))?;
        let parties = self
            .contracts
            .get(contract_id)
            .map(|c| c.parties.clone())
            .ok_or_else(|| EnvironmentError::UnknownContract(contract_id.clone()))?;
        for endpoint in [&relation.subject, &relation.object] {
            let Some(env) = self.environment_of(endpoint).cloned() else {
                return Err(EnvironmentError::FlowOutsideParties {
                    flow: relation_id.clone(),
                });
            };
            let mut lineage = vec![env.clone()];
            lineage.extend(self.environment_ancestors(&env).into_iter().cloned());
            if !lineage.iter().any(|e| parties.contains(e)) {
                return Err(EnvironmentError::FlowOutsideParties {
                    flow: relation_id.clone(),
                });
            }
        }
        let contract = self.contracts.get_mut(contract_id).expect("checked above");
        contract.governs_flows.insert(relation_id.clone());
        Ok(())
    }

    /// Records an access/control authority over an environment.
    pub fn record_control(&mut self, record: ControlRecord) -> Result<(), EnvironmentError> {
        if record.holder == record.target {
            return Err(EnvironmentError::SelfControl(record.holder));
        }
        if !self.environments.contains_key(&record.target) {
            return Err(EnvironmentError::UnknownEnvironment(record.target.clone()));
        }
        // Holder may be an environment or an agent element.
        if !self.environments.contains_key(&record.holder) && self.lookup(&record.holder).is_none()
        {
            return Err(EnvironmentError::UnknownEnvironment(record.holder.clone()));
        }
        if self
            .controls
            .iter()
            .any(|c| c.holder == record.holder && c.target == record.target)
        {
            return Err(EnvironmentError::DuplicateControlRecord {
                holder: record.holder,
                target: record.target,
            });
        }
        self.controls.push(record);
        Ok(())
    }

    pub fn push_control_unchecked(&mut self, record: ControlRecord) {
        self.controls.push(record);
    }

    /// Attaches semantic-meaning attributes to an identified relation;
    /// multiple annotations merge, later keys overwriting earlier ones.
    pub fn annotate_relation(
        &mut self,
        relation_id: &QualifiedName,
        annotation: Vec<Attribute>,
    ) -> Result<(), EnvironmentError> {
        if !self.mode.supports(Feature::Annotation) {
            return Err(EnvironmentError::AnnotationUnsupported { mode: self.mode });
        }
        if self
            .relations
            .iter()
            .all(|r| r.id.as_ref() != Some(relation_id))
        {
            return Err(EnvironmentError::UnknownRelation(relation_id.clone()));
        }
        if annotation.is_empty() {
            return Ok(());
        }
        self.check_attrs_resolvable(&annotation)?;
        let slot = self.annotations.entry(relation_id.clone()).or_default();
        for attr in annotation {
            if let Some(existing) = slot.iter_mut().find(|a| a.key == attr.key) {
                existing.value = attr.value;
            } else {
                slot.push(attr);
            }
        }
        slot.sort();
        Ok(())
    }

    pub fn push_annotation_unchecked(&mut self, relation_id: QualifiedName, attrs: Vec<Attribute>) {
        self.annotations.insert(relation_id, attrs);
    }

    /// Assigns an element to an environment. Every element belongs to at most
    /// one environment.
    pub fn assign_to_environment(
        &mut self,
        element_id: &QualifiedName,
        env_id: &QualifiedName,
    ) -> Result<(), EnvironmentError> {
        if let Some(owner) = self.environment_of(element_id) {
            if owner == env_id {
                return Ok(());
            }
            return Err(EnvironmentError::AlreadyAssigned {
                element: element_id.clone(),
                environment: owner.clone(),
            });
        }
        let env = self
            .environments
            .get_mut(env_id)
            .ok_or_else(|| EnvironmentError::UnknownEnvironment(env_id.clone()))?;
        env.members.insert(element_id.clone());
        Ok(())
    }

    /// Convenience: add an element and make it a member of `env_id`.
    pub fn add_element_in(
        &mut self,
        element: Element,
        env_id: &QualifiedName,
    ) -> Result<(), EnvironmentError> {
        let id = element.id.clone();
        self.add_element(element)?;
        self.assign_to_environment(&id, env_id)
    }
}

/// One environment in an [`AbstractEnvGraph`]: id, canonical attributes,
/// parent, and sorted members.
pub type EnvNode = (QualifiedName, Vec<Attribute>, Option<QualifiedName>, Vec<QualifiedName>);

/// The abstract environment graph induced by a document: everything about its
/// environments except encoding details (URIs, sidecar placement). Two
/// encodings of the same data situation induce equal graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractEnvGraph {
    pub nodes: Vec<EnvNode>,
    /// Non-containment environment relations.
    pub edges: Vec<(EnvRelationKind, QualifiedName, QualifiedName)>,
    pub contracts: Vec<(QualifiedName, Vec<QualifiedName>, Vec<QualifiedName>)>,
    pub controls: Vec<ControlRecord>,
}

impl AbstractEnvGraph {
    pub fn of(doc: &ProvDocument) -> Self {
        let mut nodes: Vec<_> = doc
            .environments()
            .map(|env| {
                let mut attrs: Vec<Attribute> = env.attributes.clone();
                attrs.sort();
                let mut members: Vec<QualifiedName> = env.members.iter().cloned().collect();
                members.sort();
                (env.id.clone(), attrs, env.parent.clone(), members)
            })
            .collect();
        nodes.sort();
        let mut edges: Vec<_> = doc
            .env_relations()
            .iter()
            .filter(|r| r.kind != EnvRelationKind::ContainedIn)
            .map(|r| (r.kind, r.subject.clone(), r.object.clone()))
            .collect();
        edges.sort();
        let mut contracts: Vec<_> = doc
            .contracts()
            .map(|c| {
                let mut parties = c.parties.clone();
                parties.sort();
                let mut flows: Vec<_> = c.governs_flows.iter().cloned().collect();
                flows.sort();
                (c.id.clone(), parties, flows)
            })
            .collect();
        contracts.sort();
        let mut controls = doc.controls().to_vec();
        controls.sort();
        Self {
            nodes,
            edges,
            contracts,
            controls,
        }
    }
}
