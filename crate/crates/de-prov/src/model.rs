//! Core provenance model: qualified names, namespaces, attributes, elements,
//! relations and the document that holds them.
//!
//! Documents are plain values. Mutating operations take `&mut self` on an
//! exclusively held document and completed documents are freely shareable
//! across threads; there is no interior mutability anywhere in the model.
//!
//! Statement collections are insertion-ordered so serialization can be
//! deterministic, but [`ProvDocument`] equality is structural and ignores
//! both statement order and attribute order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, FixedOffset};
use indexmap::IndexMap;

use crate::environment::{
    Contract, ControlRecord, DataEnvironment, EncodingMode, EnvironmentRelation,
};

/// Namespace URI bound to the reserved `xsd` prefix.
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
/// Namespace URI bound to the reserved `prov` prefix.
pub const PROV_NS: &str = "http://www.w3.org/ns/prov#";
/// Namespace URI for the `de:` data-environment extension vocabulary.
pub const DE_NS: &str = "http://example.org/de-prov/ns#";
/// Conventional prefix for the extension vocabulary.
pub const DE_PREFIX: &str = "de";

/// Errors raised by core-model operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("prefix `{prefix}` is already bound to <{existing}>, cannot rebind to <{requested}>")]
    PrefixConflict {
        prefix: String,
        existing: String,
        requested: String,
    },
    #[error("prefix `{0}` is not declared in the document")]
    UndeclaredPrefix(String),
    #[error("id `{0}` is already bound to a different {1} statement")]
    DuplicateId(QualifiedName, ElementKind),
    #[error("`{0}` is not a known relation kind")]
    UnknownRelationKind(String),
    #[error("invalid qualified name `{0}`")]
    InvalidQualifiedName(String),
    #[error("namespace uri `{0}` is not absolute")]
    UriNotAbsolute(String),
    #[error("activity `{0}` has startTime after endTime")]
    InvertedTimes(QualifiedName),
}

fn is_valid_prefix(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn is_valid_local(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// A prefix-scoped identifier, resolvable to a URI against the enclosing
/// document's namespace table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QualifiedName {
    prefix: String,
    local: String,
}

impl QualifiedName {
    /// Builds a qualified name, validating both tokens. The local part must be
    /// non-empty and free of whitespace and separators.
    pub fn new(prefix: &str, local: &str) -> Result<Self, ModelError> {
        if !is_valid_prefix(prefix) || !is_valid_local(local) {
            return Err(ModelError::InvalidQualifiedName(format!(
                "{prefix}:{local}"
            )));
        }
        Ok(Self {
            prefix: prefix.to_owned(),
            local: local.to_owned(),
        })
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn local(&self) -> &str {
        &self.local
    }

    /// Resolves the name to a full URI against a namespace table.
    pub fn resolve(&self, namespaces: &NamespaceTable) -> Result<String, ModelError> {
        let base = namespaces
            .uri_for(&self.prefix)
            .ok_or_else(|| ModelError::UndeclaredPrefix(self.prefix.clone()))?;
        Ok(format!("{base}{}", self.local))
    }
}

impl fmt::Display for QualifiedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.prefix, self.local)
    }
}

impl FromStr for QualifiedName {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (prefix, local) = s
            .split_once(':')
            .ok_or_else(|| ModelError::InvalidQualifiedName(s.to_owned()))?;
        Self::new(prefix, local)
    }
}

/// A prefix → URI binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamespaceDeclaration {
    pub prefix: String,
    pub uri: String,
}

/// Injective prefix → URI table. `xsd` and `prov` resolve without declaration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NamespaceTable {
    bindings: IndexMap<String, String>,
}

impl NamespaceTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares `prefix` → `uri`. Redeclaring the identical pair is a no-op.
    pub fn declare(&mut self, prefix: &str, uri: &str) -> Result<(), ModelError> {
        if !uri.contains("://") && !uri.starts_with("urn:") {
            return Err(ModelError::UriNotAbsolute(uri.to_owned()));
        }
        if !is_valid_prefix(prefix) {
            return Err(ModelError::InvalidQualifiedName(format!("{prefix}:")));
        }
        match self.bindings.get(prefix) {
            Some(existing) if existing == uri => Ok(()),
            Some(existing) => Err(ModelError::PrefixConflict {
                prefix: prefix.to_owned(),
                existing: existing.clone(),
                requested: uri.to_owned(),
            }),
            None => {
                self.bindings.insert(prefix.to_owned(), uri.to_owned());
                Ok(())
            }
        }
    }

    /// Looks up the URI bound to `prefix`, falling back to the built-in
    /// `xsd` / `prov` bindings.
    pub fn uri_for(&self, prefix: &str) -> Option<&str> {
        self.bindings.get(prefix).map(String::as_str).or(match prefix {
            "xsd" => Some(XSD_NS),
            "prov" => Some(PROV_NS),
            _ => None,
        })
    }

    pub fn contains(&self, prefix: &str) -> bool {
        self.uri_for(prefix).is_some()
    }

    /// Declared bindings in insertion order (built-ins excluded).
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(p, u)| (p.as_str(), u.as_str()))
    }

    /// Declared bindings sorted by prefix, for canonical output.
    pub fn sorted(&self) -> Vec<(&str, &str)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort();
        v
    }

    /// The table as declaration rows, sorted by prefix.
    pub fn declarations(&self) -> Vec<NamespaceDeclaration> {
        self.sorted()
            .into_iter()
            .map(|(prefix, uri)| NamespaceDeclaration {
                prefix: prefix.to_owned(),
                uri: uri.to_owned(),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

/// An attribute value: string, integer or qualified name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttrValue {
    Str(String),
    Int(i64),
    Qname(QualifiedName),
}

impl AttrValue {
    pub fn as_str(&self) -> Option<&str> {
        match self {
            AttrValue::Str(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Str(s) => write!(f, "{s:?}"),
            AttrValue::Int(i) => write!(f, "{i}"),
            AttrValue::Qname(q) => write!(f, "'{q}'"),
        }
    }
}

impl From<&str> for AttrValue {
    fn from(s: &str) -> Self {
        AttrValue::Str(s.to_owned())
    }
}

impl From<i64> for AttrValue {
    fn from(i: i64) -> Self {
        AttrValue::Int(i)
    }
}

/// A keyed attribute. Keys are qualified names resolving against the
/// document's namespace table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Attribute {
    pub key: QualifiedName,
    pub value: AttrValue,
}

impl Attribute {
    pub fn new(key: QualifiedName, value: impl Into<AttrValue>) -> Self {
        Self {
            key,
            value: value.into(),
        }
    }
}

/// Sorts an attribute list into its canonical (key, value) order.
pub fn canonical_attrs(attrs: &[Attribute]) -> Vec<&Attribute> {
    let mut v: Vec<&Attribute> = attrs.iter().collect();
    v.sort();
    v
}

/// Collapses duplicate keys keeping the latest value, then sorts. Used for
/// the descriptor-like attribute lists where last write wins.
pub(crate) fn dedup_attrs_last_wins(attrs: Vec<Attribute>) -> Vec<Attribute> {
    let mut out: Vec<Attribute> = Vec::with_capacity(attrs.len());
    for attr in attrs {
        if let Some(existing) = out.iter_mut().find(|a| a.key == attr.key) {
            existing.value = attr.value;
        } else {
            out.push(attr);
        }
    }
    out.sort();
    out
}

fn attrs_equal(a: &[Attribute], b: &[Attribute]) -> bool {
    canonical_attrs(a) == canonical_attrs(b)
}

/// The three PROV element kinds carried by this model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    Entity,
    Activity,
    Agent,
}

impl ElementKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::Entity => "entity",
            ElementKind::Activity => "activity",
            ElementKind::Agent => "agent",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for ElementKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "entity" => Ok(ElementKind::Entity),
            "activity" => Ok(ElementKind::Activity),
            "agent" => Ok(ElementKind::Agent),
            other => Err(ModelError::UnknownRelationKind(other.to_owned())),
        }
    }
}

/// Timestamp used for activity start/end times.
pub type Timestamp = DateTime<FixedOffset>;

/// An identified entity, activity or agent.
#[derive(Debug, Clone, Eq)]
pub struct Element {
    pub id: QualifiedName,
    pub kind: ElementKind,
    pub attributes: Vec<Attribute>,
    /// Only meaningful for activities.
    pub start_time: Option<Timestamp>,
    pub end_time: Option<Timestamp>,
}

impl Element {
    pub fn new(kind: ElementKind, id: QualifiedName) -> Self {
        Self {
            id,
            kind,
            attributes: Vec::new(),
            start_time: None,
            end_time: None,
        }
    }

    pub fn entity(id: QualifiedName) -> Self {
        Self::new(ElementKind::Entity, id)
    }

    pub fn activity(id: QualifiedName) -> Self {
        Self::new(ElementKind::Activity, id)
    }

    pub fn agent(id: QualifiedName) -> Self {
        Self::new(ElementKind::Agent, id)
    }

    pub fn with_attr(mut self, key: QualifiedName, value: impl Into<AttrValue>) -> Self {
        self.attributes.push(Attribute::new(key, value));
        self
    }

    pub fn with_times(mut self, start: Option<Timestamp>, end: Option<Timestamp>) -> Self {
        self.start_time = start;
        self.end_time = end;
        self
    }

    /// First value bound to `key`, if any.
    pub fn attr(&self, key: &QualifiedName) -> Option<&AttrValue> {
        self.attributes
            .iter()
            .find(|a| &a.key == key)
            .map(|a| &a.value)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.kind == other.kind
            && self.start_time == other.start_time
            && self.end_time == other.end_time
            && attrs_equal(&self.attributes, &other.attributes)
    }
}

/// The seven core PROV relation kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    WasGeneratedBy,
    Used,
    WasInformedBy,
    WasAssociatedWith,
    ActedOnBehalfOf,
    WasDerivedFrom,
    WasAttributedTo,
}

impl RelationKind {
    pub const ALL: [RelationKind; 7] = [
        RelationKind::WasGeneratedBy,
        RelationKind::Used,
        RelationKind::WasInformedBy,
        RelationKind::WasAssociatedWith,
        RelationKind::ActedOnBehalfOf,
        RelationKind::WasDerivedFrom,
        RelationKind::WasAttributedTo,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            RelationKind::WasGeneratedBy => "wasGeneratedBy",
            RelationKind::Used => "used",
            RelationKind::WasInformedBy => "wasInformedBy",
            RelationKind::WasAssociatedWith => "wasAssociatedWith",
            RelationKind::ActedOnBehalfOf => "actedOnBehalfOf",
            RelationKind::WasDerivedFrom => "wasDerivedFrom",
            RelationKind::WasAttributedTo => "wasAttributedTo",
        }
    }

    /// (subject kind, object kind) demanded by the relation's signature.
    pub fn signature(self) -> (ElementKind, ElementKind) {
        match self {
            RelationKind::WasGeneratedBy => (ElementKind::Entity, ElementKind::Activity),
            RelationKind::Used => (ElementKind::Activity, ElementKind::Entity),
            RelationKind::WasInformedBy => (ElementKind::Activity, ElementKind::Activity),
            RelationKind::WasAssociatedWith => (ElementKind::Activity, ElementKind::Agent),
            RelationKind::ActedOnBehalfOf => (ElementKind::Agent, ElementKind::Agent),
            RelationKind::WasDerivedFrom => (ElementKind::Entity, ElementKind::Entity),
            RelationKind::WasAttributedTo => (ElementKind::Entity, ElementKind::Agent),
        }
    }

    /// Whether this kind carries data flow for chaining purposes.
    /// Association and delegation link agents, not data.
    pub fn is_flow(self) -> bool {
        matches!(
            self,
            RelationKind::WasGeneratedBy
                | RelationKind::Used
                | RelationKind::WasInformedBy
                | RelationKind::WasDerivedFrom
        )
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for RelationKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationKind::ALL
            .into_iter()
            .find(|k| k.keyword() == s)
            .ok_or_else(|| ModelError::UnknownRelationKind(s.to_owned()))
    }
}

/// A typed, attributed edge between identified elements.
///
/// Endpoint ids may dangle at insertion time; inference introduces
/// placeholder elements for them before the constraints run.
#[derive(Debug, Clone, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub subject: QualifiedName,
    pub object: QualifiedName,
    pub attributes: Vec<Attribute>,
    pub id: Option<QualifiedName>,
}

impl Relation {
    pub fn new(kind: RelationKind, subject: QualifiedName, object: QualifiedName) -> Self {
        Self {
            kind,
            subject,
            object,
            attributes: Vec::new(),
            id: None,
        }
    }

    pub fn with_id(mut self, id: QualifiedName) -> Self {
        self.id = Some(id);
        self
    }

    pub fn with_attr(mut self, key: QualifiedName, value: impl Into<AttrValue>) -> Self {
        self.attributes.push(Attribute::new(key, value));
        self
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.subject == other.subject
            && self.object == other.object
            && self.id == other.id
            && attrs_equal(&self.attributes, &other.attributes)
    }
}

/// A provenance document: namespace table, element and relation statements,
/// plus the data-environment extension state (see [`crate::environment`]).
#[derive(Debug, Clone)]
pub struct ProvDocument {
    pub mode: EncodingMode,
    pub namespaces: NamespaceTable,
    pub(crate) elements: Vec<Element>,
    pub(crate) relations: Vec<Relation>,
    pub(crate) environments: IndexMap<QualifiedName, DataEnvironment>,
    pub(crate) env_relations: Vec<EnvironmentRelation>,
    pub(crate) contracts: IndexMap<QualifiedName, Contract>,
    pub(crate) controls: Vec<ControlRecord>,
    pub(crate) annotations: IndexMap<QualifiedName, Vec<Attribute>>,
    /// Base URI from which environment URIs are synthesized; only used by the
    /// namespace-family modes.
    pub(crate) environment_base: Option<String>,
}

/// Default base URI for environment paths in the namespace-family modes.
pub const DEFAULT_ENVIRONMENT_BASE: &str = "http://global-env.com/";

impl ProvDocument {
    /// Creates an empty document in the given encoding mode.
    pub fn new(mode: EncodingMode) -> Self {
        Self {
            mode,
            namespaces: NamespaceTable::new(),
            elements: Vec::new(),
            relations: Vec::new(),
            environments: IndexMap::new(),
            env_relations: Vec::new(),
            contracts: IndexMap::new(),
            controls: Vec::new(),
            annotations: IndexMap::new(),
            environment_base: if mode.is_namespace_family() {
                Some(DEFAULT_ENVIRONMENT_BASE.to_owned())
            } else {
                None
            },
        }
    }

    /// Declares a namespace; redeclaring the identical pair is a no-op.
    pub fn declare_namespace(&mut self, prefix: &str, uri: &str) -> Result<(), ModelError> {
        self.namespaces.declare(prefix, uri)
    }

    /// Overrides the base URI used to synthesize environment paths.
    /// Only meaningful in the namespace-family modes.
    pub fn set_environment_base(&mut self, base: &str) -> Result<(), ModelError> {
        if !base.contains("://") {
            return Err(ModelError::UriNotAbsolute(base.to_owned()));
        }
        let mut base = base.to_owned();
        if !base.ends_with('/') {
            base.push('/');
        }
        if self.mode.is_namespace_family() {
            self.environment_base = Some(base);
        }
        Ok(())
    }

    pub fn environment_base(&self) -> Option<&str> {
        self.environment_base.as_deref()
    }

    fn check_resolvable(&self, q: &QualifiedName) -> Result<(), ModelError> {
        if self.namespaces.contains(q.prefix()) {
            Ok(())
        } else {
            Err(ModelError::UndeclaredPrefix(q.prefix().to_owned()))
        }
    }

    pub(crate) fn check_attrs_resolvable(&self, attrs: &[Attribute]) -> Result<(), ModelError> {
        for a in attrs {
            self.check_resolvable(&a.key)?;
            if let AttrValue::Qname(q) = &a.value {
                self.check_resolvable(q)?;
            }
        }
        Ok(())
    }

    /// Adds an element statement. Identical re-insertion is idempotent;
    /// a conflicting statement for the same (kind, id) is an error.
    pub fn add_element(&mut self, element: Element) -> Result<(), ModelError> {
        self.check_resolvable(&element.id)?;
        self.check_attrs_resolvable(&element.attributes)?;
        if let (Some(s), Some(e)) = (element.start_time, element.end_time) {
            if s > e {
                return Err(ModelError::InvertedTimes(element.id.clone()));
            }
        }
        for existing in &self.elements {
            if existing.id == element.id && existing.kind == element.kind {
                return if existing == &element {
                    Ok(())
                } else {
                    Err(ModelError::DuplicateId(element.id.clone(), element.kind))
                };
            }
        }
        self.elements.push(element);
        Ok(())
    }

    /// Inserts an element without idempotence or conflict checks. Exists for
    /// loaders and fault-injection; regular construction goes through
    /// [`Self::add_element`].
    pub fn push_element_unchecked(&mut self, element: Element) {
        self.elements.push(element);
    }

    /// Adds a relation statement. Endpoint ids may be unresolved at insertion
    /// (inference introduces placeholders later); prefixes must be declared.
    pub fn add_relation(&mut self, relation: Relation) -> Result<(), ModelError> {
        self.check_resolvable(&relation.subject)?;
        self.check_resolvable(&relation.object)?;
        if let Some(id) = &relation.id {
            self.check_resolvable(id)?;
        }
        self.check_attrs_resolvable(&relation.attributes)?;
        if !self.relations.contains(&relation) {
            self.relations.push(relation);
        }
        Ok(())
    }

    pub fn push_relation_unchecked(&mut self, relation: Relation) {
        self.relations.push(relation);
    }

    /// Finds an element by id. When the same id is bound to several kinds the
    /// first inserted statement wins; use [`Self::lookup_kind`] to be precise.
    pub fn lookup(&self, id: &QualifiedName) -> Option<&Element> {
        self.elements.iter().find(|e| &e.id == id)
    }

    pub fn lookup_kind(&self, kind: ElementKind, id: &QualifiedName) -> Option<&Element> {
        self.elements.iter().find(|e| &e.id == id && e.kind == kind)
    }

    /// All kinds the id is declared with.
    pub fn kinds_of(&self, id: &QualifiedName) -> Vec<ElementKind> {
        let mut kinds: Vec<ElementKind> = self
            .elements
            .iter()
            .filter(|e| &e.id == id)
            .map(|e| e.kind)
            .collect();
        kinds.sort();
        kinds.dedup();
        kinds
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation_by_id(&self, id: &QualifiedName) -> Option<&Relation> {
        self.relations.iter().find(|r| r.id.as_ref() == Some(id))
    }

    pub fn environments(&self) -> impl Iterator<Item = &DataEnvironment> {
        self.environments.values()
    }

    pub fn environment(&self, id: &QualifiedName) -> Option<&DataEnvironment> {
        self.environments.get(id)
    }

    pub fn env_relations(&self) -> &[EnvironmentRelation] {
        &self.env_relations
    }

    pub fn contracts(&self) -> impl Iterator<Item = &Contract> {
        self.contracts.values()
    }

    pub fn contract(&self, id: &QualifiedName) -> Option<&Contract> {
        self.contracts.get(id)
    }

    pub fn controls(&self) -> &[ControlRecord] {
        &self.controls
    }

    pub fn annotations(&self) -> impl Iterator<Item = (&QualifiedName, &[Attribute])> {
        self.annotations.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn annotation(&self, relation_id: &QualifiedName) -> Option<&[Attribute]> {
        self.annotations.get(relation_id).map(Vec::as_slice)
    }

    /// The environment an element id is a member of, if any.
    pub fn environment_of(&self, element_id: &QualifiedName) -> Option<&QualifiedName> {
        self.environments
            .values()
            .find(|env| env.members.contains(element_id))
            .map(|env| &env.id)
    }

    /// Root environments sorted by id.
    pub fn environment_roots(&self) -> Vec<&DataEnvironment> {
        let mut roots: Vec<_> = self
            .environments
            .values()
            .filter(|e| e.parent.is_none())
            .collect();
        roots.sort_by(|a, b| a.id.cmp(&b.id));
        roots
    }

    /// Children of an environment sorted by id.
    pub fn environment_children(&self, id: &QualifiedName) -> Vec<&DataEnvironment> {
        let mut children: Vec<_> = self
            .environments
            .values()
            .filter(|e| e.parent.as_ref() == Some(id))
            .collect();
        children.sort_by(|a, b| a.id.cmp(&b.id));
        children
    }

    /// Walks parent links from `id` upward (excluding `id` itself). Stops on
    /// unknown parents or after a full lap, so it terminates on cyclic input.
    pub fn environment_ancestors(&self, id: &QualifiedName) -> Vec<&QualifiedName> {
        let mut out = Vec::new();
        let mut current = self.environments.get(id).and_then(|e| e.parent.as_ref());
        while let Some(p) = current {
            if out.contains(&p) || out.len() > self.environments.len() {
                break;
            }
            out.push(p);
            current = self.environments.get(p).and_then(|e| e.parent.as_ref());
        }
        out
    }

    fn multiset<'a, T: Ord + 'a>(items: impl Iterator<Item = &'a T>) -> Vec<&'a T> {
        let mut v: Vec<&T> = items.collect();
        v.sort();
        v
    }
}

impl PartialEq for ProvDocument {
    fn eq(&self, other: &Self) -> bool {
        fn element_key(e: &Element) -> (ElementKind, &QualifiedName, Vec<&Attribute>, Option<Timestamp>, Option<Timestamp>) {
            (e.kind, &e.id, canonical_attrs(&e.attributes), e.start_time, e.end_time)
        }
        fn relation_key(
            r: &Relation,
        ) -> (
            RelationKind,
            &QualifiedName,
            &QualifiedName,
            &Option<QualifiedName>,
            Vec<&Attribute>,
        ) {
            (r.kind, &r.subject, &r.object, &r.id, canonical_attrs(&r.attributes))
        }
        let mut sa: Vec<_> = self.elements.iter().map(element_key).collect();
        let mut sb: Vec<_> = other.elements.iter().map(element_key).collect();
        sa.sort();
        sb.sort();
        if sa != sb {
            return false;
        }
        let mut ra: Vec<_> = self.relations.iter().map(relation_key).collect();
        let mut rb: Vec<_> = other.relations.iter().map(relation_key).collect();
        ra.sort();
        rb.sort();
        if ra != rb {
            return false;
        }
        let envs_a: BTreeMap<_, _> = self.environments.iter().collect();
        let envs_b: BTreeMap<_, _> = other.environments.iter().collect();
        let contracts_a: BTreeMap<_, _> = self.contracts.iter().collect();
        let contracts_b: BTreeMap<_, _> = other.contracts.iter().collect();
        let ann_a: BTreeMap<_, Vec<&Attribute>> = self
            .annotations
            .iter()
            .map(|(k, v)| (k, canonical_attrs(v)))
            .collect();
        let ann_b: BTreeMap<_, Vec<&Attribute>> = other
            .annotations
            .iter()
            .map(|(k, v)| (k, canonical_attrs(v)))
            .collect();
        self.mode == other.mode
            && self.namespaces == other.namespaces
            && envs_a == envs_b
            && Self::multiset(self.env_relations.iter()) == Self::multiset(other.env_relations.iter())
            && contracts_a == contracts_b
            && Self::multiset(self.controls.iter()) == Self::multiset(other.controls.iter())
            && ann_a == ann_b
            && self.environment_base == other.environment_base
    }
}

impl Eq for ProvDocument {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::EncodingMode;

    fn q(s: &str) -> QualifiedName {
        s.parse().unwrap()
    }

    fn doc_with_ns() -> ProvDocument {
        let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
        doc.declare_namespace("gond", "http://global-env.com/gond/")
            .unwrap();
        doc.declare_namespace(DE_PREFIX, DE_NS).unwrap();
        doc
    }

    #[test]
    fn new_document_is_empty() {
        let doc = ProvDocument::new(EncodingMode::BundlesPlus);
        assert_eq!(doc.elements().len(), 0);
        assert_eq!(doc.relations().len(), 0);
        assert!(doc.namespaces.is_empty());
    }

    #[test]
    fn declare_namespace_binds_and_is_idempotent() {
        let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
        doc.declare_namespace("gond", "http://global-env.com/gond/")
            .unwrap();
        doc.declare_namespace("gond", "http://global-env.com/gond/")
            .unwrap();
        assert_eq!(
            doc.namespaces.uri_for("gond"),
            Some("http://global-env.com/gond/")
        );
        assert_eq!(doc.namespaces.len(), 1);
    }

    #[test]
    fn redeclare_with_different_uri_is_prefix_conflict() {
        let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
        doc.declare_namespace("gond", "http://global-env.com/gond/")
            .unwrap();
        let err = doc
            .declare_namespace("gond", "http://elsewhere.example/")
            .unwrap_err();
        assert!(matches!(err, ModelError::PrefixConflict { .. }));
    }

    #[test]
    fn relative_uri_rejected() {
        let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
        let err = doc.declare_namespace("x", "relative/path/").unwrap_err();
        assert!(matches!(err, ModelError::UriNotAbsolute(_)));
    }

    #[test]
    fn add_element_and_lookup() {
        let mut doc = doc_with_ns();
        let e = Element::entity(q("gond:entity_001"));
        doc.add_element(e.clone()).unwrap();
        assert_eq!(doc.lookup(&q("gond:entity_001")), Some(&e));
    }

    #[test]
    fn add_element_twice_stores_one_copy() {
        let mut doc = doc_with_ns();
        let e = Element::entity(q("gond:entity_001")).with_attr(q("de:note"), "x");
        doc.add_element(e.clone()).unwrap();
        doc.add_element(e).unwrap();
        assert_eq!(doc.elements().len(), 1);
    }

    #[test]
    fn conflicting_duplicate_is_error() {
        let mut doc = doc_with_ns();
        doc.add_element(Element::entity(q("gond:entity_001")).with_attr(q("de:note"), "a"))
            .unwrap();
        let err = doc
            .add_element(Element::entity(q("gond:entity_001")).with_attr(q("de:note"), "b"))
            .unwrap_err();
        assert!(matches!(err, ModelError::DuplicateId(_, _)));
    }

    #[test]
    fn same_id_different_kind_allowed_at_insertion() {
        let mut doc = doc_with_ns();
        doc.add_element(Element::entity(q("gond:x"))).unwrap();
        doc.add_element(Element::agent(q("gond:x"))).unwrap();
        assert_eq!(doc.kinds_of(&q("gond:x")), vec![ElementKind::Entity, ElementKind::Agent]);
    }

    #[test]
    fn add_relation_allows_dangling_endpoints() {
        let mut doc = doc_with_ns();
        doc.add_relation(Relation::new(
            RelationKind::Used,
            q("gond:process_t1"),
            q("gond:raw_census"),
        ))
        .unwrap();
        assert_eq!(doc.relations().len(), 1);
        assert!(doc.lookup(&q("gond:raw_census")).is_none());
    }

    #[test]
    fn add_relation_rejects_undeclared_prefix() {
        let mut doc = doc_with_ns();
        let err = doc
            .add_relation(Relation::new(
                RelationKind::Used,
                q("nowhere:a"),
                q("gond:b"),
            ))
            .unwrap_err();
        assert!(matches!(err, ModelError::UndeclaredPrefix(_)));
    }

    #[test]
    fn relation_insertion_is_idempotent() {
        let mut doc = doc_with_ns();
        let r = Relation::new(RelationKind::Used, q("gond:a"), q("gond:b"));
        doc.add_relation(r.clone()).unwrap();
        doc.add_relation(r).unwrap();
        assert_eq!(doc.relations().len(), 1);
    }

    #[test]
    fn unknown_relation_kind_from_str() {
        let err = "wasInfromed".parse::<RelationKind>().unwrap_err();
        assert!(matches!(err, ModelError::UnknownRelationKind(_)));
    }

    #[test]
    fn lookup_on_empty_is_absent() {
        let doc = ProvDocument::new(EncodingMode::Bundle);
        assert!(doc.lookup(&q("gond:x")).is_none());
    }

    #[test]
    fn document_equality_ignores_insertion_order() {
        let mut a = doc_with_ns();
        let mut b = doc_with_ns();
        let e1 = Element::entity(q("gond:e1"));
        let e2 = Element::activity(q("gond:a1"));
        a.add_element(e1.clone()).unwrap();
        a.add_element(e2.clone()).unwrap();
        b.add_element(e2).unwrap();
        b.add_element(e1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn attribute_order_does_not_affect_equality() {
        let mut a = doc_with_ns();
        let mut b = doc_with_ns();
        a.add_element(
            Element::entity(q("gond:e"))
                .with_attr(q("de:x"), "1")
                .with_attr(q("de:y"), "2"),
        )
        .unwrap();
        b.add_element(
            Element::entity(q("gond:e"))
                .with_attr(q("de:y"), "2")
                .with_attr(q("de:x"), "1"),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn qualified_name_validation() {
        assert!(QualifiedName::new("gond", "entity_001").is_ok());
        assert!(QualifiedName::new("gond", "").is_err());
        assert!(QualifiedName::new("gond", "has space").is_err());
        assert!(QualifiedName::new("9bad", "x").is_err());
    }

    #[test]
    fn qualified_name_resolution() {
        let doc = doc_with_ns();
        let uri = q("gond:entity_001").resolve(&doc.namespaces).unwrap();
        assert_eq!(uri, "http://global-env.com/gond/entity_001");
        assert!(q("nope:x").resolve(&doc.namespaces).is_err());
    }

    #[test]
    fn builtin_prefixes_resolve() {
        let table = NamespaceTable::new();
        assert_eq!(table.uri_for("xsd"), Some(XSD_NS));
        assert_eq!(table.uri_for("prov"), Some(PROV_NS));
    }

    #[test]
    fn documents_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<ProvDocument>();
    }

    #[test]
    fn inverted_activity_times_rejected() {
        let mut doc = doc_with_ns();
        let start: Timestamp = "2024-06-01T00:00:00+00:00".parse().unwrap();
        let end: Timestamp = "2024-01-01T00:00:00+00:00".parse().unwrap();
        let err = doc
            .add_element(Element::activity(q("gond:a")).with_times(Some(start), Some(end)))
            .unwrap_err();
        assert!(matches!(err, ModelError::InvertedTimes(_)));
    }
}
