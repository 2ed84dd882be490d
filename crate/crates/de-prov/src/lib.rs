//! Data-environment provenance toolkit.
//!
//! Models provenance documents on a W3C PROV-DM subset (entities, activities,
//! agents, the seven core relations) and extends them with an attributed,
//! nestable *data environment* construct in two viable encodings:
//!
//! - **Bundles+** — environments are PROV bundles extended with header
//!   attributes and nesting;
//! - **Namespaces+** — environments are URI path prefixes plus a sidecar
//!   structure carrying attributes, relations, contracts and control records.
//!
//! The two legacy encodings (plain `Bundle`, plain `Namespace`) exist only far
//! enough to demonstrate which features they cannot carry; the gated
//! operations return typed "unsupported" errors for exactly those cells of the
//! support matrix (see [`reasoning::SupportMatrix`]).
//!
//! On top of the model the crate provides:
//!
//! - [`notation`] — a parser and canonical serializers for the extended
//!   textual notation (`.deprovn`), a JSON form, and a flattening export to
//!   strictly standard PROV-N;
//! - [`validation`] — inference closure plus uniqueness / ordering /
//!   impossibility / typing / nesting constraint checks;
//! - [`reasoning`] — forward/backward chaining, controller queries and the
//!   requirement-support checker;
//! - [`render`] — DOT output with environments as nested clusters;
//! - [`fixtures`] — the two shipped example documents, generated
//!   programmatically in any encoding mode.

pub mod cli;
pub mod environment;
pub mod fixtures;
pub mod model;
pub mod notation;
pub mod reasoning;
pub mod render;
pub mod validation;

pub use environment::{
    Contract, ControlNature, ControlRecord, ControlType, DataEnvironment, EncodingMode,
    EnvRelationKind, EnvironmentError, EnvironmentRelation, Feature, Responsibility,
};
pub use model::{
    AttrValue, Attribute, Element, ElementKind, ModelError, ProvDocument, QualifiedName, Relation,
    RelationKind,
};
pub use validation::{validate, Finding, FindingCategory, Severity, ValidationReport};

