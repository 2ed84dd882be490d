//! Document validation: an inference component that closes missing
//! information, and a constraint component checking uniqueness, ordering,
//! impossibility, typing and environment nesting.
//!
//! The five checks are pure functions over the closed document and are
//! independent of one another; [`validate`] runs inference, then all five,
//! and aggregates findings in a fixed category order so the report is a pure
//! function of document structure.

mod checks;
mod infer;

pub use checks::{
    check_impossibility, check_nesting, check_ordering, check_typing, check_uniqueness,
};
pub use infer::{infer, InferError, InferredStatement};

use std::collections::BTreeSet;
use std::fmt;

use serde_json::json;

use crate::model::{ProvDocument, QualifiedName};

/// Constraint categories, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FindingCategory {
    Uniqueness,
    Ordering,
    Impossibility,
    Typing,
    Nesting,
}

impl FindingCategory {
    pub const ALL: [FindingCategory; 5] = [
        FindingCategory::Uniqueness,
        FindingCategory::Ordering,
        FindingCategory::Impossibility,
        FindingCategory::Typing,
        FindingCategory::Nesting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FindingCategory::Uniqueness => "Uniqueness",
            FindingCategory::Ordering => "Ordering",
            FindingCategory::Impossibility => "Impossibility",
            FindingCategory::Typing => "Typing",
            FindingCategory::Nesting => "Nesting",
        }
    }
}

impl fmt::Display for FindingCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn name(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

/// A single constraint violation, tagged with its category and the ids it
/// concerns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub category: FindingCategory,
    pub severity: Severity,
    pub subjects: Vec<QualifiedName>,
    pub message: String,
}

impl Finding {
    pub(crate) fn error(
        category: FindingCategory,
        subjects: Vec<QualifiedName>,
        message: String,
    ) -> Self {
        Self {
            category,
            severity: Severity::Error,
            subjects,
            message,
        }
    }
}

/// Result of [`validate`]: ordered findings plus the statements inference
/// added while closing the document.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    pub inferred: Vec<InferredStatement>,
}

impl ValidationReport {
    /// Valid iff no error-severity findings.
    pub fn is_valid(&self) -> bool {
        self.findings.iter().all(|f| f.severity != Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn findings_in(&self, category: FindingCategory) -> Vec<&Finding> {
        self.findings
            .iter()
            .filter(|f| f.category == category)
            .collect()
    }

    /// JSON form with stable field names, for CLI output.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "verdict": if self.is_valid() { "valid" } else { "invalid" },
            "findings": self.findings.iter().map(|f| json!({
                "category": f.category.name(),
                "severity": f.severity.name(),
                "subjects": f.subjects.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "message": f.message,
            })).collect::<Vec<_>>(),
            "inferredStatements": self.inferred.iter().map(InferredStatement::describe).collect::<Vec<_>>(),
        })
    }
}

/// The nesting formalism: each environment's content is its own top-level
/// element instances unioned with the content of its nested environments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvironmentTree {
    nodes: Vec<TreeNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct TreeNode {
    id: QualifiedName,
    parent: Option<usize>,
    children: Vec<usize>,
    instances: BTreeSet<QualifiedName>,
}

impl EnvironmentTree {
    /// Builds the tree from a document's environment forest. Environments
    /// whose parent is unknown are treated as roots here; the escape is
    /// reported by the nesting check.
    pub fn from_document(doc: &ProvDocument) -> Self {
        let mut ids: Vec<&QualifiedName> = doc.environments().map(|e| &e.id).collect();
        ids.sort();
        let index_of = |id: &QualifiedName| ids.binary_search(&id).ok();
        let nodes: Vec<TreeNode> = ids
            .iter()
            .map(|id| {
                let env = doc.environment(id).expect("listed above");
                TreeNode {
                    id: (*id).clone(),
                    parent: env.parent.as_ref().and_then(index_of),
                    children: Vec::new(),
                    instances: env.members.iter().cloned().collect(),
                }
            })
            .collect();
        let mut tree = Self { nodes };
        for i in 0..tree.nodes.len() {
            if let Some(p) = tree.nodes[i].parent {
                tree.nodes[p].children.push(i);
            }
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn index_of(&self, id: &QualifiedName) -> Option<usize> {
        self.nodes.iter().position(|n| &n.id == id)
    }

    /// The environment's own top-level instances.
    pub fn instances(&self, id: &QualifiedName) -> Option<&BTreeSet<QualifiedName>> {
        self.index_of(id).map(|i| &self.nodes[i].instances)
    }

    /// Recursive content: own instances unioned with all nested environments'
    /// content.
    pub fn content(&self, id: &QualifiedName) -> Option<BTreeSet<QualifiedName>> {
        let root = self.index_of(id)?;
        let mut out = BTreeSet::new();
        let mut stack = vec![root];
        let mut guard = 0usize;
        while let Some(i) = stack.pop() {
            guard += 1;
            if guard > self.nodes.len() * 2 + 2 {
                break; // cyclic input; the nesting check reports it
            }
            out.extend(self.nodes[i].instances.iter().cloned());
            stack.extend(self.nodes[i].children.iter().copied());
        }
        Some(out)
    }

    /// Canonical (id, parent id, sorted instances) rows, for comparing trees
    /// induced by different encodings of the same situation.
    pub fn canonical(&self) -> Vec<(QualifiedName, Option<QualifiedName>, Vec<QualifiedName>)> {
        let mut rows: Vec<_> = self
            .nodes
            .iter()
            .map(|n| {
                (
                    n.id.clone(),
                    n.parent.map(|p| self.nodes[p].id.clone()),
                    n.instances.iter().cloned().collect::<Vec<_>>(),
                )
            })
            .collect();
        rows.sort();
        rows
    }
}

/// Runs inference then all five constraint checks.
///
/// Kind ambiguities discovered during inference surface as typing findings
/// rather than aborting, so a report is always produced.
pub fn validate(doc: &ProvDocument) -> ValidationReport {
    let closure = infer::close(doc);
    let mut findings = Vec::new();
    findings.extend(check_uniqueness(&closure.document));
    findings.extend(check_ordering(&closure.document));
    findings.extend(check_impossibility(&closure.document));
    findings.extend(check_typing(&closure.document));
    for (id, kinds) in &closure.ambiguities {
        let kinds = kinds
            .iter()
            .map(|k| k.keyword())
            .collect::<Vec<_>>()
            .join(" and ");
        findings.push(Finding::error(
            FindingCategory::Typing,
            vec![id.clone()],
            format!("relation positions force `{id}` to be both {kinds}"),
        ));
    }
    findings.extend(check_nesting(&closure.document));
    findings.sort_by(|a, b| {
        (a.category, &a.subjects, &a.message).cmp(&(b.category, &b.subjects, &b.message))
    });
    ValidationReport {
        findings,
        inferred: closure.inferred,
    }
}
