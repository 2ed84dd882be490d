//! Shared test support: a minimal DOT parser, seeded random document /
//! flow-DAG generators, and the brute-force reachability oracle the chain
//! queries are checked against.

#![allow(dead_code)]

pub mod dot;
pub mod gen;

use std::collections::BTreeSet;

use de_prov::model::QualifiedName;

/// Naive fixpoint closure over a directed edge list, including the origin.
/// Deliberately independent of the library's traversal code.
pub fn brute_force_closure(
    edges: &[(QualifiedName, QualifiedName)],
    origin: &QualifiedName,
    forward: bool,
) -> BTreeSet<QualifiedName> {
    let mut reached: BTreeSet<QualifiedName> = BTreeSet::new();
    reached.insert(origin.clone());
    loop {
        let mut grew = false;
        for (source, target) in edges {
            let (from, to) = if forward {
                (source, target)
            } else {
                (target, source)
            };
            if reached.contains(from) && !reached.contains(to) {
                reached.insert(to.clone());
                grew = true;
            }
        }
        if !grew {
            return reached;
        }
    }
}

pub fn q(s: &str) -> QualifiedName {
    s.parse().expect("valid test qualified name")
}
