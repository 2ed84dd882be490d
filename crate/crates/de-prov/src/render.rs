//! DOT output: data environments as nested cluster subgraphs.
//!
//! Visual conventions: entities are ellipses, activities are boxes, agents
//! use the house shape (the closest standard DOT shape to a pentagon).
//! Contract edges are red and bold between the parties' clusters; environment
//! relations are dashed. Output is canonical: identical documents yield
//! byte-identical text.

use std::fmt::Write as _;

use crate::environment::{DataEnvironment, EnvRelationKind};
use crate::model::{AttrValue, Element, ElementKind, ProvDocument, QualifiedName};
use crate::notation::json::{sorted_contracts, sorted_env_relations, sorted_relations};

/// Options controlling [`to_dot`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    /// Render environment attributes inside the cluster label.
    pub show_attributes: bool,
    /// Cluster nesting depth limit; 0 means unlimited. Environments deeper
    /// than the limit draw their nodes inside the deepest allowed ancestor.
    pub depth_limit: usize,
    /// Graph direction.
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LeftRight,
    TopBottom,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            show_attributes: true,
            depth_limit: 0,
            direction: Direction::LeftRight,
        }
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}

fn cluster_name(id: &QualifiedName) -> String {
    let mut sanitized = String::with_capacity(id.to_string().len() + 8);
    for c in id.to_string().chars() {
        if c.is_ascii_alphanumeric() {
            sanitized.push(c);
        } else {
            sanitized.push('_');
        }
    }
    format!("cluster_{sanitized}")
}

fn anchor_name(id: &QualifiedName) -> String {
    format!("__env_{}", cluster_name(id))
}

fn node_shape(kind: ElementKind) -> &'static str {
    match kind {
        ElementKind::Entity => "ellipse",
        ElementKind::Activity => "box",
        ElementKind::Agent => "house",
    }
}

fn time_label_key() -> QualifiedName {
    QualifiedName::new("de", "timeLabel").expect("static name")
}

fn element_line(element: &Element) -> String {
    let mut label = element.id.to_string();
    if let Some(AttrValue::Str(t)) = element.attr(&time_label_key()) {
        let _ = write!(label, "\n[{t}]");
    }
    format!(
        "{} [shape={}, label={}];",
        quote(&element.id.to_string()),
        node_shape(element.kind),
        quote(&label)
    )
}

fn truncate_label(s: &str) -> String {
    if s.chars().count() <= 40 {
        s.to_owned()
    } else {
        let cut: String = s.chars().take(40).collect();
        format!("{cut}...")
    }
}

fn push_line(out: &mut String, indent: usize, line: &str) {
    for _ in 0..indent {
        out.push_str("  ");
    }
    out.push_str(line);
    out.push('\n');
}

fn write_cluster(
    out: &mut String,
    doc: &ProvDocument,
    env: &DataEnvironment,
    options: &RenderOptions,
    depth: usize,
    indent: usize,
) {
    let within_limit = options.depth_limit == 0 || depth < options.depth_limit;
    if within_limit {
        push_line(out, indent, &format!("subgraph {} {{", cluster_name(&env.id)));
        let mut label = env.id.to_string();
        if options.show_attributes {
            let mut attrs: Vec<String> = env
                .attributes
                .iter()
                .map(|a| format!("{}={}", a.key, a.value))
                .collect();
            attrs.sort();
            for attr in attrs {
                let _ = write!(label, "\n{}", truncate_label(&attr));
            }
        }
        push_line(out, indent + 1, &format!("label={};", quote(&label)));
        push_line(out, indent + 1, "style=rounded;");
        push_line(
            out,
            indent + 1,
            &format!("{} [shape=point, style=invis];", quote(&anchor_name(&env.id))),
        );
        write_cluster_body(out, doc, env, options, depth, indent + 1);
        push_line(out, indent, "}");
    } else {
        // beyond the depth limit: contents fold into the ancestor's cluster
        write_cluster_body(out, doc, env, options, depth, indent);
    }
}

fn write_cluster_body(
    out: &mut String,
    doc: &ProvDocument,
    env: &DataEnvironment,
    options: &RenderOptions,
    depth: usize,
    indent: usize,
) {
    let mut members: Vec<&Element> = doc
        .elements()
        .iter()
        .filter(|e| env.members.contains(&e.id))
        .collect();
    members.sort_by(|a, b| (a.kind.keyword(), &a.id).cmp(&(b.kind.keyword(), &b.id)));
    for element in members {
        push_line(out, indent, &element_line(element));
    }
    for child in doc.environment_children(&env.id) {
        write_cluster(out, doc, child, options, depth + 1, indent);
    }
}

/// Renders a document as DOT text.
pub fn to_dot(doc: &ProvDocument, options: &RenderOptions) -> String {
    let mut out = String::new();
    out.push_str("digraph provenance {\n");
    push_line(
        &mut out,
        1,
        match options.direction {
            Direction::LeftRight => "rankdir=LR;",
            Direction::TopBottom => "rankdir=TB;",
        },
    );
    push_line(&mut out, 1, "compound=true;");
    push_line(&mut out, 1, "node [fontsize=10];");

    for root in doc.environment_roots() {
        write_cluster(&mut out, doc, root, options, 0, 1);
    }

    // unassigned elements
    let mut loose: Vec<&Element> = doc
        .elements()
        .iter()
        .filter(|e| doc.environment_of(&e.id).is_none())
        .collect();
    loose.sort_by(|a, b| (a.kind.keyword(), &a.id).cmp(&(b.kind.keyword(), &b.id)));
    for element in loose {
        push_line(&mut out, 1, &element_line(element));
    }

    // element relations: subject -> object, labelled with the kind plus any
    // annotated meaning
    for relation in sorted_relations(doc.relations().iter()) {
        let mut label = relation.kind.keyword().to_owned();
        if let Some(id) = &relation.id {
            if let Some(annotation) = doc.annotation(id) {
                if let Some(meaning) = annotation
                    .iter()
                    .find(|a| a.key.local() == "meaning")
                    .and_then(|a| a.value.as_str())
                {
                    let _ = write!(label, "\n{}", truncate_label(meaning));
                }
            }
        }
        push_line(
            &mut out,
            1,
            &format!(
                "{} -> {} [label={}];",
                quote(&relation.subject.to_string()),
                quote(&relation.object.to_string()),
                quote(&label)
            ),
        );
    }

    // environment relations: dashed edges between cluster anchors
    for relation in sorted_env_relations(doc) {
        if relation.kind == EnvRelationKind::ContainedIn {
            continue; // nesting is already visible
        }
        push_line(
            &mut out,
            1,
            &format!(
                "{} -> {} [style=dashed, label={}, ltail={}, lhead={}];",
                quote(&anchor_name(&relation.subject)),
                quote(&anchor_name(&relation.object)),
                quote(relation.kind.keyword()),
                cluster_name(&relation.subject),
                cluster_name(&relation.object),
            ),
        );
    }

    // contract edges: red, bold, from the first party to each other party
    for contract in sorted_contracts(doc) {
        let Some((first, rest)) = contract.parties.split_first() else {
            continue;
        };
        for party in rest {
            push_line(
                &mut out,
                1,
                &format!(
                    "{} -> {} [color=red, style=bold, dir=none, label={}, ltail={}, lhead={}];",
                    quote(&anchor_name(first)),
                    quote(&anchor_name(party)),
                    quote(&contract.id.to_string()),
                    cluster_name(first),
                    cluster_name(party),
                ),
            );
        }
    }

    out.push_str("}\n");
    out
}
