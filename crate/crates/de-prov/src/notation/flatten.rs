//! Flattening export: strictly standard PROV-N.
//!
//! Nesting is removed (every environment becomes a top-level bundle) and the
//! extension state is re-expressed through forms any standard PROV-N parser
//! accepts:
//!
//! - environment attributes → `entity(<env>, [de:statementType="environment", ...])`
//! - containment → `de:containedIn(<child>, <parent>)`
//! - contracts → `entity(<id>, [de:statementType="contract", <terms>])` plus
//!   `de:party(<id>, <env>)` and `de:governsFlow(<id>, <relation>)`
//! - environment relations → `de:hostedBy(...)`, `de:ownedBy(...)`, ...
//! - control records → `de:control(<holder>, <target>, [...])`
//! - relation annotations → `de:annotation(<relation>, [...])`
//!
//! [`super::parse_document`] understands all of these, so re-importing a
//! flattened file reconstructs the original environment graph.

use super::json::{sorted_annotations, sorted_contracts, sorted_controls, sorted_env_relations};
use super::provn::{group_statements, render_attr_list, render_element, render_relation};
use super::NotationError;
use crate::environment::{EncodingMode, EnvRelationKind};
use crate::model::{Attribute, AttrValue, ProvDocument, QualifiedName, DE_NS, DE_PREFIX};

fn de(local: &str) -> QualifiedName {
    QualifiedName::new(DE_PREFIX, local).expect("static name")
}

/// Exports a Bundles+ document as standard PROV-N with no nested bundles.
pub fn export_flattened(doc: &ProvDocument) -> Result<String, NotationError> {
    if doc.mode != EncodingMode::BundlesPlus {
        return Err(NotationError::FlattenNeedsBundlesPlus(doc.mode));
    }
    let mut out = String::new();
    out.push_str("document\n");
    let mut prefixes: Vec<(String, String)> = doc
        .namespaces
        .sorted()
        .into_iter()
        .map(|(p, u)| (p.to_owned(), u.to_owned()))
        .collect();
    let needs_de = doc.environments().any(|e| !e.attributes.is_empty() || e.parent.is_some())
        || doc.contracts().next().is_some()
        || !doc.controls().is_empty()
        || !doc.env_relations().is_empty()
        || doc.annotations().next().is_some();
    if needs_de && !doc.namespaces.contains(DE_PREFIX) {
        prefixes.push((DE_PREFIX.to_owned(), DE_NS.to_owned()));
        prefixes.sort();
    }
    for (prefix, uri) in &prefixes {
        out.push_str(&format!("  prefix {prefix} <{uri}>\n"));
    }

    // every environment as a top-level bundle, forest pre-order
    let groups = group_statements(doc);
    let mut order: Vec<&QualifiedName> = Vec::new();
    fn visit<'a>(doc: &'a ProvDocument, id: &'a QualifiedName, order: &mut Vec<&'a QualifiedName>) {
        order.push(id);
        for child in doc.environment_children(id) {
            visit(doc, &child.id, order);
        }
    }
    for root in doc.environment_roots() {
        visit(doc, &root.id, &mut order);
    }
    for env_id in &order {
        out.push_str(&format!("  bundle {env_id}\n"));
        if let Some((elements, relations)) = groups.by_env.get(env_id) {
            for element in elements {
                out.push_str(&format!("    {}\n", render_element(element)));
            }
            for relation in relations {
                out.push_str(&format!("    {}\n", render_relation(relation)));
            }
        }
        out.push_str("  endBundle\n");
    }

    // descriptor entities carry environment attributes
    for env_id in &order {
        let env = doc.environment(env_id).expect("ordered above");
        if env.attributes.is_empty() {
            continue;
        }
        let mut attrs = vec![Attribute::new(de("statementType"), "environment")];
        attrs.extend(env.attributes.iter().cloned());
        out.push_str(&format!("  entity({env_id}, {})\n", render_attr_list(&attrs)));
    }
    for env_id in &order {
        let env = doc.environment(env_id).expect("ordered above");
        if let Some(parent) = &env.parent {
            out.push_str(&format!("  de:containedIn({env_id}, {parent})\n"));
        }
    }

    for element in &groups.loose_elements {
        out.push_str(&format!("  {}\n", render_element(element)));
    }
    for relation in &groups.loose_relations {
        out.push_str(&format!("  {}\n", render_relation(relation)));
    }

    for contract in sorted_contracts(doc) {
        let mut attrs = vec![Attribute::new(de("statementType"), "contract")];
        attrs.extend(contract.terms.iter().cloned());
        out.push_str(&format!(
            "  entity({}, {})\n",
            contract.id,
            render_attr_list(&attrs)
        ));
        for party in &contract.parties {
            out.push_str(&format!("  de:party({}, {party})\n", contract.id));
        }
        let mut flows: Vec<&QualifiedName> = contract.governs_flows.iter().collect();
        flows.sort();
        for flow in flows {
            out.push_str(&format!("  de:governsFlow({}, {flow})\n", contract.id));
        }
    }

    for rel in sorted_env_relations(doc) {
        if rel.kind == EnvRelationKind::ContainedIn {
            continue; // the parent field already carries containment
        }
        if rel.attributes.is_empty() {
            out.push_str(&format!(
                "  de:{}({}, {})\n",
                rel.kind.keyword(),
                rel.subject,
                rel.object
            ));
        } else {
            out.push_str(&format!(
                "  de:{}({}, {}, {})\n",
                rel.kind.keyword(),
                rel.subject,
                rel.object,
                render_attr_list(&rel.attributes)
            ));
        }
    }

    for record in sorted_controls(doc) {
        let attrs = vec![
            Attribute::new(de("controlType"), record.control_type.name()),
            Attribute::new(de("controlNature"), record.control_nature.name()),
            Attribute::new(de("responsibility"), record.responsibility.name()),
        ];
        out.push_str(&format!(
            "  de:control({}, {}, {})\n",
            record.holder,
            record.target,
            render_attr_list(&attrs)
        ));
    }

    for (relation, attrs) in sorted_annotations(doc) {
        out.push_str(&format!(
            "  de:annotation({relation}, {})\n",
            render_attr_list(attrs)
        ));
    }

    out.push_str("endDocument\n");
    Ok(out)
}

/// True when the attribute list marks a synthesized descriptor entity.
pub(crate) fn statement_type_of(attrs: &[Attribute]) -> Option<&str> {
    attrs.iter().find_map(|a| {
        if a.key.prefix() == DE_PREFIX && a.key.local() == "statementType" {
            match &a.value {
                AttrValue::Str(s) => Some(s.as_str()),
                _ => None,
            }
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::AbstractEnvGraph;
    use crate::model::{Element, Relation, RelationKind};
    use crate::notation::{parse_document, serialize_provn};

    fn q(s: &str) -> QualifiedName {
        s.parse().unwrap()
    }

    fn nested_doc() -> ProvDocument {
        let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
        doc.declare_namespace("ex", "http://example.org/f/").unwrap();
        doc.declare_namespace("de", DE_NS).unwrap();
        doc.create_environment(
            q("ex:bu"),
            vec![Attribute::new(q("de:envType"), "University")],
            None,
        )
        .unwrap();
        doc.create_environment(q("ex:nrds"), vec![], Some(q("ex:bu"))).unwrap();
        doc.add_element_in(Element::entity(q("ex:data")), &q("ex:nrds")).unwrap();
        doc
    }

    #[test]
    fn flattened_output_has_no_nested_bundles() {
        let text = export_flattened(&nested_doc()).unwrap();
        let mut depth = 0usize;
        let mut max_depth = 0usize;
        for token in text.split_whitespace() {
            match token {
                "bundle" => {
                    depth += 1;
                    max_depth = max_depth.max(depth);
                }
                "endBundle" => depth -= 1,
                _ => {}
            }
        }
        assert_eq!(max_depth, 1);
        assert!(text.contains("de:containedIn(ex:nrds, ex:bu)"));
    }

    #[test]
    fn reimport_reconstructs_environment_graph() {
        let doc = nested_doc();
        let text = export_flattened(&doc).unwrap();
        let back = parse_document(&text).unwrap();
        assert_eq!(AbstractEnvGraph::of(&doc), AbstractEnvGraph::of(&back));
    }

    #[test]
    fn contract_becomes_entity_plus_party_statements() {
        let mut doc = nested_doc();
        doc.create_environment(q("ex:gond"), vec![], None).unwrap();
        doc.add_element_in(Element::activity(q("ex:ingest")), &q("ex:nrds")).unwrap();
        doc.add_relation(
            Relation::new(RelationKind::Used, q("ex:ingest"), q("ex:src")).with_id(q("ex:flow1")),
        )
        .unwrap();
        doc.add_element_in(Element::entity(q("ex:src")), &q("ex:gond")).unwrap();
        doc.record_contract(
            q("ex:c1"),
            vec![q("ex:gond"), q("ex:nrds")],
            vec![Attribute::new(q("de:instrument"), "DataSharingAgreement")],
        )
        .unwrap();
        doc.link_contract_flow(&q("ex:c1"), &q("ex:flow1")).unwrap();
        let text = export_flattened(&doc).unwrap();
        assert!(text.contains(r#"entity(ex:c1, [de:instrument="DataSharingAgreement", de:statementType="contract"])"#)
            || text.contains(r#"entity(ex:c1, [de:statementType="contract", de:instrument="DataSharingAgreement"])"#));
        assert_eq!(text.matches("de:party(ex:c1,").count(), 2);
        assert!(text.contains("de:governsFlow(ex:c1, ex:flow1)"));
        let back = parse_document(&text).unwrap();
        assert_eq!(AbstractEnvGraph::of(&doc), AbstractEnvGraph::of(&back));
    }

    #[test]
    fn single_unnested_environment_is_a_fixpoint() {
        let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
        doc.declare_namespace("ex", "http://example.org/f/").unwrap();
        doc.create_environment(q("ex:solo"), vec![], None).unwrap();
        doc.add_element_in(Element::entity(q("ex:data")), &q("ex:solo")).unwrap();
        let flat = export_flattened(&doc).unwrap();
        assert_eq!(flat, serialize_provn(&doc));
    }

    #[test]
    fn flatten_requires_bundles_plus() {
        let doc = ProvDocument::new(EncodingMode::NamespacesPlus);
        assert!(matches!(
            export_flattened(&doc),
            Err(NotationError::FlattenNeedsBundlesPlus(_))
        ));
    }
}
