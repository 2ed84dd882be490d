//! Builds a small data situation through the API, validates it, and asks
//! where a released dataset came from.
//!
//! Run with: cargo run --example build_and_query

use de_prov::environment::{EncodingMode, EnvRelationKind};
use de_prov::model::{Attribute, Element, ProvDocument, QualifiedName, Relation, RelationKind};
use de_prov::notation::serialize_provn;
use de_prov::reasoning::backward_chain;
use de_prov::validation::validate;

fn q(s: &str) -> QualifiedName {
    s.parse().expect("valid name")
}

fn main() {
    let mut doc = ProvDocument::new(EncodingMode::BundlesPlus);
    doc.declare_namespace("org", "http://example.org/acme/").unwrap();
    doc.declare_namespace("de", "http://example.org/de-prov/ns#").unwrap();

    // two environments: a restricted warehouse and the open web
    doc.create_environment(
        q("org:warehouse"),
        vec![
            Attribute::new(q("de:envType"), "Corporate"),
            Attribute::new(q("de:governance-accessType"), "Restricted"),
        ],
        None,
    )
    .unwrap();
    doc.create_environment(
        q("org:web"),
        vec![Attribute::new(q("de:envType"), "Open")],
        None,
    )
    .unwrap();
    doc.relate_environments(
        EnvRelationKind::SharesDataWith,
        q("org:warehouse"),
        q("org:web"),
        vec![],
    )
    .unwrap();

    // sales data is aggregated inside the warehouse, the report is published
    doc.add_element_in(Element::entity(q("org:sales_raw")), &q("org:warehouse"))
        .unwrap();
    doc.add_element_in(
        Element::activity(q("org:aggregate")).with_attr(q("de:timeLabel"), "t1"),
        &q("org:warehouse"),
    )
    .unwrap();
    doc.add_element_in(Element::entity(q("org:report")), &q("org:web"))
        .unwrap();
    doc.add_relation(Relation::new(
        RelationKind::Used,
        q("org:aggregate"),
        q("org:sales_raw"),
    ))
    .unwrap();
    doc.add_relation(
        Relation::new(RelationKind::WasGeneratedBy, q("org:report"), q("org:aggregate"))
            .with_id(q("org:release")),
    )
    .unwrap();
    doc.annotate_relation(
        &q("org:release"),
        vec![Attribute::new(q("de:meaning"), "publicRelease")],
    )
    .unwrap();

    let report = validate(&doc);
    println!(
        "validation: {} ({} inferred statements)",
        if report.is_valid() { "valid" } else { "invalid" },
        report.inferred.len()
    );

    let lineage = backward_chain(&doc, &q("org:report")).unwrap();
    println!("org:report depends on:");
    for reached in &lineage.reached {
        let environment = reached
            .environment
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_else(|| "unassigned".to_owned());
        println!("  {} (in {environment}, {} hops)", reached.id, reached.distance);
    }
    let show = |env: &Option<QualifiedName>| {
        env.as_ref()
            .map(ToString::to_string)
            .unwrap_or_else(|| "unassigned".to_owned())
    };
    for crossing in &lineage.crossings {
        println!(
            "  crossed {} -> {} via {}",
            show(&crossing.from),
            show(&crossing.to),
            crossing.kind
        );
    }

    print!("{}", serialize_provn(&doc));
}
