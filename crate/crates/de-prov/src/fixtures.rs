//! The two shipped example documents, generated programmatically so every
//! encoding-mode variant stays consistent by construction.
//!
//! `gond-nrds`: a national statistics office (GOND) shares data under
//! contract with a research data service (NRDS, nested in the University of
//! Barsetshire), which releases controlled extracts to two research labs;
//! aggregate statistics and lab publications end up in the open environment.
//! Processing steps carry the time labels t1..t7.
//!
//! `clinical-trial`: trial data collected at two centres is uploaded to an
//! electronic-data-capture provider, extracted by a pharmaceutical company,
//! shared with a public-health lab and published.

use std::str::FromStr;

use crate::environment::{
    ControlNature, ControlRecord, ControlType, EncodingMode, EnvRelationKind, EnvironmentError,
    Feature, Responsibility,
};
use crate::model::{Attribute, Element, ProvDocument, QualifiedName, Relation, RelationKind};

/// The shipped fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureId {
    GondNrds,
    ClinicalTrial,
}

impl FixtureId {
    pub const ALL: [FixtureId; 2] = [FixtureId::GondNrds, FixtureId::ClinicalTrial];

    pub fn name(self) -> &'static str {
        match self {
            FixtureId::GondNrds => "gond-nrds",
            FixtureId::ClinicalTrial => "clinical-trial",
        }
    }
}

impl FromStr for FixtureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gond-nrds" => Ok(FixtureId::GondNrds),
            "clinical-trial" => Ok(FixtureId::ClinicalTrial),
            other => Err(format!(
                "unknown fixture `{other}` (expected gond-nrds or clinical-trial)"
            )),
        }
    }
}

fn q(s: &str) -> QualifiedName {
    s.parse().expect("fixture names are static and valid")
}

fn a(key: &str, value: &str) -> Attribute {
    Attribute::new(q(key), value)
}

/// What a plain mode had to leave out, for the CLI warning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureOmissions {
    pub mode: EncodingMode,
    pub omitted: Vec<&'static str>,
}

struct Builder {
    doc: ProvDocument,
    omissions: Vec<&'static str>,
}

impl Builder {
    fn new(mode: EncodingMode) -> Self {
        Self {
            doc: ProvDocument::new(mode),
            omissions: Vec::new(),
        }
    }

    fn supports(&mut self, feature: Feature, note: &'static str) -> bool {
        if self.doc.mode.supports(feature) {
            true
        } else {
            if !self.omissions.contains(&note) {
                self.omissions.push(note);
            }
            false
        }
    }

    fn env(
        &mut self,
        id: &str,
        attrs: Vec<Attribute>,
        parent: Option<&str>,
    ) -> Result<(), EnvironmentError> {
        let attrs = if self.supports(Feature::Attributes, "environment attributes") {
            attrs
        } else {
            Vec::new()
        };
        let parent = if parent.is_some() && !self.supports(Feature::Nesting, "environment nesting")
        {
            None
        } else {
            parent
        };
        self.doc.create_environment(q(id), attrs, parent.map(q))
    }

    fn entity(&mut self, id: &str, env: &str, attrs: Vec<Attribute>) -> Result<(), EnvironmentError> {
        let mut element = Element::entity(q(id));
        element.attributes = attrs;
        self.doc.add_element_in(element, &q(env))
    }

    fn agent(&mut self, id: &str, env: &str, role: &str) -> Result<(), EnvironmentError> {
        let element = Element::agent(q(id)).with_attr(q("de:agentRole"), role);
        self.doc.add_element_in(element, &q(env))
    }

    fn activity(&mut self, id: &str, env: &str, time_label: &str) -> Result<(), EnvironmentError> {
        let element = Element::activity(q(id)).with_attr(q("de:timeLabel"), time_label);
        self.doc.add_element_in(element, &q(env))
    }

    fn rel(&mut self, kind: RelationKind, subject: &str, object: &str) {
        self.doc
            .add_relation(Relation::new(kind, q(subject), q(object)))
            .expect("fixture relations are well formed");
    }

    fn rel_id(&mut self, kind: RelationKind, id: &str, subject: &str, object: &str) {
        self.doc
            .add_relation(Relation::new(kind, q(subject), q(object)).with_id(q(id)))
            .expect("fixture relations are well formed");
    }

    fn contract(
        &mut self,
        id: &str,
        parties: &[&str],
        terms: Vec<Attribute>,
        flows: &[&str],
    ) -> Result<(), EnvironmentError> {
        if !self.supports(Feature::Contracts, "contracts") {
            return Ok(());
        }
        self.doc
            .record_contract(q(id), parties.iter().map(|p| q(p)).collect(), terms)?;
        for flow in flows {
            self.doc.link_contract_flow(&q(id), &q(flow))?;
        }
        Ok(())
    }

    fn env_rel(
        &mut self,
        kind: EnvRelationKind,
        subject: &str,
        object: &str,
    ) -> Result<(), EnvironmentError> {
        if !self.supports(Feature::Relationships, "environment relationships") {
            return Ok(());
        }
        self.doc
            .relate_environments(kind, q(subject), q(object), vec![])
    }

    fn control(
        &mut self,
        holder: &str,
        target: &str,
        control_type: ControlType,
        control_nature: ControlNature,
        responsibility: Responsibility,
    ) -> Result<(), EnvironmentError> {
        self.doc.record_control(ControlRecord {
            holder: q(holder),
            target: q(target),
            control_type,
            control_nature,
            responsibility,
        })
    }

    fn annotate(&mut self, relation: &str, attrs: Vec<Attribute>) -> Result<(), EnvironmentError> {
        if !self.supports(Feature::Annotation, "relation annotations") {
            return Ok(());
        }
        self.doc.annotate_relation(&q(relation), attrs)
    }
}

/// Builds a fixture in the requested encoding mode. Plain modes produce a
/// reduced document; the omissions list names what had to be dropped.
pub fn build_fixture(
    id: FixtureId,
    mode: EncodingMode,
) -> Result<(ProvDocument, FixtureOmissions), EnvironmentError> {
    let builder = match id {
        FixtureId::GondNrds => gond_nrds(mode)?,
        FixtureId::ClinicalTrial => clinical_trial(mode)?,
    };
    let omissions = FixtureOmissions {
        mode,
        omitted: builder.omissions.clone(),
    };
    Ok((builder.doc, omissions))
}

/// Convenience for tests and queries: the fixture document alone.
pub fn fixture(id: FixtureId, mode: EncodingMode) -> ProvDocument {
    build_fixture(id, mode).expect("fixtures build in every mode").0
}

fn declare_common(builder: &mut Builder, env_prefixes: &[(&str, &str)]) {
    let doc = &mut builder.doc;
    doc.declare_namespace("ex", "http://example.org/data-situations/")
        .expect("static");
    doc.declare_namespace(crate::model::DE_PREFIX, crate::model::DE_NS)
        .expect("static");
    for (prefix, uri) in env_prefixes {
        doc.declare_namespace(prefix, uri).expect("static");
    }
}

fn gond_nrds(mode: EncodingMode) -> Result<Builder, EnvironmentError> {
    let mut b = Builder::new(mode);
    declare_common(
        &mut b,
        &[
            ("gond", "http://global-env.com/gond/"),
            ("bu", "http://global-env.com/bu/"),
            ("nrds", "http://global-env.com/bu/nrds/"),
            ("lab1", "http://global-env.com/lab1/"),
            ("lab2", "http://global-env.com/lab2/"),
            ("open", "http://global-env.com/open/"),
        ],
    );

    // environments (ids double as bundle ids; local parts double as
    // namespace path segments)
    b.env(
        "ex:gond",
        vec![
            a("de:envType", "Government"),
            a("de:governance-accessType", "Restricted"),
            a("de:governance-userdefinition", "TrainedLevel2"),
            a("de:infrastructure", "ISO27001"),
        ],
        None,
    )?;
    b.env("ex:bu", vec![a("de:envType", "University")], None)?;
    b.env(
        "ex:nrds",
        vec![
            a("de:envType", "ResearchDataService"),
            a("de:governance-accessType", "Restricted"),
        ],
        Some("ex:bu"),
    )?;
    b.env("ex:lab1", vec![a("de:envType", "ResearchLab")], None)?;
    b.env("ex:lab2", vec![a("de:envType", "ResearchLab")], None)?;
    b.env(
        "ex:open",
        vec![
            a("de:envType", "Open"),
            a("de:governance-accessType", "Public"),
        ],
        None,
    )?;
    // the lab's secure processing enclave: owned and managed by NRDS but
    // hosted for the lab
    b.env("ex:lab1_enclave", vec![], Some("ex:lab1"))?;
    b.env_rel(EnvRelationKind::HostedBy, "ex:lab1_enclave", "ex:lab1")?;
    b.env_rel(EnvRelationKind::OwnedBy, "ex:lab1_enclave", "ex:nrds")?;
    b.env_rel(EnvRelationKind::ManagedBy, "ex:lab1_enclave", "ex:nrds")?;

    // GOND: national dataset, sharing preparation (t1) and heavier
    // aggregation for public release (t2)
    b.entity(
        "gond:entity_001",
        "ex:gond",
        vec![a("de:description", "national datasets")],
    )?;
    b.entity("gond:shared_extract", "ex:gond", vec![])?;
    b.activity("gond:share_prep", "ex:gond", "t1")?;
    b.activity("gond:aggregate_prep", "ex:gond", "t2")?;
    b.agent("gond:agent_processor_001", "ex:gond", "dataProcessor")?;
    b.agent("gond:agent_controller_001", "ex:gond", "dataController")?;

    // NRDS: ingest under contract (t3), disclosure control (t4)
    b.entity("nrds:curated_data", "ex:nrds", vec![])?;
    b.entity("nrds:release_files", "ex:nrds", vec![])?;
    b.activity("nrds:ingest", "ex:nrds", "t3")?;
    b.activity("nrds:disclosure_control", "ex:nrds", "t4")?;
    b.agent("nrds:agent_controller_001", "ex:nrds", "dataController")?;

    // labs: analysis (t5) and write-up (t6/t7)
    for (lab, writeup_label) in [("lab1", "t6"), ("lab2", "t7")] {
        b.entity(&format!("{lab}:findings"), &format!("ex:{lab}"), vec![])?;
        b.activity(&format!("{lab}:analysis"), &format!("ex:{lab}"), "t5")?;
        b.activity(&format!("{lab}:writeup"), &format!("ex:{lab}"), writeup_label)?;
        b.agent(
            &format!("{lab}:agent_researcher_001"),
            &format!("ex:{lab}"),
            "dataUser",
        )?;
    }

    // open environment: aggregate release and publications
    b.entity("open:aggregate_release", "ex:open", vec![])?;
    b.entity("open:publication_lab1", "ex:open", vec![])?;
    b.entity("open:publication_lab2", "ex:open", vec![])?;

    // flows
    b.rel(RelationKind::Used, "gond:share_prep", "gond:entity_001");
    b.rel(RelationKind::WasGeneratedBy, "gond:shared_extract", "gond:share_prep");
    b.rel(RelationKind::WasDerivedFrom, "gond:shared_extract", "gond:entity_001");
    b.rel(RelationKind::Used, "gond:aggregate_prep", "gond:entity_001");
    b.rel(RelationKind::WasGeneratedBy, "open:aggregate_release", "gond:aggregate_prep");
    b.rel(RelationKind::WasDerivedFrom, "open:aggregate_release", "gond:entity_001");
    b.rel_id(RelationKind::Used, "ex:flow_gond_nrds", "nrds:ingest", "gond:shared_extract");
    b.rel(RelationKind::WasGeneratedBy, "nrds:curated_data", "nrds:ingest");
    b.rel(RelationKind::Used, "nrds:disclosure_control", "nrds:curated_data");
    b.rel(RelationKind::WasGeneratedBy, "nrds:release_files", "nrds:disclosure_control");
    b.rel_id(RelationKind::Used, "ex:flow_nrds_lab1", "lab1:analysis", "nrds:release_files");
    b.rel_id(RelationKind::Used, "ex:flow_nrds_lab2", "lab2:analysis", "nrds:release_files");
    for lab in ["lab1", "lab2"] {
        b.rel(
            RelationKind::WasGeneratedBy,
            &format!("{lab}:findings"),
            &format!("{lab}:analysis"),
        );
        b.rel(
            RelationKind::Used,
            &format!("{lab}:writeup"),
            &format!("{lab}:findings"),
        );
        b.rel(
            RelationKind::WasGeneratedBy,
            &format!("open:publication_{lab}"),
            &format!("{lab}:writeup"),
        );
    }

    // responsibility: processors act on behalf of controllers, researchers
    // under the service's terms
    b.rel(RelationKind::WasAssociatedWith, "gond:share_prep", "gond:agent_processor_001");
    b.rel(RelationKind::WasAssociatedWith, "gond:aggregate_prep", "gond:agent_processor_001");
    b.rel(RelationKind::ActedOnBehalfOf, "gond:agent_processor_001", "gond:agent_controller_001");
    b.rel(RelationKind::WasAttributedTo, "gond:entity_001", "gond:agent_controller_001");
    b.rel(RelationKind::WasAssociatedWith, "nrds:ingest", "nrds:agent_controller_001");
    b.rel(RelationKind::WasAssociatedWith, "nrds:disclosure_control", "nrds:agent_controller_001");
    for lab in ["lab1", "lab2"] {
        b.rel(
            RelationKind::WasAssociatedWith,
            &format!("{lab}:analysis"),
            &format!("{lab}:agent_researcher_001"),
        );
        b.rel(
            RelationKind::WasAssociatedWith,
            &format!("{lab}:writeup"),
            &format!("{lab}:agent_researcher_001"),
        );
        b.rel(
            RelationKind::ActedOnBehalfOf,
            &format!("{lab}:agent_researcher_001"),
            "nrds:agent_controller_001",
        );
    }

    // contracts governing the cross-boundary flows
    b.contract(
        "ex:contract_gond_nrds",
        &["ex:gond", "ex:nrds"],
        vec![a("de:instrument", "DataSharingAgreement")],
        &["ex:flow_gond_nrds"],
    )?;
    b.contract(
        "ex:contract_nrds_lab1",
        &["ex:nrds", "ex:lab1"],
        vec![a("de:instrument", "AccessAgreement")],
        &["ex:flow_nrds_lab1"],
    )?;
    b.contract(
        "ex:contract_nrds_lab2",
        &["ex:nrds", "ex:lab2"],
        vec![a("de:instrument", "AccessAgreement")],
        &["ex:flow_nrds_lab2"],
    )?;

    // loci of responsibility and control over releases
    b.control("ex:gond", "ex:nrds", ControlType::Indirect, ControlNature::Strategic, Responsibility::Indirect)?;
    b.control("ex:gond", "ex:lab1", ControlType::Indirect, ControlNature::Strategic, Responsibility::Indirect)?;
    b.control("ex:gond", "ex:lab2", ControlType::Indirect, ControlNature::Strategic, Responsibility::Indirect)?;
    b.control("ex:nrds", "ex:lab1", ControlType::Direct, ControlNature::Operational, Responsibility::Direct)?;
    b.control("ex:nrds", "ex:lab2", ControlType::Direct, ControlNature::Operational, Responsibility::Direct)?;

    // the GOND→NRDS flow is a store-for-onward-sharing transfer, not plain use
    b.annotate(
        "ex:flow_gond_nrds",
        vec![a("de:meaning", "storeForOnwardSharing")],
    )?;

    Ok(b)
}

fn clinical_trial(mode: EncodingMode) -> Result<Builder, EnvironmentError> {
    let mut b = Builder::new(mode);
    declare_common(
        &mut b,
        &[
            ("centres", "http://global-env.com/centres/"),
            ("centre_a", "http://global-env.com/centres/centre_a/"),
            ("centre_b", "http://global-env.com/centres/centre_b/"),
            ("capturedata", "http://global-env.com/capturedata/"),
            ("pharcomp", "http://global-env.com/pharcomp/"),
            ("labs", "http://global-env.com/labs/"),
            ("pubhealth_lab", "http://global-env.com/labs/pubhealth_lab/"),
            ("open", "http://global-env.com/open/"),
        ],
    );

    b.env("ex:centres", vec![a("de:envType", "HealthcareProvider")], None)?;
    b.env("ex:centre_a", vec![a("de:envType", "ClinicalTrialSite")], Some("ex:centres"))?;
    b.env("ex:centre_b", vec![a("de:envType", "ClinicalTrialSite")], Some("ex:centres"))?;
    b.env(
        "ex:capturedata",
        vec![
            a("de:envType", "DataCaptureService"),
            a("de:governance-accessType", "Restricted"),
        ],
        None,
    )?;
    b.env(
        "ex:pharcomp",
        vec![
            a("de:envType", "PharmaceuticalCompany"),
            a("de:governance-accessType", "Restricted"),
        ],
        None,
    )?;
    b.env("ex:labs", vec![a("de:envType", "ResearchCommunity")], None)?;
    b.env("ex:pubhealth_lab", vec![a("de:envType", "ResearchLab")], Some("ex:labs"))?;
    b.env(
        "ex:open",
        vec![
            a("de:envType", "Open"),
            a("de:governance-accessType", "Public"),
        ],
        None,
    )?;

    // collection at the trial sites; participants consented to secondary
    // research on anonymised versions
    for centre in ["centre_a", "centre_b"] {
        b.entity(
            &format!("{centre}:trial_data"),
            &format!("ex:{centre}"),
            vec![a("de:consent", "ExplicitSecondaryResearch")],
        )?;
        b.activity(&format!("{centre}:collect"), &format!("ex:{centre}"), "t1")?;
        b.agent(
            &format!("{centre}:agent_clinician_001"),
            &format!("ex:{centre}"),
            "dataUser",
        )?;
        b.rel(
            RelationKind::WasGeneratedBy,
            &format!("{centre}:trial_data"),
            &format!("{centre}:collect"),
        );
        b.rel(
            RelationKind::WasAssociatedWith,
            &format!("{centre}:collect"),
            &format!("{centre}:agent_clinician_001"),
        );
    }

    // electronic data capture
    b.entity("capturedata:edc_database", "ex:capturedata", vec![])?;
    b.activity("capturedata:capture", "ex:capturedata", "t2")?;
    b.agent("capturedata:agent_processor_001", "ex:capturedata", "dataProcessor")?;
    b.rel_id(RelationKind::Used, "ex:flow_centre_a", "capturedata:capture", "centre_a:trial_data");
    b.rel_id(RelationKind::Used, "ex:flow_centre_b", "capturedata:capture", "centre_b:trial_data");
    b.rel(RelationKind::WasGeneratedBy, "capturedata:edc_database", "capturedata:capture");
    b.rel(RelationKind::WasAssociatedWith, "capturedata:capture", "capturedata:agent_processor_001");

    // extraction and sharing by the pharmaceutical company
    b.entity("pharcomp:analysis_dataset", "ex:pharcomp", vec![])?;
    b.entity("pharcomp:shared_subset", "ex:pharcomp", vec![])?;
    b.activity("pharcomp:extract", "ex:pharcomp", "t3")?;
    b.activity("pharcomp:prepare_share", "ex:pharcomp", "t4")?;
    b.agent("pharcomp:agent_controller_001", "ex:pharcomp", "dataController")?;
    b.rel_id(RelationKind::Used, "ex:flow_capture_pharcomp", "pharcomp:extract", "capturedata:edc_database");
    b.rel(RelationKind::WasGeneratedBy, "pharcomp:analysis_dataset", "pharcomp:extract");
    b.rel(RelationKind::WasDerivedFrom, "pharcomp:analysis_dataset", "capturedata:edc_database");
    b.rel(RelationKind::Used, "pharcomp:prepare_share", "pharcomp:analysis_dataset");
    b.rel(RelationKind::WasGeneratedBy, "pharcomp:shared_subset", "pharcomp:prepare_share");
    b.rel(RelationKind::WasAssociatedWith, "pharcomp:extract", "pharcomp:agent_controller_001");
    b.rel(RelationKind::WasAssociatedWith, "pharcomp:prepare_share", "pharcomp:agent_controller_001");
    b.rel(RelationKind::ActedOnBehalfOf, "capturedata:agent_processor_001", "pharcomp:agent_controller_001");

    // public-health research and publication
    b.entity("pubhealth_lab:findings", "ex:pubhealth_lab", vec![])?;
    b.activity("pubhealth_lab:analysis", "ex:pubhealth_lab", "t5")?;
    b.activity("pubhealth_lab:writeup", "ex:pubhealth_lab", "t6")?;
    b.agent("pubhealth_lab:agent_researcher_001", "ex:pubhealth_lab", "dataUser")?;
    b.entity("open:journal_article", "ex:open", vec![])?;
    b.rel_id(RelationKind::Used, "ex:flow_pharcomp_lab", "pubhealth_lab:analysis", "pharcomp:shared_subset");
    b.rel(RelationKind::WasGeneratedBy, "pubhealth_lab:findings", "pubhealth_lab:analysis");
    b.rel(RelationKind::Used, "pubhealth_lab:writeup", "pubhealth_lab:findings");
    b.rel(RelationKind::WasGeneratedBy, "open:journal_article", "pubhealth_lab:writeup");
    b.rel(RelationKind::WasAssociatedWith, "pubhealth_lab:analysis", "pubhealth_lab:agent_researcher_001");
    b.rel(RelationKind::WasAssociatedWith, "pubhealth_lab:writeup", "pubhealth_lab:agent_researcher_001");

    // governance: collection/exchange contracts, and the sponsor's indirect
    // control over publication releases
    b.contract(
        "ex:contract_centres_capturedata",
        &["ex:centres", "ex:capturedata"],
        vec![a("de:instrument", "DataCollectionAgreement")],
        &["ex:flow_centre_a", "ex:flow_centre_b"],
    )?;
    b.contract(
        "ex:contract_capturedata_pharcomp",
        &["ex:capturedata", "ex:pharcomp"],
        vec![a("de:instrument", "ServiceAgreement")],
        &["ex:flow_capture_pharcomp"],
    )?;
    b.contract(
        "ex:contract_pharcomp_labs",
        &["ex:pharcomp", "ex:labs"],
        vec![a("de:instrument", "ResearchUseAgreement")],
        &["ex:flow_pharcomp_lab"],
    )?;
    b.control("ex:pharcomp", "ex:labs", ControlType::Indirect, ControlNature::Strategic, Responsibility::Indirect)?;

    // the centres→capture transfer stores data rather than deriving it
    b.annotate("ex:flow_centre_a", vec![a("de:meaning", "collectedAndStored")])?;
    b.annotate("ex:flow_centre_b", vec![a("de:meaning", "collectedAndStored")])?;

    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validation::validate;

    #[test]
    fn fixtures_validate_cleanly_in_plus_modes() {
        for id in FixtureId::ALL {
            for mode in [EncodingMode::BundlesPlus, EncodingMode::NamespacesPlus] {
                let doc = fixture(id, mode);
                let report = validate(&doc);
                assert!(
                    report.is_valid(),
                    "{} in {mode}: {:?}",
                    id.name(),
                    report.findings
                );
            }
        }
    }

    #[test]
    fn plain_modes_build_with_omissions() {
        let (doc, omissions) = build_fixture(FixtureId::GondNrds, EncodingMode::Bundle).unwrap();
        assert!(omissions.omitted.contains(&"environment nesting"));
        assert!(omissions.omitted.contains(&"contracts"));
        assert!(doc.environments().all(|e| e.parent.is_none()));
        assert!(validate(&doc).is_valid());

        let (doc, omissions) =
            build_fixture(FixtureId::GondNrds, EncodingMode::Namespace).unwrap();
        assert!(omissions.omitted.contains(&"environment relationships"));
        assert!(doc.environments().any(|e| e.parent.is_some()));
        assert!(validate(&doc).is_valid());
    }

    #[test]
    fn gond_nrds_has_expected_shape() {
        let doc = fixture(FixtureId::GondNrds, EncodingMode::BundlesPlus);
        assert_eq!(doc.environments().count(), 7);
        assert_eq!(doc.environment_roots().len(), 5);
        let q = |s: &str| s.parse::<QualifiedName>().unwrap();
        assert_eq!(
            doc.environment(&q("ex:nrds")).unwrap().parent,
            Some(q("ex:bu"))
        );
        assert_eq!(doc.contracts().count(), 3);
        assert_eq!(doc.controls().len(), 5);
        assert_eq!(doc.env_relations().len(), 3);
        assert_eq!(doc.annotations().count(), 1);
    }

    #[test]
    fn clinical_trial_exercises_everything_but_env_relations() {
        let doc = fixture(FixtureId::ClinicalTrial, EncodingMode::BundlesPlus);
        assert_eq!(doc.environment_roots().len(), 5);
        assert!(doc.env_relations().is_empty());
        assert_eq!(doc.contracts().count(), 3);
    }

    #[test]
    fn gond_nrds_exercises_every_requirement() {
        use crate::reasoning::assess_document;
        let doc = fixture(FixtureId::GondNrds, EncodingMode::BundlesPlus);
        for assessment in assess_document(&doc) {
            assert!(assessment.exercised, "{} not exercised", assessment.requirement);
            assert!(assessment.supported, "{} not supported", assessment.requirement);
        }
    }

    #[test]
    fn namespaces_plus_fixture_has_paper_uris() {
        let doc = fixture(FixtureId::GondNrds, EncodingMode::NamespacesPlus);
        let q = |s: &str| s.parse::<QualifiedName>().unwrap();
        assert_eq!(
            doc.environment(&q("ex:gond")).unwrap().uri.as_deref(),
            Some("http://global-env.com/gond/")
        );
        assert_eq!(
            doc.environment(&q("ex:nrds")).unwrap().uri.as_deref(),
            Some("http://global-env.com/bu/nrds/")
        );
    }
}
