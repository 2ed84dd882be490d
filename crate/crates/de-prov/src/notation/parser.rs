//! Recursive-descent parser for the extended notation.
//!
//! Element and relation statements are inserted without idempotence or
//! conflict checks: the validator, not the parser, is the arbiter of
//! well-formedness beyond syntax. Encoding-mode gating does surface here for
//! the bundle constructs (nesting, header attributes) because those are
//! syntactic forms the mode forbids.

use indexmap::IndexSet;
use serde_json::Value;

use super::json::{apply_sidecar, SIDECAR_KEYS};
use super::lexer::{lex, Spanned, Token};
use super::{NotationError, ParseError, SourceSpan};
use crate::environment::{DataEnvironment, EncodingMode, EnvRelationKind, EnvironmentError, Feature};
use crate::model::{
    AttrValue, Attribute, Element, ElementKind, ProvDocument, QualifiedName, Relation,
    RelationKind, Timestamp, DE_PREFIX,
};

pub(crate) struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> Spanned {
        let s = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        s
    }

    fn error(&self, expected: &str) -> ParseError {
        let here = self.peek();
        ParseError {
            span: here.span,
            expected: expected.to_owned(),
            found: here.token.describe(),
        }
    }

    fn expect_ident(&mut self, word: &str) -> Result<SourceSpan, ParseError> {
        match &self.peek().token {
            Token::Ident(w) if w == word => Ok(self.bump().span),
            _ => Err(self.error(&format!("`{word}`"))),
        }
    }

    fn expect(&mut self, token: Token, expected: &str) -> Result<SourceSpan, ParseError> {
        if self.peek().token == token {
            Ok(self.bump().span)
        } else {
            Err(self.error(expected))
        }
    }

    fn eat(&mut self, token: &Token) -> bool {
        if &self.peek().token == token {
            self.bump();
            true
        } else {
            false
        }
    }

    fn qname(&mut self, doc: &ProvDocument) -> Result<QualifiedName, NotationError> {
        match self.peek().token.clone() {
            Token::QName(p, l) => {
                let span = self.bump().span;
                self.resolve_qname(doc, &p, &l, span)
            }
            _ => Err(self.error("a qualified name").into()),
        }
    }

    fn resolve_qname(
        &self,
        doc: &ProvDocument,
        prefix: &str,
        local: &str,
        span: SourceSpan,
    ) -> Result<QualifiedName, NotationError> {
        if !doc.namespaces.contains(prefix) {
            return Err(ParseError {
                span,
                expected: "a declared namespace prefix".to_owned(),
                found: format!("`{prefix}:{local}` (prefix `{prefix}` is undeclared)"),
            }
            .into());
        }
        QualifiedName::new(prefix, local).map_err(NotationError::from)
    }

    /// `[key=value, ...]`
    fn attr_list(&mut self, doc: &ProvDocument) -> Result<Vec<Attribute>, NotationError> {
        self.expect(Token::LBracket, "`[` opening an attribute list")?;
        let mut attrs = Vec::new();
        if self.eat(&Token::RBracket) {
            return Ok(attrs);
        }
        loop {
            let key = self.qname(doc)?;
            self.expect(Token::Equals, "`=` after attribute key")?;
            let value = match self.peek().token.clone() {
                Token::Str(s) => {
                    self.bump();
                    if self.eat(&Token::DoublePercent) {
                        let datatype = match self.peek().token.clone() {
                            Token::QName(p, l) => {
                                self.bump();
                                format!("{p}:{l}")
                            }
                            _ => return Err(self.error("a datatype qualified name").into()),
                        };
                        match datatype.as_str() {
                            "xsd:int" | "xsd:integer" | "xsd:long" => {
                                let parsed = s.parse::<i64>().map_err(|_| ParseError {
                                    span: self.peek().span,
                                    expected: "an integer literal".to_owned(),
                                    found: format!("`\"{s}\"`"),
                                })?;
                                AttrValue::Int(parsed)
                            }
                            "xsd:string" => AttrValue::Str(s),
                            other => {
                                return Err(ParseError {
                                    span: self.peek().span,
                                    expected: "datatype xsd:int or xsd:string".to_owned(),
                                    found: format!("`{other}`"),
                                }
                                .into())
                            }
                        }
                    } else {
                        AttrValue::Str(s)
                    }
                }
                Token::Int(i) => {
                    self.bump();
                    AttrValue::Int(i)
                }
                Token::SQName(p, l) => {
                    let span = self.bump().span;
                    AttrValue::Qname(self.resolve_qname(doc, &p, &l, span)?)
                }
                _ => return Err(self.error("an attribute value").into()),
            };
            attrs.push(Attribute { key, value });
            if self.eat(&Token::Comma) {
                continue;
            }
            self.expect(Token::RBracket, "`,` or `]` in attribute list")?;
            break;
        }
        Ok(attrs)
    }

    fn optional_attrs_then_rparen(
        &mut self,
        doc: &ProvDocument,
    ) -> Result<Vec<Attribute>, NotationError> {
        if self.eat(&Token::Comma) {
            let attrs = self.attr_list(doc)?;
            self.expect(Token::RParen, "`)` closing the statement")?;
            Ok(attrs)
        } else {
            self.expect(Token::RParen, "`,` or `)`")?;
            Ok(Vec::new())
        }
    }

    fn time_or_minus(&mut self) -> Result<Option<Timestamp>, NotationError> {
        match self.peek().token.clone() {
            Token::Minus => {
                self.bump();
                Ok(None)
            }
            Token::Time(raw) => {
                let span = self.bump().span;
                chrono::DateTime::parse_from_rfc3339(&raw)
                    .map(Some)
                    .map_err(|_| {
                        ParseError {
                            span,
                            expected: "an ISO-8601 timestamp".to_owned(),
                            found: format!("`{raw}`"),
                        }
                        .into()
                    })
            }
            _ => Err(self.error("a timestamp or `-`").into()),
        }
    }
}

/// Context while descending bundle nesting.
struct BundleFrame {
    env_id: QualifiedName,
}

/// Parses extended-notation text into a document.
pub fn parse_document(text: &str) -> Result<ProvDocument, NotationError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    parser.expect_ident("document")?;

    let mode = if parser.peek().token == Token::At("mode".to_owned()) {
        parser.bump();
        match parser.peek().token.clone() {
            Token::Ident(name) => {
                let span = parser.bump().span;
                name.parse::<EncodingMode>().map_err(|_| ParseError {
                    span,
                    expected: "one of bundle, bundles+, namespace, namespaces+".to_owned(),
                    found: format!("`{name}`"),
                })?
            }
            _ => return Err(parser.error("an encoding mode name").into()),
        }
    } else {
        EncodingMode::BundlesPlus
    };

    let mut doc = ProvDocument::new(mode);
    let mut stack: Vec<BundleFrame> = Vec::new();
    let mut sidecar: Option<(Value, SourceSpan)> = None;

    loop {
        let spanned = parser.peek().clone();
        match spanned.token {
            Token::Ident(ref word) => match word.as_str() {
                "endDocument" => {
                    if let Some(frame) = stack.last() {
                        return Err(ParseError {
                            span: spanned.span,
                            expected: format!("`endBundle` closing `{}`", frame.env_id),
                            found: "`endDocument`".to_owned(),
                        }
                        .into());
                    }
                    parser.bump();
                    break;
                }
                "endBundle" => {
                    if stack.pop().is_none() {
                        return Err(ParseError {
                            span: spanned.span,
                            expected: "a statement or `endDocument`".to_owned(),
                            found: "`endBundle` without an open bundle".to_owned(),
                        }
                        .into());
                    }
                    parser.bump();
                }
                "prefix" => {
                    parser.bump();
                    let prefix = match parser.peek().token.clone() {
                        Token::Ident(p) => {
                            parser.bump();
                            p
                        }
                        _ => return Err(parser.error("a prefix token").into()),
                    };
                    let uri = match parser.peek().token.clone() {
                        Token::Uri(u) => {
                            parser.bump();
                            u
                        }
                        _ => return Err(parser.error("`<uri>`").into()),
                    };
                    doc.declare_namespace(&prefix, &uri)?;
                }
                "entity" | "agent" => {
                    let kind = if word == "entity" {
                        ElementKind::Entity
                    } else {
                        ElementKind::Agent
                    };
                    parser.bump();
                    parser.expect(Token::LParen, "`(`")?;
                    let id = parser.qname(&doc)?;
                    let attrs = parser.optional_attrs_then_rparen(&doc)?;
                    insert_element(&mut doc, &stack, Element::new(kind, id), attrs, None, None);
                }
                "activity" => {
                    parser.bump();
                    parser.expect(Token::LParen, "`(`")?;
                    let id = parser.qname(&doc)?;
                    let mut start_time = None;
                    let mut end_time = None;
                    let mut attrs = Vec::new();
                    if parser.eat(&Token::Comma) {
                        if parser.peek().token == Token::LBracket {
                            attrs = parser.attr_list(&doc)?;
                            parser.expect(Token::RParen, "`)` closing the statement")?;
                        } else {
                            start_time = parser.time_or_minus()?;
                            parser.expect(Token::Comma, "`,` before the end time")?;
                            end_time = parser.time_or_minus()?;
                            attrs = parser.optional_attrs_then_rparen(&doc)?;
                        }
                    } else {
                        parser.expect(Token::RParen, "`,` or `)`")?;
                    }
                    insert_element(
                        &mut doc,
                        &stack,
                        Element::activity(id),
                        attrs,
                        start_time,
                        end_time,
                    );
                }
                "bundle" => {
                    parser.bump();
                    parse_bundle_header(&mut parser, &mut doc, &mut stack)?;
                }
                "collection" | "memberOf" | "hadMember" | "alternateOf" | "specializationOf"
                | "wasStartedBy" | "wasEndedBy" | "wasInvalidatedBy" | "wasInfluencedBy" => {
                    return Err(ParseError {
                        span: spanned.span,
                        expected: "a supported statement".to_owned(),
                        found: format!("unsupported construct `{word}`"),
                    }
                    .into());
                }
                other => {
                    if let Ok(kind) = other.parse::<RelationKind>() {
                        parser.bump();
                        parse_relation(&mut parser, &mut doc, kind)?;
                    } else {
                        return Err(ParseError {
                            span: spanned.span,
                            expected: "a statement keyword".to_owned(),
                            found: format!("`{other}`"),
                        }
                        .into());
                    }
                }
            },
            Token::QName(ref p, ref l) => {
                // extensibility expression, e.g. de:containedIn(a, b)
                let prefix = p.clone();
                let local = l.clone();
                parser.bump();
                parse_extensibility(&mut parser, &mut doc, &prefix, &local, spanned.span)?;
            }
            Token::At(ref word) if word == "sidecar" => {
                parser.bump();
                match parser.peek().token.clone() {
                    Token::JsonBlob(raw) => {
                        let span = parser.bump().span;
                        if sidecar.is_some() {
                            return Err(ParseError {
                                span,
                                expected: "at most one @sidecar block".to_owned(),
                                found: "a second @sidecar block".to_owned(),
                            }
                            .into());
                        }
                        let value: Value =
                            serde_json::from_str(&raw).map_err(|e| ParseError {
                                span,
                                expected: "a well-formed JSON object".to_owned(),
                                found: format!("invalid JSON ({e})"),
                            })?;
                        sidecar = Some((value, span));
                    }
                    _ => return Err(parser.error("the sidecar JSON object").into()),
                }
            }
            Token::Eof => {
                return Err(ParseError {
                    span: spanned.span,
                    expected: "`endDocument`".to_owned(),
                    found: "end of input".to_owned(),
                }
                .into());
            }
            _ => return Err(parser.error("a statement").into()),
        }
    }
    if parser.peek().token != Token::Eof {
        return Err(parser.error("end of input after `endDocument`").into());
    }

    fold_descriptors(&mut doc);

    if let Some((value, span)) = sidecar {
        if let Value::Object(map) = &value {
            if let Some(stranger) = map.keys().find(|k| !SIDECAR_KEYS.contains(&k.as_str())) {
                return Err(ParseError {
                    span,
                    expected: format!("sidecar keys among {SIDECAR_KEYS:?}"),
                    found: format!("key `{stranger}`"),
                }
                .into());
            }
        }
        apply_sidecar(&mut doc, &value)?;
    }

    Ok(doc)
}

fn insert_element(
    doc: &mut ProvDocument,
    stack: &[BundleFrame],
    element: Element,
    attrs: Vec<Attribute>,
    start_time: Option<Timestamp>,
    end_time: Option<Timestamp>,
) {
    let mut element = element;
    element.attributes = attrs;
    element.start_time = start_time;
    element.end_time = end_time;
    let id = element.id.clone();
    // skip exact duplicates so serializer output re-parses to an equal
    // document; conflicting duplicates are kept for the uniqueness check
    let duplicate = doc
        .elements()
        .iter()
        .any(|e| e.id == element.id && e.kind == element.kind && *e == element);
    if !duplicate {
        doc.push_element_unchecked(element);
    }
    if let Some(frame) = stack.last() {
        if let Some(env) = doc.environment(&frame.env_id) {
            let mut env = env.clone();
            env.members.insert(id);
            doc.push_environment_unchecked(env);
        }
    }
}

fn parse_bundle_header(
    parser: &mut Parser,
    doc: &mut ProvDocument,
    stack: &mut Vec<BundleFrame>,
) -> Result<(), NotationError> {
    let (id, attrs) = if parser.peek().token == Token::LParen {
        parser.bump();
        let id = parser.qname(doc)?;
        let attrs = if parser.eat(&Token::Comma) {
            parser.attr_list(doc)?
        } else {
            Vec::new()
        };
        parser.expect(Token::RParen, "`)` closing the bundle header")?;
        (id, attrs)
    } else {
        (parser.qname(doc)?, Vec::new())
    };
    let parent = stack.last().map(|f| f.env_id.clone());
    if parent.is_some() && !doc.mode.supports(Feature::Nesting) {
        return Err(EnvironmentError::NestingUnsupported { mode: doc.mode }.into());
    }
    if !attrs.is_empty() && !doc.mode.supports(Feature::Attributes) {
        return Err(EnvironmentError::AttributesUnsupported { mode: doc.mode }.into());
    }
    if doc.environment(&id).is_some() {
        return Err(EnvironmentError::EnvironmentExists(id).into());
    }
    let mut env = DataEnvironment {
        id: id.clone(),
        uri: None,
        attributes: Vec::new(),
        parent,
        members: IndexSet::new(),
    };
    env.attributes = dedup_last_wins(attrs);
    doc.push_environment_unchecked(env);
    stack.push(BundleFrame { env_id: id });
    Ok(())
}

/// Folds descriptor entities produced by the flattening export back into the
/// structures they encode: `de:statementType="environment"` entities merge
/// into the matching environment's attributes, `de:statementType="contract"`
/// entities become contract terms.
fn fold_descriptors(doc: &mut ProvDocument) {
    let marker = |a: &Attribute| a.key.prefix() == DE_PREFIX && a.key.local() == "statementType";
    let mut keep = Vec::with_capacity(doc.elements().len());
    for element in std::mem::take(&mut doc.elements) {
        let payload: Vec<Attribute> = element
            .attributes
            .iter()
            .filter(|a| !marker(a))
            .cloned()
            .collect();
        match super::flatten::statement_type_of(&element.attributes) {
            Some("environment")
                if element.kind == ElementKind::Entity
                    && doc.environment(&element.id).is_some() =>
            {
                let mut env = doc.environment(&element.id).cloned().expect("checked");
                let mut merged = env.attributes;
                merged.extend(payload);
                env.attributes = dedup_last_wins(merged);
                doc.push_environment_unchecked(env);
            }
            Some("contract") if element.kind == ElementKind::Entity => {
                let mut contract = doc
                    .contract(&element.id)
                    .cloned()
                    .unwrap_or_else(|| crate::environment::Contract {
                        id: element.id.clone(),
                        parties: Vec::new(),
                        terms: Vec::new(),
                        governs_flows: IndexSet::new(),
                    });
                contract.terms = dedup_last_wins(payload);
                doc.push_contract_unchecked(contract);
            }
            _ => keep.push(element),
        }
    }
    doc.elements = keep;
}

/// Collapses duplicate keys keeping the latest value, then sorts canonically.
pub(crate) fn dedup_last_wins(attrs: Vec<Attribute>) -> Vec<Attribute> {
    crate::model::dedup_attrs_last_wins(attrs)
}

fn parse_relation(
    parser: &mut Parser,
    doc: &mut ProvDocument,
    kind: RelationKind,
) -> Result<(), NotationError> {
    parser.expect(Token::LParen, "`(`")?;
    let first = parser.qname(doc)?;
    let (id, subject) = if parser.eat(&Token::Semicolon) {
        (Some(first), parser.qname(doc)?)
    } else {
        (None, first)
    };
    parser.expect(Token::Comma, "`,` between relation arguments")?;
    let object = parser.qname(doc)?;
    let attrs = parser.optional_attrs_then_rparen(doc)?;
    let mut relation = Relation::new(kind, subject, object);
    relation.id = id;
    relation.attributes = attrs;
    if !doc.relations().contains(&relation) {
        doc.push_relation_unchecked(relation);
    }
    Ok(())
}

/// Extension statements in the `de:` namespace; the inverse of the flattening
/// conventions, so flattened exports re-import.
fn parse_extensibility(
    parser: &mut Parser,
    doc: &mut ProvDocument,
    prefix: &str,
    local: &str,
    span: SourceSpan,
) -> Result<(), NotationError> {
    if prefix != DE_PREFIX {
        return Err(ParseError {
            span,
            expected: "a statement keyword or a `de:` extensibility expression".to_owned(),
            found: format!("`{prefix}:{local}`"),
        }
        .into());
    }
    parser.expect(Token::LParen, "`(`")?;
    let first = parser.qname(doc)?;
    match local {
        "containedIn" => {
            parser.expect(Token::Comma, "`,`")?;
            let parent = parser.qname(doc)?;
            parser.expect(Token::RParen, "`)`")?;
            let mut env = doc
                .environment(&first)
                .cloned()
                .unwrap_or_else(|| DataEnvironment {
                    id: first.clone(),
                    uri: None,
                    attributes: Vec::new(),
                    parent: None,
                    members: IndexSet::new(),
                });
            env.parent = Some(parent);
            doc.push_environment_unchecked(env);
        }
        "hostedBy" | "ownedBy" | "managedBy" | "sharesDataWith" => {
            parser.expect(Token::Comma, "`,`")?;
            let object = parser.qname(doc)?;
            let attrs = parser.optional_attrs_then_rparen(doc)?;
            let kind = local.parse::<EnvRelationKind>().expect("matched above");
            let mut sorted = attrs;
            sorted.sort();
            doc.push_env_relation_unchecked(crate::environment::EnvironmentRelation {
                kind,
                subject: first,
                object,
                attributes: sorted,
            });
        }
        "party" | "governsFlow" => {
            parser.expect(Token::Comma, "`,`")?;
            let second = parser.qname(doc)?;
            parser.expect(Token::RParen, "`)`")?;
            let mut contract = doc
                .contract(&first)
                .cloned()
                .unwrap_or_else(|| crate::environment::Contract {
                    id: first.clone(),
                    parties: Vec::new(),
                    terms: Vec::new(),
                    governs_flows: IndexSet::new(),
                });
            if local == "party" {
                if !contract.parties.contains(&second) {
                    contract.parties.push(second);
                }
            } else {
                contract.governs_flows.insert(second);
            }
            doc.push_contract_unchecked(contract);
        }
        "control" => {
            parser.expect(Token::Comma, "`,`")?;
            let target = parser.qname(doc)?;
            let attrs = parser.optional_attrs_then_rparen(doc)?;
            let field = |name: &str| -> Result<String, NotationError> {
                attrs
                    .iter()
                    .find(|a| a.key.local() == name && a.key.prefix() == DE_PREFIX)
                    .and_then(|a| a.value.as_str().map(str::to_owned))
                    .ok_or_else(|| {
                        NotationError::from(ParseError {
                            span,
                            expected: format!("attribute de:{name} on de:control"),
                            found: "no such attribute".to_owned(),
                        })
                    })
            };
            let record = crate::environment::ControlRecord {
                holder: first,
                target,
                control_type: field("controlType")?.parse().map_err(NotationError::from)?,
                control_nature: field("controlNature")?.parse().map_err(NotationError::from)?,
                responsibility: field("responsibility")?.parse().map_err(NotationError::from)?,
            };
            doc.push_control_unchecked(record);
        }
        "annotation" => {
            parser.expect(Token::Comma, "`,`")?;
            let attrs = parser.attr_list(doc)?;
            parser.expect(Token::RParen, "`)`")?;
            doc.push_annotation_unchecked(first, dedup_last_wins(attrs));
        }
        other => {
            return Err(ParseError {
                span,
                expected: "a known de: extensibility expression".to_owned(),
                found: format!("`de:{other}`"),
            }
            .into())
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QualifiedName {
        s.parse().unwrap()
    }

    #[test]
    fn empty_document_parses() {
        let doc = parse_document("document\nendDocument").unwrap();
        assert_eq!(doc.mode, EncodingMode::BundlesPlus);
        assert_eq!(doc.elements().len(), 0);
        assert_eq!(doc.relations().len(), 0);
    }

    #[test]
    fn extended_bundle_header_carries_attributes() {
        let text = r#"document
  prefix ex <http://example.org/f/>
  prefix de <http://example.org/de-prov/ns#>
  bundle (ex:GOND, [de:envType="Government", de:governance-accessType="Restricted", de:governance-userdefinition="TrainedLevel2", de:infrastructure="ISO27001"])
  endBundle
endDocument"#;
        let doc = parse_document(text).unwrap();
        let env = doc.environment(&q("ex:GOND")).unwrap();
        assert_eq!(env.attributes.len(), 4);
        assert_eq!(
            env.attr(&q("de:envType")),
            Some(&AttrValue::Str("Government".into()))
        );
    }

    #[test]
    fn nested_bundle_under_plain_header_is_unsupported() {
        let text = r#"document
  @mode bundle
  prefix ex <http://example.org/f/>
  bundle ex:outer
    bundle ex:inner
    endBundle
  endBundle
endDocument"#;
        let err = parse_document(text).unwrap_err();
        assert!(matches!(
            err,
            NotationError::Environment(EnvironmentError::NestingUnsupported { .. })
        ));
    }

    #[test]
    fn nested_bundles_record_parent_and_members() {
        let text = r#"document
  prefix ex <http://example.org/f/>
  bundle ex:outer
    entity(ex:e1)
    bundle ex:inner
      entity(ex:e2)
    endBundle
  endBundle
endDocument"#;
        let doc = parse_document(text).unwrap();
        assert_eq!(
            doc.environment(&q("ex:inner")).unwrap().parent,
            Some(q("ex:outer"))
        );
        assert_eq!(doc.environment_of(&q("ex:e1")), Some(&q("ex:outer")));
        assert_eq!(doc.environment_of(&q("ex:e2")), Some(&q("ex:inner")));
    }

    #[test]
    fn relation_with_id_and_attrs() {
        let text = r#"document
  prefix ex <http://example.org/f/>
  prefix de <http://example.org/de-prov/ns#>
  used(ex:flow1; ex:ingest, ex:extract, [de:note="x"])
endDocument"#;
        let doc = parse_document(text).unwrap();
        let rel = doc.relation_by_id(&q("ex:flow1")).unwrap();
        assert_eq!(rel.kind, RelationKind::Used);
        assert_eq!(rel.subject, q("ex:ingest"));
        assert_eq!(rel.attributes.len(), 1);
    }

    #[test]
    fn undeclared_prefix_is_parse_error_with_span() {
        let text = "document\n  entity(ghost:e)\nendDocument";
        let err = parse_document(text).unwrap_err();
        let NotationError::Parse(parse) = err else {
            panic!("expected parse error, got {err:?}");
        };
        assert_eq!(parse.span.start_line, 2);
        assert!(parse.found.contains("ghost"));
    }

    #[test]
    fn unsupported_construct_named_in_error() {
        let text = "document\n  specializationOf(ex:a, ex:b)\nendDocument";
        let err = parse_document(text).unwrap_err();
        let NotationError::Parse(parse) = err else {
            panic!("expected parse error");
        };
        assert!(parse.found.contains("unsupported construct"));
    }

    #[test]
    fn conflicting_duplicates_are_kept_for_the_validator() {
        let text = r#"document
  prefix ex <http://example.org/f/>
  prefix de <http://example.org/de-prov/ns#>
  entity(ex:e, [de:v="1"])
  entity(ex:e, [de:v="2"])
endDocument"#;
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.elements().len(), 2);
    }

    #[test]
    fn activity_times_parse() {
        let text = r#"document
  prefix ex <http://example.org/f/>
  activity(ex:a, 2024-01-01T00:00:00+00:00, 2024-01-02T00:00:00+00:00)
endDocument"#;
        let doc = parse_document(text).unwrap();
        let a = doc.lookup(&q("ex:a")).unwrap();
        assert!(a.start_time.is_some() && a.end_time.is_some());
    }

    #[test]
    fn mode_header_round_trips_names() {
        for (name, mode) in [
            ("bundle", EncodingMode::Bundle),
            ("namespace", EncodingMode::Namespace),
            ("namespaces+", EncodingMode::NamespacesPlus),
        ] {
            let text = format!("document\n@mode {name}\nendDocument");
            let doc = parse_document(&text).unwrap();
            assert_eq!(doc.mode, mode, "{name}");
        }
    }

    #[test]
    fn extensibility_contained_in_rewires_parent() {
        let text = r#"document
  prefix ex <http://example.org/f/>
  prefix de <http://example.org/de-prov/ns#>
  bundle ex:bu
  endBundle
  bundle ex:nrds
  endBundle
  de:containedIn(ex:nrds, ex:bu)
endDocument"#;
        let doc = parse_document(text).unwrap();
        assert_eq!(
            doc.environment(&q("ex:nrds")).unwrap().parent,
            Some(q("ex:bu"))
        );
    }

    #[test]
    fn trailing_garbage_rejected() {
        let err = parse_document("document endDocument entity(ex:e)").unwrap_err();
        assert!(matches!(err, NotationError::Parse(_)));
    }
}
