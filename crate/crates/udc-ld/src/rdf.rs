//! RDF graphs for class records and for complex classmarks, with Turtle and
//! JSON serializations.
//!
//! Complex classmarks are atomized: blank nodes group the elements of a
//! compound notation, with predicates from the syntax vocabulary naming the
//! role of each part. Blank-node identifiers are content-derived so that
//! identical inputs serialize byte-identically.

use crate::notation::{Connector, ElementKind, NotationNode};
use crate::store::{ClassRecord, Store, Tier};
use crate::uri::{class_uri, UriConfig};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const SKOS_NS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const DCTERMS_NS: &str = "http://purl.org/dc/terms/";
/// Schema extension namespace for the UDC-specific record elements.
pub const UDC_NS: &str = "http://udcdata.info/udc-schema#";
/// Syntax vocabulary namespace for atomized classmarks.
pub const UDC_SYNTAX_NS: &str = "http://udcdata.info/udc-syntax-schema#";
/// Datatype of notation literals.
pub const UDC_NOTATION_DT: &str = "http://udcdata.info/UDCnotation";
/// Datatype marking a classmark element with no record in the store.
pub const UDC_UNRESOLVED_DT: &str = "http://udcdata.info/udc-schema#UnresolvedNotation";

/// One RDF term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal {
        value: String,
        lang: Option<String>,
        datatype: Option<String>,
    },
}

impl Term {
    pub fn iri(text: impl Into<String>) -> Term {
        Term::Iri(text.into())
    }

    pub fn literal(value: impl Into<String>) -> Term {
        Term::Literal {
            value: value.into(),
            lang: None,
            datatype: None,
        }
    }

    pub fn lang_literal(value: impl Into<String>, lang: impl Into<String>) -> Term {
        Term::Literal {
            value: value.into(),
            lang: Some(lang.into()),
            datatype: None,
        }
    }

    pub fn typed_literal(value: impl Into<String>, datatype: impl Into<String>) -> Term {
        Term::Literal {
            value: value.into(),
            lang: None,
            datatype: Some(datatype.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: String,
    pub object: Term,
}

/// An ordered list of triples. Insertion order is preserved and drives the
/// deterministic serializations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Graph {
    triples: Vec<Triple>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn push(&mut self, subject: Term, predicate: impl Into<String>, object: Term) {
        debug_assert!(matches!(subject, Term::Iri(_) | Term::Blank(_)));
        self.triples.push(Triple {
            subject,
            predicate: predicate.into(),
            object,
        });
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn extend(&mut self, other: Graph) {
        self.triples.extend(other.triples);
    }

    /// Distinct blank-node identifiers in the graph.
    pub fn blank_ids(&self) -> BTreeSet<&str> {
        let mut ids = BTreeSet::new();
        for t in &self.triples {
            if let Term::Blank(id) = &t.subject {
                ids.insert(id.as_str());
            }
            if let Term::Blank(id) = &t.object {
                ids.insert(id.as_str());
            }
        }
        ids
    }

    pub fn blank_node_count(&self) -> usize {
        self.blank_ids().len()
    }

    /// Count triples whose predicate has the given IRI.
    pub fn predicate_count(&self, predicate: &str) -> usize {
        self.triples
            .iter()
            .filter(|t| t.predicate == predicate)
            .count()
    }
}

/// Predicate of the syntax vocabulary for an element kind. The three special
/// auxiliaries share one predicate.
pub fn syntax_predicate(kind: ElementKind) -> String {
    let local = match kind {
        ElementKind::MainNumber => "main",
        ElementKind::LanguageAux => "language_aux",
        ElementKind::FormAux => "form_aux",
        ElementKind::PlaceAux => "place_aux",
        ElementKind::EthnicAux => "ethnic_aux",
        ElementKind::TimeAux => "time_aux",
        ElementKind::PropertiesAux => "properties_aux",
        ElementKind::MaterialsAux => "materials_aux",
        ElementKind::ProcessesAux => "processes_aux",
        ElementKind::PersonsAux => "persons_aux",
        ElementKind::SpecialHyphen
        | ElementKind::SpecialPointZero
        | ElementKind::SpecialApostrophe => "special_aux",
        ElementKind::AlphaExtension => "alpha_ext",
        ElementKind::OtherSystemCode => "other_system",
    };
    format!("{UDC_SYNTAX_NS}{local}")
}

/// Predicate of the syntax vocabulary for a connecting sign.
pub fn connector_predicate(connector: Connector) -> String {
    let local = match connector {
        Connector::Coordination => "coordination",
        Connector::Relation => "relation_to",
        Connector::OrderFixing => "order_fixing",
        Connector::Consecutive => "consecutive",
    };
    format!("{UDC_SYNTAX_NS}{local}")
}

fn skos(local: &str) -> String {
    format!("{SKOS_NS}{local}")
}

fn udc(local: &str) -> String {
    format!("{UDC_NS}{local}")
}

/// IRI of the concept scheme for a dataset.
pub fn scheme_iri(config: &UriConfig, tier: Tier) -> String {
    format!(
        "{}://{}.{}/udc-schema",
        config.scheme,
        tier.subdomain(),
        config.base_domain
    )
}

/// Full SKOS graph for one class record at a tier.
///
/// Every populated record field yields at least one triple; narrower edges
/// are the store-computed inverse of broader edges. Edges only point at
/// records visible at the tier.
pub fn record_graph(store: &Store, config: &UriConfig, record: &ClassRecord, tier: Tier) -> Graph {
    let mut graph = Graph::new();
    let subject = Term::iri(
        class_uri(config, tier, &record.introduced, &record.notation)
            .expect("ingested notation tokenizes"),
    );
    let target_uri = |notation: &str| -> Option<Term> {
        let target = store.lookup(tier, notation)?;
        Some(Term::iri(
            class_uri(config, tier, &target.introduced, &target.notation).ok()?,
        ))
    };

    graph.push(subject.clone(), format!("{RDF_NS}type"), Term::iri(skos("Concept")));
    graph.push(
        subject.clone(),
        skos("inScheme"),
        Term::iri(scheme_iri(config, tier)),
    );
    graph.push(
        subject.clone(),
        skos("notation"),
        Term::typed_literal(&record.notation, UDC_NOTATION_DT),
    );
    for (lang, caption) in &record.captions {
        graph.push(
            subject.clone(),
            skos("prefLabel"),
            Term::lang_literal(caption, lang),
        );
    }
    if let Some(broader) = record.broader.as_deref().and_then(target_uri) {
        graph.push(subject.clone(), skos("broader"), broader);
    }
    for narrower in store.narrower_of(&record.notation) {
        if let Some(term) = target_uri(narrower) {
            graph.push(subject.clone(), skos("narrower"), term);
        }
    }
    for related in &record.related {
        if let Some(term) = target_uri(related) {
            graph.push(subject.clone(), skos("related"), term);
        }
    }
    if let Some(note) = &record.scope_note {
        graph.push(subject.clone(), skos("scopeNote"), Term::literal(note));
    }
    for example in &record.examples {
        graph.push(subject.clone(), skos("example"), Term::literal(example));
    }
    if let Some(note) = &record.including_note {
        graph.push(subject.clone(), udc("includingNote"), Term::literal(note));
    }
    if let Some(note) = &record.application_note {
        graph.push(subject.clone(), udc("applicationNote"), Term::literal(note));
    }
    if let Some(text) = &record.revision_history {
        graph.push(subject.clone(), udc("revisionHistory"), Term::literal(text));
    }
    graph.push(
        subject.clone(),
        udc("introductionDate"),
        Term::literal(&record.introduced),
    );
    if let Some(version) = &record.cancelled {
        graph.push(subject.clone(), udc("cancellationDate"), Term::literal(version));
    }
    for replacement in &record.replaced_by {
        // replacement targets live in the MRF dataset by definition
        if let Some(target) = store.get(replacement) {
            if let Ok(uri) = class_uri(config, tier, &target.introduced, &target.notation) {
                graph.push(subject.clone(), udc("replacedBy"), Term::iri(uri));
            }
        }
    }
    if let Some(version) = &record.last_revision {
        graph.push(subject.clone(), udc("lastrevisionDate"), Term::literal(version));
    }
    graph
}

/// Atomized graph of a parsed classmark plus the term standing for the whole
/// notation (a blank node for combined notations, a class URI or literal for
/// atomic ones).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGraph {
    pub root: Term,
    pub graph: Graph,
}

/// Atomize a parse tree. `leaf_uri` supplies the class URI for a leaf
/// notation when one is resolvable at the caller's tier; unresolvable leaves
/// become literals with an unresolved-marker datatype.
pub fn complex_graph(tree: &NotationNode, leaf_uri: &dyn Fn(&str) -> Option<String>) -> ComplexGraph {
    let mut builder = ComplexBuilder {
        graph: Graph::new(),
        leaf_uri,
        used_ids: HashMap::new(),
    };
    let root = builder.term_of(tree);
    ComplexGraph {
        root,
        graph: builder.graph,
    }
}

struct ComplexBuilder<'a> {
    graph: Graph,
    leaf_uri: &'a dyn Fn(&str) -> Option<String>,
    used_ids: HashMap<String, usize>,
}

impl ComplexBuilder<'_> {
    /// Deterministic blank id: hash of the subtree's canonical text, with a
    /// counter suffix for repeated identical subtrees.
    fn blank_for(&mut self, node: &NotationNode) -> Term {
        let canonical = node.serialize();
        let mut hash: u64 = 0xcbf29ce484222325;
        for byte in canonical.bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x100000001b3);
        }
        let id = format!("n{hash:016x}");
        let count = self.used_ids.entry(id.clone()).or_insert(0);
        *count += 1;
        let id = if *count > 1 {
            format!("{id}x{}", *count - 1)
        } else {
            id
        };
        Term::Blank(id)
    }

    fn term_of(&mut self, node: &NotationNode) -> Term {
        match node {
            NotationNode::Element { raw, .. } => match (self.leaf_uri)(raw) {
                Some(uri) => Term::iri(uri),
                None => Term::typed_literal(raw, UDC_UNRESOLVED_DT),
            },
            NotationNode::Compound { head, attachments } => {
                let blank = self.blank_for(node);
                let head_term = self.term_of(head);
                let head_pred = match head.as_ref() {
                    NotationNode::Element { kind, .. } => syntax_predicate(*kind),
                    // a subgroup head keeps its own node type
                    _ => format!("{UDC_SYNTAX_NS}part"),
                };
                self.graph.push(blank.clone(), head_pred, head_term);
                for attachment in attachments {
                    let pred = match attachment {
                        NotationNode::Element { kind, .. } => syntax_predicate(*kind),
                        _ => format!("{UDC_SYNTAX_NS}part"),
                    };
                    let term = self.term_of(attachment);
                    self.graph.push(blank.clone(), pred, term);
                }
                blank
            }
            NotationNode::Connected {
                operands,
                connectors,
            } => {
                let blank = self.blank_for(node);
                let mut terms = Vec::with_capacity(operands.len());
                for operand in operands {
                    let term = self.term_of(operand);
                    self.graph.push(
                        blank.clone(),
                        format!("{UDC_SYNTAX_NS}part"),
                        term.clone(),
                    );
                    terms.push(term);
                }
                for (connector, right) in connectors.iter().zip(terms.iter().skip(1)) {
                    self.graph
                        .push(blank.clone(), connector_predicate(*connector), right.clone());
                }
                blank
            }
            NotationNode::Subgroup { inner } => {
                let blank = self.blank_for(node);
                let term = self.term_of(inner);
                self.graph
                    .push(blank.clone(), format!("{UDC_SYNTAX_NS}subgroup"), term);
                blank
            }
        }
    }
}

const PREFIXES: &[(&str, &str)] = &[
    ("rdf", RDF_NS),
    ("skos", SKOS_NS),
    ("dcterms", DCTERMS_NS),
    ("udc", UDC_NS),
    ("udcs", UDC_SYNTAX_NS),
];

/// Serialize a graph as Turtle. Output is deterministic: IRI subjects are
/// sorted, blank subjects follow in first-use order, and predicates keep
/// insertion order within a subject.
pub fn to_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, ns) in PREFIXES {
        writeln!(out, "@prefix {prefix}: <{ns}> .").unwrap();
    }
    let mut iri_subjects = BTreeSet::new();
    let mut blank_subjects = Vec::new();
    for t in graph.triples() {
        match &t.subject {
            Term::Iri(iri) => {
                iri_subjects.insert(iri.clone());
            }
            Term::Blank(id) => {
                if !blank_subjects.contains(id) {
                    blank_subjects.push(id.clone());
                }
            }
            Term::Literal { .. } => unreachable!("literal subject"),
        }
    }
    let subjects: Vec<Term> = iri_subjects
        .into_iter()
        .map(Term::Iri)
        .chain(blank_subjects.into_iter().map(Term::Blank))
        .collect();
    for subject in subjects {
        writeln!(out).unwrap();
        let statements: Vec<&Triple> = graph
            .triples()
            .iter()
            .filter(|t| t.subject == subject)
            .collect();
        write!(out, "{}", turtle_term(&subject)).unwrap();
        for (i, t) in statements.iter().enumerate() {
            if i > 0 {
                write!(out, " ;").unwrap();
            }
            write!(
                out,
                "\n    {} {}",
                turtle_predicate(&t.predicate),
                turtle_term(&t.object)
            )
            .unwrap();
        }
        writeln!(out, " .").unwrap();
    }
    out
}

fn turtle_predicate(iri: &str) -> String {
    if iri == format!("{RDF_NS}type") {
        return "a".to_string();
    }
    for (prefix, ns) in PREFIXES {
        if let Some(local) = iri.strip_prefix(ns) {
            if !local.is_empty()
                && local
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return format!("{prefix}:{local}");
            }
        }
    }
    format!("<{iri}>")
}

fn turtle_term(term: &Term) -> String {
    match term {
        Term::Iri(iri) => {
            for (prefix, ns) in PREFIXES {
                if let Some(local) = iri.strip_prefix(ns) {
                    if !local.is_empty()
                        && local
                            .chars()
                            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                    {
                        return format!("{prefix}:{local}");
                    }
                }
            }
            format!("<{iri}>")
        }
        Term::Blank(id) => format!("_:{id}"),
        Term::Literal {
            value,
            lang,
            datatype,
        } => {
            let escaped = value
                .replace('\\', "\\\\")
                .replace('"', "\\\"")
                .replace('\n', "\\n")
                .replace('\r', "\\r");
            match (lang, datatype) {
                (Some(lang), _) => format!("\"{escaped}\"@{lang}"),
                (None, Some(dt)) => format!("\"{escaped}\"^^<{dt}>"),
                (None, None) => format!("\"{escaped}\""),
            }
        }
    }
}

#[derive(Serialize)]
struct JsonTerm<'a> {
    #[serde(rename = "type")]
    term_type: &'static str,
    value: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lang: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    datatype: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonTriple<'a> {
    s: JsonTerm<'a>,
    p: &'a str,
    o: JsonTerm<'a>,
}

fn json_term(term: &Term) -> JsonTerm<'_> {
    match term {
        Term::Iri(iri) => JsonTerm {
            term_type: "iri",
            value: iri,
            lang: None,
            datatype: None,
        },
        Term::Blank(id) => JsonTerm {
            term_type: "blank",
            value: id,
            lang: None,
            datatype: None,
        },
        Term::Literal {
            value,
            lang,
            datatype,
        } => JsonTerm {
            term_type: "literal",
            value,
            lang: lang.as_deref(),
            datatype: datatype.as_deref(),
        },
    }
}

/// Serialize a graph as a JSON array of `{s, p, o}` objects, in triple
/// insertion order.
pub fn graph_to_json(graph: &Graph) -> String {
    let triples: Vec<JsonTriple<'_>> = graph
        .triples()
        .iter()
        .map(|t| JsonTriple {
            s: json_term(&t.subject),
            p: &t.predicate,
            o: json_term(&t.object),
        })
        .collect();
    serde_json::to_string(&triples).expect("serializable triples")
}

/// Blank-node-respecting graph equality: true when a bijection between the
/// two graphs' blank identifiers makes the triple multisets equal. Brute
/// force over permutations; intended for the small graphs this crate emits.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.triples().len() != b.triples().len() {
        return false;
    }
    let blanks_a: Vec<String> = a.blank_ids().iter().map(|s| s.to_string()).collect();
    let mut blanks_b: Vec<String> = b.blank_ids().iter().map(|s| s.to_string()).collect();
    if blanks_a.len() != blanks_b.len() {
        return false;
    }
    let sorted = |g: &Graph, mapping: &HashMap<&str, &str>| -> Vec<Triple> {
        let map_term = |t: &Term| match t {
            Term::Blank(id) => Term::Blank(mapping.get(id.as_str()).unwrap().to_string()),
            other => other.clone(),
        };
        let mut triples: Vec<Triple> = g
            .triples()
            .iter()
            .map(|t| Triple {
                subject: map_term(&t.subject),
                predicate: t.predicate.clone(),
                object: map_term(&t.object),
            })
            .collect();
        triples.sort();
        triples
    };
    let identity: HashMap<&str, &str> = blanks_a.iter().map(|s| (s.as_str(), s.as_str())).collect();
    let reference = sorted(a, &identity);
    permute(&mut blanks_b, 0, &mut |perm: &[String]| {
        let mapping: HashMap<&str, &str> = perm
            .iter()
            .zip(blanks_a.iter())
            .map(|(from, to)| (from.as_str(), to.as_str()))
            .collect();
        sorted(b, &mapping) == reference
    })
}

fn permute(items: &mut Vec<String>, start: usize, check: &mut dyn FnMut(&[String]) -> bool) -> bool {
    if start == items.len() {
        return check(items);
    }
    for i in start..items.len() {
        items.swap(start, i);
        if permute(items, start + 1, check) {
            items.swap(start, i);
            return true;
        }
        items.swap(start, i);
    }
    false
}
