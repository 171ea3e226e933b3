//! Shared helpers for the integration and property suites: sample-data
//! loading and a generator of grammar-valid classmarks.

// each test target uses a different subset of these helpers
#![allow(dead_code)]

use proptest::prelude::*;
use std::path::PathBuf;
use std::sync::Arc;
use udc_ld::notation::NotationNode;
use udc_ld::service::{AppState, ServiceConfig};
use udc_ld::store::Store;

/// Absolute path into the repository's `sample/` directory.
pub fn sample_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../sample")
        .join(name)
}

pub fn sample_config() -> ServiceConfig {
    ServiceConfig::load(&sample_path("config.json")).expect("sample config loads")
}

pub fn sample_store() -> Store {
    let config = sample_config();
    udc_ld::service::load_store(&config).expect("sample dataset ingests")
}

pub fn sample_state() -> Arc<AppState> {
    let config = sample_config();
    Arc::new(AppState {
        store: sample_store(),
        uri: config.uri_config(),
        tokens: config.token_tiers().expect("sample tokens parse"),
    })
}

/// Number of internal (non-leaf) nodes in a parse tree; equals the number of
/// blank nodes its atomized graph must contain.
pub fn internal_nodes(node: &NotationNode) -> usize {
    match node {
        NotationNode::Element { .. } => 0,
        NotationNode::Compound { head, attachments } => {
            1 + internal_nodes(head)
                + attachments.iter().map(internal_nodes).sum::<usize>()
        }
        NotationNode::Connected { operands, .. } => {
            1 + operands.iter().map(internal_nodes).sum::<usize>()
        }
        NotationNode::Subgroup { inner } => 1 + internal_nodes(inner),
    }
}

/// Three-version catalog for generated record sets.
pub fn tiny_catalog() -> udc_ld::store::VersionCatalog {
    udc_ld::store::VersionCatalog::new(vec!["v1".into(), "v2".into(), "v3".into()])
}

/// Pool of simple notations used to wire random record sets together.
pub fn notation_pool(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("61{i}")).collect()
}

/// One JSONL record line with the given lifecycle and membership fields.
/// Membership is monotone by construction: summary implies abridged.
pub fn record_line(
    notation: &str,
    broader: Option<&str>,
    cancelled: bool,
    replaced_by: Option<&str>,
    in_abridged: bool,
    in_summary: bool,
) -> String {
    let mut fields = vec![
        format!(r#""notation":{notation:?}"#),
        r#""kind":"main_number""#.to_string(),
        r#""introduced":"v1""#.to_string(),
    ];
    if let Some(b) = broader {
        fields.push(format!(r#""broader":{b:?}"#));
    }
    if cancelled {
        fields.push(r#""cancelled":"v2""#.to_string());
        if let Some(r) = replaced_by {
            fields.push(format!(r#""replaced_by":[{r:?}]"#));
        }
    }
    if in_abridged || in_summary {
        fields.push(r#""in_abridged":true"#.to_string());
    }
    if in_summary {
        fields.push(r#""in_summary":true"#.to_string());
    }
    format!("{{{}}}", fields.join(","))
}

/// Read the Turtle subset this crate emits back into a graph: prefix
/// declarations, one subject per block, one predicate-object pair per line.
pub fn parse_turtle(text: &str) -> udc_ld::rdf::Graph {
    use udc_ld::rdf::{Graph, Term, RDF_NS};
    let mut prefixes: std::collections::HashMap<String, String> =
        std::collections::HashMap::new();
    let term = |token: &str, prefixes: &std::collections::HashMap<String, String>| -> Term {
        if let Some(inner) = token.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            return Term::Iri(inner.to_string());
        }
        if let Some(id) = token.strip_prefix("_:") {
            return Term::Blank(id.to_string());
        }
        if let Some(rest) = token.strip_prefix('"') {
            // find the unescaped closing quote
            let mut end = None;
            let bytes = rest.as_bytes();
            let mut i = 0;
            while i < bytes.len() {
                match bytes[i] {
                    b'\\' => i += 2,
                    b'"' => {
                        end = Some(i);
                        break;
                    }
                    _ => i += 1,
                }
            }
            let end = end.expect("closing quote");
            let value = rest[..end]
                .replace("\\n", "\n")
                .replace("\\r", "\r")
                .replace("\\\"", "\"")
                .replace("\\\\", "\\");
            let suffix = &rest[end + 1..];
            if let Some(lang) = suffix.strip_prefix('@') {
                return Term::Literal {
                    value,
                    lang: Some(lang.to_string()),
                    datatype: None,
                };
            }
            if let Some(dt) = suffix
                .strip_prefix("^^<")
                .and_then(|t| t.strip_suffix('>'))
            {
                return Term::Literal {
                    value,
                    lang: None,
                    datatype: Some(dt.to_string()),
                };
            }
            return Term::Literal {
                value,
                lang: None,
                datatype: None,
            };
        }
        let (prefix, local) = token.split_once(':').expect("prefixed name");
        Term::Iri(format!("{}{}", prefixes[prefix], local))
    };
    let mut graph = Graph::new();
    let mut subject: Option<Term> = None;
    for raw_line in text.lines() {
        let line = raw_line.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("@prefix ") {
            let rest = rest.trim_end_matches('.').trim();
            let (prefix, ns) = rest.split_once(": ").expect("prefix declaration");
            let ns = ns
                .trim()
                .strip_prefix('<')
                .and_then(|t| t.strip_suffix('>'))
                .expect("namespace iri");
            prefixes.insert(prefix.to_string(), ns.to_string());
            continue;
        }
        if !line.starts_with(char::is_whitespace) {
            subject = Some(term(line.trim(), &prefixes));
            continue;
        }
        let statement = line
            .trim()
            .trim_end_matches(['.', ';'])
            .trim_end();
        let (pred_token, obj_token) = statement.split_once(' ').expect("predicate object");
        let predicate = if pred_token == "a" {
            format!("{RDF_NS}type")
        } else {
            match term(pred_token, &prefixes) {
                Term::Iri(iri) => iri,
                other => panic!("predicate must be an iri, got {other:?}"),
            }
        };
        graph.push(
            subject.clone().expect("subject before statements"),
            predicate,
            term(obj_token.trim(), &prefixes),
        );
    }
    graph
}

fn regex(pattern: &str) -> BoxedStrategy<String> {
    proptest::string::string_regex(pattern).expect("valid regex").boxed()
}

fn main_number() -> BoxedStrategy<String> {
    regex(r"[0-9]{1,3}(\.[1-9][0-9]{0,2}){0,2}")
}

fn head_aux() -> BoxedStrategy<String> {
    prop_oneof![
        regex(r"=[0-9]{1,3}(\.[1-9][0-9]{0,2})?"),
        regex(r"\(0[0-9]{0,2}(\.[1-9][0-9]{0,2})?\)"),
        regex(r"\([1-9][0-9]{0,2}(\.[1-9][0-9]{0,2})?\)"),
        regex(r"\(=[0-9]{1,3}\)"),
        regex(r#""[0-9]{1,4}(/[0-9]{1,4})?""#),
    ]
    .boxed()
}

fn attachment() -> BoxedStrategy<String> {
    prop_oneof![
        head_aux(),
        regex(r"-0[2-5][0-9]{0,2}"),
        regex(r"-[1-9][0-9]{0,2}"),
        regex(r"\.0[0-9]{1,2}"),
        regex(r"`[0-9]{1,3}"),
        regex(r"[A-Z][a-z]{0,3}"),
        regex(r"\*[A-Za-z][A-Za-z0-9]{0,3}"),
    ]
    .boxed()
}

fn compound() -> BoxedStrategy<String> {
    let head = prop_oneof![main_number(), head_aux()];
    (head, prop::collection::vec(attachment(), 0..3))
        .prop_map(|(head, attachments)| {
            let mut out = head;
            for a in attachments {
                out.push_str(&a);
            }
            out
        })
        .boxed()
}

fn connector() -> BoxedStrategy<&'static str> {
    prop_oneof![
        Just("+"),
        Just(":"),
        Just("::"),
        Just("/"),
    ]
    .boxed()
}

fn joined(operands: Vec<String>, connectors: Vec<&str>) -> String {
    let mut out = String::new();
    for (i, op) in operands.iter().enumerate() {
        if i > 0 {
            out.push_str(connectors[i - 1]);
        }
        out.push_str(op);
    }
    out
}

fn operand() -> BoxedStrategy<String> {
    // a compound, or a bracketed subgroup of compounds with optional
    // attachments after the closing bracket
    let subgroup = (
        prop::collection::vec(compound(), 2..4),
        prop::collection::vec(connector(), 3),
        prop::collection::vec(attachment(), 0..2),
    )
        .prop_map(|(operands, connectors, attachments)| {
            let connectors = connectors[..operands.len() - 1].to_vec();
            let mut out = format!("[{}]", joined(operands, connectors));
            for a in attachments {
                out.push_str(&a);
            }
            out
        });
    prop_oneof![4 => compound(), 1 => subgroup].boxed()
}

/// A grammar-valid classmark in canonical form: parsing and re-serializing
/// it must reproduce it byte-for-byte.
pub fn classmark() -> BoxedStrategy<String> {
    (
        prop::collection::vec(operand(), 1..4),
        prop::collection::vec(connector(), 3),
    )
        .prop_map(|(operands, connectors)| {
            let connectors = connectors[..operands.len() - 1].to_vec();
            joined(operands, connectors)
        })
        .boxed()
}
