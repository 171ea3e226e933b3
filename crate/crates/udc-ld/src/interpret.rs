//! Element-by-element interpretation of a classmark against the class store.
//!
//! A parse outcome pairs the syntactic decomposition with whatever the store
//! knows about each leaf at the requesting tier: caption, introduction
//! version, class URI and lifecycle status. Leaves that are unknown — or
//! invisible at the tier — carry no record data at all, so a Summary response
//! never leaks MRF captions or URIs.

use crate::notation::{self, FlatItem, NotationError, NotationNode};
use crate::store::{Resolution, Store, Tier};
use crate::uri::{class_uri, UriConfig};
use serde::Serialize;
use std::fmt::Write as _;

/// One row of the element table: a leaf element or a connecting sign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementEntry {
    pub notation: String,
    /// Element kind name, or `"connector"` for connecting signs.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caption: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uri: Option<String>,
    /// `"active"`, `"cancelled"` or `"unknown"`; absent for connectors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub replaced_by: Vec<String>,
}

/// Interpretation of a full classmark at one tier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParseOutcome {
    pub input: String,
    pub elements: Vec<ElementEntry>,
    pub tree: NotationNode,
}

/// Parse a classmark and annotate every leaf with store data visible at the
/// tier.
pub fn interpret(
    store: &Store,
    config: &UriConfig,
    tier: Tier,
    lang: &str,
    raw: &str,
) -> Result<ParseOutcome, NotationError> {
    let tree = notation::parse(raw)?;
    let mut elements = Vec::new();
    for item in tree.flat_elements() {
        match item {
            FlatItem::Element { raw, kind } => {
                let mut entry = ElementEntry {
                    notation: raw.to_string(),
                    kind: kind.name().to_string(),
                    caption: None,
                    version: None,
                    uri: None,
                    status: Some("unknown".into()),
                    replaced_by: Vec::new(),
                };
                if let Some(record) = store.lookup(tier, raw) {
                    entry.caption = record.caption(lang).map(str::to_string);
                    entry.version = Some(record.introduced.clone());
                    entry.uri =
                        class_uri(config, tier, &record.introduced, &record.notation).ok();
                    if record.cancelled.is_some() {
                        entry.status = Some("cancelled".into());
                        // resolve() may error only on cyclic data, which
                        // ingestion never produces for a single record chain
                        if let Ok(Resolution::Cancelled { chain, .. }) = store.resolve(raw) {
                            if let Some(link) = chain.first() {
                                entry.replaced_by = vec![link.replaced_by.to_string()];
                            }
                        }
                        if entry.replaced_by.is_empty() {
                            entry.replaced_by = record.replaced_by.to_vec();
                        }
                    } else {
                        entry.status = Some("active".into());
                    }
                }
                elements.push(entry);
            }
            FlatItem::Connector(conn) => elements.push(ElementEntry {
                notation: conn.glyph().to_string(),
                kind: "connector".into(),
                caption: Some(conn.label().to_string()),
                version: None,
                uri: None,
                status: None,
                replaced_by: Vec::new(),
            }),
        }
    }
    Ok(ParseOutcome {
        input: tree.serialize(),
        elements,
        tree,
    })
}

impl ParseOutcome {
    /// Compact JSON body, identical between the CLI and the HTTP service.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable outcome")
    }

    /// True when every leaf element resolved to a caption.
    pub fn fully_captioned(&self) -> bool {
        self.elements
            .iter()
            .filter(|e| e.kind != "connector")
            .all(|e| e.caption.is_some())
    }

    /// Reading-order sentence built from the captions, when complete.
    pub fn caption_sentence(&self) -> Option<String> {
        if !self.fully_captioned() {
            return None;
        }
        let parts: Vec<&str> = self
            .elements
            .iter()
            .filter_map(|e| e.caption.as_deref())
            .collect();
        Some(parts.join(" — "))
    }

    /// Minimal HTML page with the caption sentence and element table.
    pub fn to_html(&self) -> String {
        let mut out = String::new();
        out.push_str("<!DOCTYPE html>\n<html>\n<head>\n");
        let _ = writeln!(out, "<meta charset=\"utf-8\">");
        let _ = writeln!(out, "<title>{}</title>", escape_html(&self.input));
        out.push_str("</head>\n<body>\n");
        let _ = writeln!(out, "<h1><code>{}</code></h1>", escape_html(&self.input));
        if let Some(sentence) = self.caption_sentence() {
            let _ = writeln!(out, "<p>{}</p>", escape_html(&sentence));
        }
        out.push_str("<table>\n<tr><th>Notation</th><th>Kind</th><th>Caption</th><th>Version</th></tr>\n");
        for e in &self.elements {
            out.push_str("<tr><td>");
            match &e.uri {
                Some(uri) => {
                    let _ = write!(
                        out,
                        "<a href=\"{}\"><code>{}</code></a>",
                        escape_html(uri),
                        escape_html(&e.notation)
                    );
                }
                None => {
                    let _ = write!(out, "<code>{}</code>", escape_html(&e.notation));
                }
            }
            let _ = writeln!(
                out,
                "</td><td>{}</td><td>{}</td><td>{}</td></tr>",
                escape_html(&e.kind),
                escape_html(e.caption.as_deref().unwrap_or("")),
                escape_html(e.version.as_deref().unwrap_or(""))
            );
        }
        out.push_str("</table>\n");
        out.push_str("<p><a href=\"?format=ttl\">Turtle</a></p>\n");
        out.push_str("</body>\n</html>\n");
        out
    }
}

fn escape_html(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
