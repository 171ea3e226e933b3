//! Versioned class records: ingestion, lookup, deprecation chains and
//! version change lists.
//!
//! Records for all three datasets live in a single immutable store; tier
//! membership is carried per record as nested flags (a Summary record is
//! always part of the Abridged set, which is always part of the MRF set).

use crate::notation::{self, ElementKind, NotationNode};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use thiserror::Error;

/// Access level of a dataset. Ordering follows set inclusion:
/// Summary ⊆ Abridged ⊆ Mrf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Summary,
    Abridged,
    Mrf,
}

impl Tier {
    /// Host prefix used in class URIs and dataset path segments.
    pub fn subdomain(&self) -> &'static str {
        match self {
            Tier::Summary => "udcsummary",
            Tier::Abridged => "abridged",
            Tier::Mrf => "mrf",
        }
    }

    pub fn parse(s: &str) -> Option<Tier> {
        match s {
            "summary" | "udcsummary" => Some(Tier::Summary),
            "abridged" => Some(Tier::Abridged),
            "mrf" => Some(Tier::Mrf),
            _ => None,
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Summary => "summary",
            Tier::Abridged => "abridged",
            Tier::Mrf => "mrf",
        })
    }
}

/// Kind of the class carried by a record: a single element kind, or
/// `combined` for synthesized notations stored as one record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    MainNumber,
    LanguageAux,
    FormAux,
    PlaceAux,
    EthnicAux,
    TimeAux,
    PropertiesAux,
    MaterialsAux,
    ProcessesAux,
    PersonsAux,
    SpecialHyphen,
    SpecialPointZero,
    SpecialApostrophe,
    AlphaExtension,
    OtherSystemCode,
    Combined,
}

impl From<ElementKind> for RecordKind {
    fn from(kind: ElementKind) -> Self {
        match kind {
            ElementKind::MainNumber => RecordKind::MainNumber,
            ElementKind::LanguageAux => RecordKind::LanguageAux,
            ElementKind::FormAux => RecordKind::FormAux,
            ElementKind::PlaceAux => RecordKind::PlaceAux,
            ElementKind::EthnicAux => RecordKind::EthnicAux,
            ElementKind::TimeAux => RecordKind::TimeAux,
            ElementKind::PropertiesAux => RecordKind::PropertiesAux,
            ElementKind::MaterialsAux => RecordKind::MaterialsAux,
            ElementKind::ProcessesAux => RecordKind::ProcessesAux,
            ElementKind::PersonsAux => RecordKind::PersonsAux,
            ElementKind::SpecialHyphen => RecordKind::SpecialHyphen,
            ElementKind::SpecialPointZero => RecordKind::SpecialPointZero,
            ElementKind::SpecialApostrophe => RecordKind::SpecialApostrophe,
            ElementKind::AlphaExtension => RecordKind::AlphaExtension,
            ElementKind::OtherSystemCode => RecordKind::OtherSystemCode,
        }
    }
}

/// One UDC class as ingested from a record file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub notation: String,
    pub kind: RecordKind,
    #[serde(default)]
    pub captions: BTreeMap<String, String>,
    #[serde(default)]
    pub broader: Option<String>,
    #[serde(default)]
    pub related: Vec<String>,
    #[serde(default)]
    pub scope_note: Option<String>,
    #[serde(default)]
    pub including_note: Option<String>,
    #[serde(default)]
    pub application_note: Option<String>,
    #[serde(default)]
    pub examples: Vec<String>,
    #[serde(default)]
    pub revision_history: Option<String>,
    pub introduced: String,
    #[serde(default)]
    pub cancelled: Option<String>,
    #[serde(default)]
    pub replaced_by: Vec<String>,
    #[serde(default)]
    pub last_revision: Option<String>,
    #[serde(default)]
    pub legacy_ids: Vec<String>,
    #[serde(default)]
    pub in_summary: bool,
    #[serde(default)]
    pub in_abridged: bool,
}

impl ClassRecord {
    pub fn visible_at(&self, tier: Tier) -> bool {
        match tier {
            Tier::Summary => self.in_summary,
            Tier::Abridged => self.in_abridged,
            Tier::Mrf => true,
        }
    }

    /// Lowest tier at which the record is visible.
    pub fn lowest_tier(&self) -> Tier {
        if self.in_summary {
            Tier::Summary
        } else if self.in_abridged {
            Tier::Abridged
        } else {
            Tier::Mrf
        }
    }

    /// Caption in the requested language, falling back to English and then
    /// to any available language.
    pub fn caption(&self, lang: &str) -> Option<&str> {
        self.captions
            .get(lang)
            .or_else(|| self.captions.get("en"))
            .or_else(|| self.captions.values().next())
            .map(String::as_str)
    }
}

/// Chronological catalog of MRF version labels. Order is exactly the order
/// in the catalog file; two-digit labels wrap the century, so it is never
/// inferred from the digits.
#[derive(Debug, Clone)]
pub struct VersionCatalog {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl VersionCatalog {
    pub fn new(labels: Vec<String>) -> Self {
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        VersionCatalog { labels, index }
    }

    pub fn from_json(json: &str) -> Result<Self, StoreError> {
        let labels: Vec<String> = serde_json::from_str(json).map_err(|e| StoreError::Ingest {
            line: 0,
            field: "version catalog".into(),
            reason: e.to_string(),
        })?;
        Ok(Self::new(labels))
    }

    pub fn load(path: &Path) -> Result<Self, StoreError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("ingest error at line {line} ({field}): {reason}")]
    Ingest {
        line: usize,
        field: String,
        reason: String,
    },
    #[error("cycle detected at notation {notation}")]
    Cycle { notation: String },
    #[error("version {from} is not before {to}")]
    Order { from: String, to: String },
}

/// Lifecycle verdict for a notation.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolution<'a> {
    Active(&'a ClassRecord),
    Cancelled {
        chain: Vec<ChainLink<'a>>,
        terminal: Terminal<'a>,
    },
    Unknown,
}

/// One hop of a replacement chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainLink<'a> {
    pub record: &'a ClassRecord,
    pub cancelled_in: &'a str,
    pub replaced_by: &'a str,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Terminal<'a> {
    Active(&'a ClassRecord),
    DeadEnd,
}

/// Records introduced and cancelled between two versions.
#[derive(Debug, Clone)]
pub struct Changes<'a> {
    pub introduced: Vec<&'a ClassRecord>,
    pub cancelled: Vec<&'a ClassRecord>,
}

/// Immutable store of class records. All query operations are read-only.
#[derive(Debug)]
pub struct Store {
    catalog: VersionCatalog,
    records: Vec<ClassRecord>,
    by_notation: HashMap<String, usize>,
    by_legacy: HashMap<String, usize>,
    narrower: HashMap<String, Vec<String>>,
}

impl Store {
    /// Ingest line-delimited JSON record files against a version catalog.
    /// Lines that are empty or start with `#` are skipped.
    pub fn ingest_files<P: AsRef<Path>>(
        record_files: &[P],
        catalog_file: &Path,
    ) -> Result<Store, StoreError> {
        let catalog = VersionCatalog::load(catalog_file)?;
        let mut records = Vec::new();
        for path in record_files {
            let file = std::fs::File::open(path.as_ref())?;
            Self::read_records(std::io::BufReader::new(file), &catalog, &mut records)?;
        }
        Self::build(catalog, records)
    }

    /// Ingest from in-memory JSONL text.
    pub fn ingest_str(records_jsonl: &str, catalog: VersionCatalog) -> Result<Store, StoreError> {
        let mut records = Vec::new();
        Self::read_records(records_jsonl.as_bytes(), &catalog, &mut records)?;
        Self::build(catalog, records)
    }

    fn read_records<R: BufRead>(
        reader: R,
        catalog: &VersionCatalog,
        out: &mut Vec<ClassRecord>,
    ) -> Result<(), StoreError> {
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let record: ClassRecord =
                serde_json::from_str(trimmed).map_err(|e| StoreError::Ingest {
                    line: line_no,
                    field: "record".into(),
                    reason: e.to_string(),
                })?;
            Self::validate_record(&record, line_no, catalog)?;
            out.push(record);
        }
        Ok(())
    }

    fn validate_record(
        record: &ClassRecord,
        line: usize,
        catalog: &VersionCatalog,
    ) -> Result<(), StoreError> {
        let err = |field: &str, reason: String| StoreError::Ingest {
            line,
            field: field.into(),
            reason,
        };
        let tree = notation::parse(&record.notation)
            .map_err(|e| err("notation", format!("{} in {:?}", e, record.notation)))?;
        let derived = match &tree {
            NotationNode::Element { kind, .. } => RecordKind::from(*kind),
            _ => RecordKind::Combined,
        };
        if record.kind != derived {
            return Err(err(
                "kind",
                format!("{:?} does not match parsed notation ({:?})", record.kind, derived),
            ));
        }
        let intro = catalog
            .position(&record.introduced)
            .ok_or_else(|| err("introduced", format!("unknown version {:?}", record.introduced)))?;
        if let Some(cancelled) = &record.cancelled {
            let pos = catalog
                .position(cancelled)
                .ok_or_else(|| err("cancelled", format!("unknown version {cancelled:?}")))?;
            if pos < intro {
                return Err(err(
                    "cancelled",
                    format!("{} precedes introduction version {}", cancelled, record.introduced),
                ));
            }
        } else if !record.replaced_by.is_empty() {
            return Err(err(
                "replaced_by",
                "replacement set on a record without a cancellation version".into(),
            ));
        }
        if let Some(last) = &record.last_revision {
            if !catalog.contains(last) {
                return Err(err("last_revision", format!("unknown version {last:?}")));
            }
        }
        if record.in_summary && !record.in_abridged {
            return Err(err(
                "in_summary",
                "summary membership requires abridged membership".into(),
            ));
        }
        Ok(())
    }

    fn build(catalog: VersionCatalog, records: Vec<ClassRecord>) -> Result<Store, StoreError> {
        let mut by_notation = HashMap::new();
        let mut by_legacy = HashMap::new();
        let mut seen = HashMap::new();
        for (idx, record) in records.iter().enumerate() {
            let line = idx + 1;
            if seen
                .insert((record.notation.clone(), record.introduced.clone()), idx)
                .is_some()
            {
                return Err(StoreError::Ingest {
                    line,
                    field: "notation".into(),
                    reason: format!(
                        "duplicate record for ({}, {})",
                        record.notation, record.introduced
                    ),
                });
            }
            by_notation.insert(record.notation.clone(), idx);
            for id in &record.legacy_ids {
                if by_legacy.insert(id.clone(), idx).is_some() {
                    return Err(StoreError::Ingest {
                        line,
                        field: "legacy_ids".into(),
                        reason: format!("legacy id {id} maps to more than one record"),
                    });
                }
            }
        }
        // cross-reference pass: every target must exist in the mrf dataset
        for (idx, record) in records.iter().enumerate() {
            let line = idx + 1;
            let check = |field: &str, target: &str| -> Result<(), StoreError> {
                if by_notation.contains_key(target) {
                    Ok(())
                } else {
                    Err(StoreError::Ingest {
                        line,
                        field: field.into(),
                        reason: format!("dangling reference to {target:?}"),
                    })
                }
            };
            if let Some(b) = &record.broader {
                check("broader", b)?;
            }
            for r in &record.related {
                check("related", r)?;
            }
            for r in &record.replaced_by {
                check("replaced_by", r)?;
            }
        }
        let mut narrower: HashMap<String, Vec<String>> = HashMap::new();
        for record in &records {
            if let Some(b) = &record.broader {
                narrower
                    .entry(b.clone())
                    .or_default()
                    .push(record.notation.clone());
            }
        }
        for children in narrower.values_mut() {
            children.sort();
        }
        Ok(Store {
            catalog,
            records,
            by_notation,
            by_legacy,
            narrower,
        })
    }

    pub fn catalog(&self) -> &VersionCatalog {
        &self.catalog
    }

    pub fn records(&self) -> &[ClassRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record for a notation regardless of tier membership.
    pub fn get(&self, notation: &str) -> Option<&ClassRecord> {
        self.by_notation.get(notation).map(|&i| &self.records[i])
    }

    /// Record for a notation if visible at the tier.
    pub fn lookup(&self, tier: Tier, notation: &str) -> Option<&ClassRecord> {
        self.get(notation).filter(|r| r.visible_at(tier))
    }

    /// Record holding a legacy identifier.
    pub fn by_legacy_id(&self, id: &str) -> Option<&ClassRecord> {
        self.by_legacy.get(id).map(|&i| &self.records[i])
    }

    /// Notations whose `broader` points at this notation, sorted.
    pub fn narrower_of(&self, notation: &str) -> &[String] {
        self.narrower
            .get(notation)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Follow a notation's replacement chain to its verdict. The chain is
    /// walked transitively until an active record or a dead end; revisiting
    /// a notation is a cycle error.
    pub fn resolve(&self, notation: &str) -> Result<Resolution<'_>, StoreError> {
        let mut record = match self.get(notation) {
            Some(r) => r,
            None => return Ok(Resolution::Unknown),
        };
        if record.cancelled.is_none() {
            return Ok(Resolution::Active(record));
        }
        let mut chain = Vec::new();
        let mut visited = vec![record.notation.as_str()];
        loop {
            let cancelled_in = record.cancelled.as_deref().expect("cancelled record");
            let target = match record.replaced_by.first() {
                Some(t) => t.as_str(),
                None => {
                    return Ok(Resolution::Cancelled {
                        chain,
                        terminal: Terminal::DeadEnd,
                    })
                }
            };
            chain.push(ChainLink {
                record,
                cancelled_in,
                replaced_by: target,
            });
            if visited.contains(&target) {
                return Err(StoreError::Cycle {
                    notation: target.to_string(),
                });
            }
            visited.push(target);
            record = match self.get(target) {
                Some(r) => r,
                None => {
                    return Ok(Resolution::Cancelled {
                        chain,
                        terminal: Terminal::DeadEnd,
                    })
                }
            };
            if record.cancelled.is_none() {
                return Ok(Resolution::Cancelled {
                    chain,
                    terminal: Terminal::Active(record),
                });
            }
        }
    }

    /// Walk the broader chain upward and return the first record visible at
    /// the tier; `None` when the chain exhausts without one.
    pub fn fallback_ancestor(
        &self,
        notation: &str,
        tier: Tier,
    ) -> Result<Option<&ClassRecord>, StoreError> {
        let mut record = match self.get(notation) {
            Some(r) => r,
            None => return Ok(None),
        };
        let mut visited = vec![record.notation.as_str()];
        loop {
            if record.visible_at(tier) {
                return Ok(Some(record));
            }
            let broader = match &record.broader {
                Some(b) => b.as_str(),
                None => return Ok(None),
            };
            if visited.contains(&broader) {
                return Err(StoreError::Cycle {
                    notation: broader.to_string(),
                });
            }
            visited.push(broader);
            record = match self.get(broader) {
                Some(r) => r,
                None => return Ok(None),
            };
        }
    }

    /// Records introduced and cancelled in the half-open version interval
    /// (from, to]. `from` must precede `to` in catalog order.
    pub fn list_changes(&self, from: &str, to: &str) -> Result<Changes<'_>, StoreError> {
        let from_pos = self
            .catalog
            .position(from)
            .ok_or_else(|| StoreError::Order {
                from: from.to_string(),
                to: to.to_string(),
            })?;
        let to_pos = self.catalog.position(to).ok_or_else(|| StoreError::Order {
            from: from.to_string(),
            to: to.to_string(),
        })?;
        if from_pos >= to_pos {
            return Err(StoreError::Order {
                from: from.to_string(),
                to: to.to_string(),
            });
        }
        let in_window = |label: &str| {
            self.catalog
                .position(label)
                .map(|p| p > from_pos && p <= to_pos)
                .unwrap_or(false)
        };
        let mut introduced: Vec<&ClassRecord> = self
            .records
            .iter()
            .filter(|r| in_window(&r.introduced))
            .collect();
        let mut cancelled: Vec<&ClassRecord> = self
            .records
            .iter()
            .filter(|r| r.cancelled.as_deref().map(in_window).unwrap_or(false))
            .collect();
        introduced.sort_by(|a, b| a.notation.cmp(&b.notation));
        cancelled.sort_by(|a, b| a.notation.cmp(&b.notation));
        Ok(Changes {
            introduced,
            cancelled,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> VersionCatalog {
        VersionCatalog::new(
            ["mrf92", "mrf93", "mrf94", "mrf11", "mrf12"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
    }

    fn record(notation: &str, caption: &str) -> String {
        format!(
            r#"{{"notation":{n:?},"kind":"main_number","captions":{{"en":{c:?}}},"introduced":"mrf92","in_summary":true,"in_abridged":true}}"#,
            n = notation,
            c = caption
        )
    }

    #[test]
    fn ingest_empty_file_gives_empty_store() {
        let store = Store::ingest_str("", catalog()).unwrap();
        assert!(store.is_empty());
    }

    #[test]
    fn ingest_skips_comment_lines() {
        let text = format!("# comment\n\n{}\n", record("94", "General History"));
        let store = Store::ingest_str(&text, catalog()).unwrap();
        assert_eq!(store.len(), 1);
    }

    #[test]
    fn ingest_rejects_dangling_replacement() {
        let text = r#"{"notation":"930.9","kind":"main_number","introduced":"mrf92","cancelled":"mrf94","replaced_by":["94"]}"#;
        let err = Store::ingest_str(text, catalog()).unwrap_err();
        match err {
            StoreError::Ingest { field, reason, .. } => {
                assert_eq!(field, "replaced_by");
                assert!(reason.contains("dangling"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ingest_rejects_duplicates_and_bad_membership() {
        let dup = format!("{}\n{}", record("94", "a"), record("94", "b"));
        assert!(matches!(
            Store::ingest_str(&dup, catalog()),
            Err(StoreError::Ingest { .. })
        ));

        let bad = r#"{"notation":"94","kind":"main_number","introduced":"mrf92","in_summary":true,"in_abridged":false}"#;
        assert!(matches!(
            Store::ingest_str(bad, catalog()),
            Err(StoreError::Ingest { .. })
        ));
    }

    #[test]
    fn ingest_rejects_unknown_version_and_kind_mismatch() {
        let bad_version = r#"{"notation":"94","kind":"main_number","introduced":"mrf77"}"#;
        assert!(Store::ingest_str(bad_version, catalog()).is_err());

        let bad_kind = r#"{"notation":"(492)","kind":"main_number","introduced":"mrf93"}"#;
        assert!(Store::ingest_str(bad_kind, catalog()).is_err());

        let bad_order = r#"{"notation":"94","kind":"main_number","introduced":"mrf94","cancelled":"mrf92"}"#;
        assert!(Store::ingest_str(bad_order, catalog()).is_err());
    }

    #[test]
    fn resolve_cancelled_chain() {
        let text = concat!(
            r#"{"notation":"930.9","kind":"main_number","introduced":"mrf92","cancelled":"mrf94","replaced_by":["94"]}"#,
            "\n",
            r#"{"notation":"94","kind":"main_number","captions":{"en":"General History"},"introduced":"mrf94"}"#,
        );
        let store = Store::ingest_str(text, catalog()).unwrap();
        match store.resolve("930.9").unwrap() {
            Resolution::Cancelled { chain, terminal } => {
                assert_eq!(chain.len(), 1);
                assert_eq!(chain[0].cancelled_in, "mrf94");
                assert_eq!(chain[0].replaced_by, "94");
                match terminal {
                    Terminal::Active(r) => assert_eq!(r.caption("en"), Some("General History")),
                    other => panic!("unexpected {other:?}"),
                }
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            store.resolve("94").unwrap(),
            Resolution::Active(_)
        ));
        assert!(matches!(
            store.resolve("000000").unwrap(),
            Resolution::Unknown
        ));
    }

    #[test]
    fn resolve_detects_cycles() {
        let text = concat!(
            r#"{"notation":"1","kind":"main_number","introduced":"mrf92","cancelled":"mrf93","replaced_by":["2"]}"#,
            "\n",
            r#"{"notation":"2","kind":"main_number","introduced":"mrf92","cancelled":"mrf93","replaced_by":["1"]}"#,
        );
        let store = Store::ingest_str(text, catalog()).unwrap();
        assert!(matches!(
            store.resolve("1"),
            Err(StoreError::Cycle { .. })
        ));
    }

    #[test]
    fn resolve_dead_end_without_replacement() {
        let text = r#"{"notation":"930.9","kind":"main_number","introduced":"mrf92","cancelled":"mrf94"}"#;
        let store = Store::ingest_str(text, catalog()).unwrap();
        match store.resolve("930.9").unwrap() {
            Resolution::Cancelled { chain, terminal } => {
                assert!(chain.is_empty());
                assert_eq!(terminal, Terminal::DeadEnd);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fallback_walks_broader_chain() {
        let text = concat!(
            r#"{"notation":"512.7","kind":"main_number","introduced":"mrf92","in_summary":true,"in_abridged":true}"#,
            "\n",
            r#"{"notation":"512.73","kind":"main_number","introduced":"mrf92","broader":"512.7"}"#,
            "\n",
            r#"{"notation":"512.731","kind":"main_number","introduced":"mrf92","broader":"512.73"}"#,
        );
        let store = Store::ingest_str(text, catalog()).unwrap();
        let hit = store.fallback_ancestor("512.731", Tier::Summary).unwrap();
        assert_eq!(hit.map(|r| r.notation.as_str()), Some("512.7"));
        // already visible: the record itself
        let hit = store.fallback_ancestor("512.7", Tier::Summary).unwrap();
        assert_eq!(hit.map(|r| r.notation.as_str()), Some("512.7"));
        // summary-invisible root exhausts the chain
        let text = r#"{"notation":"512.73","kind":"main_number","introduced":"mrf92"}"#;
        let store = Store::ingest_str(text, catalog()).unwrap();
        assert!(store
            .fallback_ancestor("512.73", Tier::Summary)
            .unwrap()
            .is_none());
    }

    #[test]
    fn list_changes_window() {
        let text = concat!(
            r#"{"notation":"930.9","kind":"main_number","introduced":"mrf92","cancelled":"mrf94","replaced_by":["94"]}"#,
            "\n",
            r#"{"notation":"94","kind":"main_number","introduced":"mrf94"}"#,
        );
        let store = Store::ingest_str(text, catalog()).unwrap();
        let changes = store.list_changes("mrf93", "mrf94").unwrap();
        assert_eq!(changes.introduced.len(), 1);
        assert_eq!(changes.introduced[0].notation, "94");
        assert_eq!(changes.cancelled.len(), 1);
        assert_eq!(changes.cancelled[0].notation, "930.9");
        assert_eq!(changes.cancelled[0].replaced_by, ["94"]);

        let empty = store.list_changes("mrf11", "mrf12").unwrap();
        assert!(empty.introduced.is_empty() && empty.cancelled.is_empty());

        assert!(matches!(
            store.list_changes("mrf94", "mrf94"),
            Err(StoreError::Order { .. })
        ));
        assert!(matches!(
            store.list_changes("mrf94", "mrf92"),
            Err(StoreError::Order { .. })
        ));
    }

    #[test]
    fn change_lists_partition_the_store() {
        // union over all consecutive version pairs equals a brute-force scan
        let text = concat!(
            r#"{"notation":"930.9","kind":"main_number","introduced":"mrf92","cancelled":"mrf94","replaced_by":["94"]}"#,
            "\n",
            r#"{"notation":"94","kind":"main_number","introduced":"mrf94"}"#,
            "\n",
            r#"{"notation":"(492)","kind":"place_aux","introduced":"mrf93"}"#,
            "\n",
            r#"{"notation":"(729.885)","kind":"place_aux","introduced":"mrf11"}"#,
        );
        let store = Store::ingest_str(text, catalog()).unwrap();
        let labels = store.catalog().labels().to_vec();
        let mut introduced = Vec::new();
        let mut cancelled = Vec::new();
        for pair in labels.windows(2) {
            let c = store.list_changes(&pair[0], &pair[1]).unwrap();
            introduced.extend(c.introduced.iter().map(|r| r.notation.clone()));
            cancelled.extend(c.cancelled.iter().map(|r| r.notation.clone()));
        }
        let mut expect_introduced: Vec<String> = store
            .records()
            .iter()
            .filter(|r| r.introduced != labels[0])
            .map(|r| r.notation.clone())
            .collect();
        let mut expect_cancelled: Vec<String> = store
            .records()
            .iter()
            .filter(|r| r.cancelled.is_some())
            .map(|r| r.notation.clone())
            .collect();
        introduced.sort();
        cancelled.sort();
        expect_introduced.sort();
        expect_cancelled.sort();
        assert_eq!(introduced, expect_introduced);
        assert_eq!(cancelled, expect_cancelled);
    }

    #[test]
    fn tier_visibility_is_monotone() {
        let text = concat!(
            r#"{"notation":"3","kind":"main_number","introduced":"mrf92","in_summary":true,"in_abridged":true}"#,
            "\n",
            r#"{"notation":"31","kind":"main_number","introduced":"mrf92","in_abridged":true}"#,
            "\n",
            r#"{"notation":"311","kind":"main_number","introduced":"mrf92"}"#,
        );
        let store = Store::ingest_str(text, catalog()).unwrap();
        for r in store.records() {
            if store.lookup(Tier::Summary, &r.notation).is_some() {
                assert!(store.lookup(Tier::Abridged, &r.notation).is_some());
            }
            if store.lookup(Tier::Abridged, &r.notation).is_some() {
                assert!(store.lookup(Tier::Mrf, &r.notation).is_some());
            }
        }
        assert!(store.lookup(Tier::Summary, "311").is_none());
        assert!(store.lookup(Tier::Mrf, "311").is_some());
    }
}
