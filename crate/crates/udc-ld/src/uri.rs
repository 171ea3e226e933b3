//! Class URI minting and the reversible notation escaping scheme.
//!
//! Classmarks carry glyphs that percent-encoding would mangle in display, so
//! URIs use mnemonic `_xx_` escapes instead; see `docs/uri-encoding.md` for
//! the normative table. A class URI names the dataset (host prefix or first
//! path segment), the MRF version in which the class was introduced, and the
//! escaped notation.

use crate::notation::{self, LexError, APOSTROPHE};
use crate::store::{Store, Tier, VersionCatalog};
use thiserror::Error;

/// Reserved glyph → mnemonic escape. The mapping is bijective; letters,
/// digits, `.` and `-` pass through unescaped.
pub const ESCAPE_TABLE: &[(char, &str)] = &[
    ('(', "_or_"),
    (')', "_cr_"),
    ('"', "_q_"),
    ('=', "_eq_"),
    ('+', "_pl_"),
    (':', "_co_"),
    ('/', "_sl_"),
    ('*', "_as_"),
    ('`', "_ap_"),
    ('[', "_ob_"),
    (']', "_cb_"),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UriError {
    #[error("undecodable escape at byte {position}")]
    Decode { position: usize },
    #[error("not a class URI: {reason}")]
    Malformed { reason: String },
    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),
    #[error("unknown version {0:?}")]
    UnknownVersion(String),
    #[error(transparent)]
    Lex(#[from] LexError),
}

/// Scheme and base domain behind every minted URI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UriConfig {
    pub scheme: String,
    pub base_domain: String,
}

impl Default for UriConfig {
    fn default() -> Self {
        UriConfig {
            scheme: "http".into(),
            base_domain: "udcdata.info".into(),
        }
    }
}

/// The three components behind a class URI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UriParts {
    pub dataset: Tier,
    pub version: String,
    pub encoded_notation: String,
}

/// Escape a classmark for use in a URI. The input must tokenize; a plain
/// apostrophe is canonicalised to the backtick before escaping.
pub fn encode_notation(raw: &str) -> Result<String, LexError> {
    notation::tokenize(raw)?;
    let mut out = String::with_capacity(raw.len());
    for ch in raw.chars() {
        let ch = if ch == '\'' { APOSTROPHE } else { ch };
        match ESCAPE_TABLE.iter().find(|(glyph, _)| *glyph == ch) {
            Some((_, mnemonic)) => out.push_str(mnemonic),
            None => out.push(ch),
        }
    }
    Ok(out)
}

/// Invert `encode_notation`.
pub fn decode_notation(encoded: &str) -> Result<String, UriError> {
    let bytes = encoded.as_bytes();
    let mut out = String::with_capacity(encoded.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'_' {
            let close = bytes[i + 1..]
                .iter()
                .position(|&b| b == b'_')
                .ok_or(UriError::Decode { position: i })?;
            let candidate = &encoded[i..i + close + 2];
            let glyph = ESCAPE_TABLE
                .iter()
                .find(|(_, m)| *m == candidate)
                .map(|(g, _)| *g)
                .ok_or(UriError::Decode { position: i })?;
            out.push(glyph);
            i += candidate.len();
        } else {
            let ch = bytes[i];
            if ch.is_ascii_alphanumeric() || ch == b'.' || ch == b'-' || ch == b'~' {
                out.push(ch as char);
                i += 1;
            } else {
                return Err(UriError::Decode { position: i });
            }
        }
    }
    Ok(out)
}

/// Absolute URI for a class: `{scheme}://{subdomain}.{base}/{version}/{enc}`.
pub fn mint_class_uri(config: &UriConfig, parts: &UriParts) -> String {
    format!(
        "{}://{}.{}/{}/{}",
        config.scheme,
        parts.dataset.subdomain(),
        config.base_domain,
        parts.version,
        parts.encoded_notation
    )
}

/// Convenience: encode a notation and mint its URI in one step.
pub fn class_uri(
    config: &UriConfig,
    dataset: Tier,
    version: &str,
    raw_notation: &str,
) -> Result<String, LexError> {
    Ok(mint_class_uri(
        config,
        &UriParts {
            dataset,
            version: version.to_string(),
            encoded_notation: encode_notation(raw_notation)?,
        },
    ))
}

/// Invert `mint_class_uri`. Accepts both the host form
/// (`http://mrf.{base}/{version}/{enc}`) and the path form used on
/// localhost (`http://{host}/{dataset}/{version}/{enc}`).
pub fn parse_class_uri(
    uri: &str,
    config: &UriConfig,
    catalog: &VersionCatalog,
) -> Result<UriParts, UriError> {
    let rest = uri
        .strip_prefix("http://")
        .or_else(|| uri.strip_prefix("https://"))
        .ok_or_else(|| UriError::Malformed {
            reason: "missing http(s) scheme".into(),
        })?;
    let (authority, path) = match rest.split_once('/') {
        Some((a, p)) => (a, p),
        None => (rest, ""),
    };
    let segments: Vec<&str> = path.split('/').filter(|s| !s.is_empty()).collect();
    let host_dataset = authority
        .strip_suffix(&format!(".{}", config.base_domain))
        .and_then(Tier::parse);
    let (dataset, version, encoded) = match (host_dataset, segments.as_slice()) {
        (Some(tier), [version, encoded]) => (tier, *version, *encoded),
        (None, [dataset, version, encoded]) => {
            let tier = Tier::parse(dataset)
                .ok_or_else(|| UriError::UnknownDataset(dataset.to_string()))?;
            (tier, *version, *encoded)
        }
        _ => {
            return Err(UriError::Malformed {
                reason: format!("expected dataset, version and notation segments in {uri:?}"),
            })
        }
    };
    if !catalog.contains(version) {
        return Err(UriError::UnknownVersion(version.to_string()));
    }
    decode_notation(encoded)?;
    Ok(UriParts {
        dataset,
        version: version.to_string(),
        encoded_notation: encoded.to_string(),
    })
}

/// Map a legacy numeric identifier to the current URI of its record, minted
/// at the lowest tier where the record is visible.
pub fn legacy_lookup(store: &Store, config: &UriConfig, legacy_id: &str) -> Option<String> {
    let record = store.by_legacy_id(legacy_id)?;
    class_uri(
        config,
        record.lowest_tier(),
        &record.introduced,
        &record.notation,
    )
    .ok()
}
