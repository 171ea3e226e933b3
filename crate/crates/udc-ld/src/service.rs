//! HTTP lookup service: classmark parsing, record retrieval and legacy-id
//! redirects, with bearer-token dataset access.
//!
//! Anonymous requests see the Summary dataset; a bearer token can raise the
//! granted tier to Abridged or MRF. Requests for a dataset above the granted
//! tier are refused with a 403 whose body may carry a fallback: the nearest
//! broader ancestor that IS visible at the granted tier. No response body
//! ever contains captions or URIs of records invisible at the granted tier.

use crate::interpret::interpret;
use crate::rdf::{self, complex_graph, record_graph};
use crate::store::{Store, Tier};
use crate::uri::{class_uri, decode_notation, legacy_lookup, UriConfig};
use axum::extract::{Path as AxumPath, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Service configuration file (JSON). Relative paths are resolved against
/// the directory containing the file.
#[derive(Debug, Clone, Deserialize)]
pub struct ServiceConfig {
    #[serde(default = "default_scheme")]
    pub scheme: String,
    pub base_domain: String,
    #[serde(default = "default_listen")]
    pub listen_address: String,
    pub dataset_files: Vec<PathBuf>,
    pub version_catalog: PathBuf,
    /// Bearer token → granted dataset ("abridged" or "mrf").
    #[serde(default)]
    pub tokens: HashMap<String, String>,
}

fn default_scheme() -> String {
    "http".into()
}

fn default_listen() -> String {
    "127.0.0.1:8080".into()
}

impl ServiceConfig {
    pub fn load(path: &Path) -> anyhow::Result<ServiceConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut config: ServiceConfig = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for file in &mut config.dataset_files {
            if file.is_relative() {
                *file = base.join(&file);
            }
        }
        if config.version_catalog.is_relative() {
            config.version_catalog = base.join(&config.version_catalog);
        }
        Ok(config)
    }

    pub fn uri_config(&self) -> UriConfig {
        UriConfig {
            scheme: self.scheme.clone(),
            base_domain: self.base_domain.clone(),
        }
    }

    /// Parse the token table into tiers; unknown tier names are an error.
    pub fn token_tiers(&self) -> anyhow::Result<HashMap<String, Tier>> {
        self.tokens
            .iter()
            .map(|(token, tier)| {
                Tier::parse(tier)
                    .map(|t| (token.clone(), t))
                    .ok_or_else(|| anyhow::anyhow!("unknown tier {tier:?} for a token"))
            })
            .collect()
    }
}

/// Shared immutable state behind every handler.
pub struct AppState {
    pub store: Store,
    pub uri: UriConfig,
    pub tokens: HashMap<String, Tier>,
}

#[derive(Debug, Clone, Serialize)]
struct Fallback {
    notation: String,
    caption: Option<String>,
    uri: String,
}

#[derive(Debug, Clone, Serialize)]
struct ErrorBody {
    status: u16,
    code: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    fallback: Option<Fallback>,
}

impl ErrorBody {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> ErrorBody {
        ErrorBody {
            status: status.as_u16(),
            code,
            message: message.into(),
            fallback: None,
        }
    }

    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).expect("valid status");
        let body = serde_json::to_string(&self).expect("serializable error");
        (
            status,
            [(header::CONTENT_TYPE, "application/json")],
            body,
        )
            .into_response()
    }
}

/// Response format after negotiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Turtle,
    Html,
}

impl Format {
    fn content_type(self) -> &'static str {
        match self {
            Format::Json => "application/json",
            Format::Turtle => "text/turtle",
            Format::Html => "text/html; charset=utf-8",
        }
    }
}

#[derive(Debug, Deserialize)]
struct FormatQuery {
    #[serde(default)]
    format: Option<String>,
    #[serde(default)]
    lang: Option<String>,
}

/// `format` query parameter wins over the Accept header; default is JSON.
fn negotiate(query: &FormatQuery, headers: &HeaderMap) -> Result<Format, ErrorBody> {
    if let Some(name) = &query.format {
        return match name.as_str() {
            "json" => Ok(Format::Json),
            "ttl" | "turtle" => Ok(Format::Turtle),
            "html" => Ok(Format::Html),
            other => Err(ErrorBody::new(
                StatusCode::BAD_REQUEST,
                "bad_format",
                format!("unsupported format {other:?}"),
            )),
        };
    }
    if let Some(accept) = headers.get(header::ACCEPT).and_then(|v| v.to_str().ok()) {
        for part in accept.split(',') {
            let mime = part.split(';').next().unwrap_or("").trim();
            match mime {
                "application/json" => return Ok(Format::Json),
                "text/turtle" => return Ok(Format::Turtle),
                "text/html" => return Ok(Format::Html),
                _ => {}
            }
        }
    }
    Ok(Format::Json)
}

/// Tier granted by the Authorization header. Absent → Summary; present but
/// unknown → 401.
fn authenticate(state: &AppState, headers: &HeaderMap) -> Result<Tier, ErrorBody> {
    let header = match headers.get(header::AUTHORIZATION) {
        None => return Ok(Tier::Summary),
        Some(value) => value,
    };
    let token = header
        .to_str()
        .ok()
        .and_then(|v| v.strip_prefix("Bearer "))
        .map(str::trim);
    match token.and_then(|t| state.tokens.get(t)) {
        Some(tier) => Ok(*tier),
        None => Err(ErrorBody::new(
            StatusCode::UNAUTHORIZED,
            "bad_token",
            "unrecognized bearer token",
        )),
    }
}

/// Check the requested dataset against the granted tier; on refusal, attach
/// the nearest granted-tier ancestor of `notation` as a fallback.
fn authorize(
    state: &AppState,
    granted: Tier,
    requested: Tier,
    notation: Option<&str>,
) -> Result<(), ErrorBody> {
    if requested <= granted {
        return Ok(());
    }
    let mut body = ErrorBody::new(
        StatusCode::FORBIDDEN,
        "tier_forbidden",
        format!("the {requested} dataset requires a token granting it"),
    );
    if let Some(raw) = notation {
        if let Ok(Some(ancestor)) = state.store.fallback_ancestor(raw, granted) {
            if let Ok(uri) = class_uri(&state.uri, granted, &ancestor.introduced, &ancestor.notation)
            {
                body.fallback = Some(Fallback {
                    notation: ancestor.notation.clone(),
                    caption: ancestor.caption("en").map(str::to_string),
                    uri,
                });
            }
        }
    }
    Err(body)
}

fn dataset_tier(name: &str) -> Result<Tier, ErrorBody> {
    Tier::parse(name).ok_or_else(|| {
        ErrorBody::new(
            StatusCode::NOT_FOUND,
            "unknown_dataset",
            format!("unknown dataset {name:?}"),
        )
    })
}

fn with_format(format: Format, body: String) -> Response {
    (
        [
            (header::CONTENT_TYPE, format.content_type()),
            (header::VARY, "Accept"),
        ],
        body,
    )
        .into_response()
}

async fn handle_parse(
    State(state): State<Arc<AppState>>,
    AxumPath((dataset, raw)): AxumPath<(String, String)>,
    Query(query): Query<FormatQuery>,
    headers: HeaderMap,
) -> Response {
    let result: Result<_, ErrorBody> = (|| {
        let tier = dataset_tier(&dataset)?;
        let granted = authenticate(&state, &headers)?;
        authorize(&state, granted, tier, Some(raw.as_str()))?;
        let format = negotiate(&query, &headers)?;
        let lang = query.lang.as_deref().unwrap_or("en");
        let outcome = interpret(&state.store, &state.uri, tier, lang, &raw).map_err(|e| {
            ErrorBody::new(
                StatusCode::BAD_REQUEST,
                "bad_notation",
                format!("cannot parse {raw:?}: {e} (byte {})", e.position()),
            )
        })?;
        Ok((format, tier, outcome))
    })();
    match result {
        Err(body) => body.into_response(),
        Ok((format, tier, outcome)) => match format {
            Format::Json => with_format(format, outcome.to_json()),
            Format::Html => with_format(format, outcome.to_html()),
            Format::Turtle => {
                let complex = complex_graph(&outcome.tree, &|leaf| {
                    state.store.lookup(tier, leaf).and_then(|r| {
                        class_uri(&state.uri, tier, &r.introduced, &r.notation).ok()
                    })
                });
                with_format(format, rdf::to_turtle(&complex.graph))
            }
        },
    }
}

async fn handle_record(
    State(state): State<Arc<AppState>>,
    AxumPath((dataset, version, encoded)): AxumPath<(String, String, String)>,
    Query(query): Query<FormatQuery>,
    headers: HeaderMap,
) -> Response {
    let result: Result<_, ErrorBody> = (|| {
        let tier = dataset_tier(&dataset)?;
        let raw = decode_notation(&encoded).map_err(|e| {
            ErrorBody::new(
                StatusCode::BAD_REQUEST,
                "bad_encoding",
                format!("cannot decode {encoded:?}: {e}"),
            )
        })?;
        let granted = authenticate(&state, &headers)?;
        authorize(&state, granted, tier, Some(raw.as_str()))?;
        let format = negotiate(&query, &headers)?;
        let not_found = || {
            ErrorBody::new(
                StatusCode::NOT_FOUND,
                "unknown_class",
                format!("no class {raw:?} at version {version:?} in the {tier} dataset"),
            )
        };
        let record = state.store.lookup(tier, &raw).ok_or_else(not_found)?;
        // a class is addressed by the version that introduced it
        if record.introduced != version {
            return Err(not_found());
        }
        Ok((format, tier, record))
    })();
    match result {
        Err(body) => body.into_response(),
        Ok((format, tier, record)) => {
            let graph = record_graph(&state.store, &state.uri, record, tier);
            match format {
                Format::Json => with_format(format, rdf::graph_to_json(&graph)),
                Format::Turtle => with_format(format, rdf::to_turtle(&graph)),
                Format::Html => {
                    let lang = query.lang.as_deref().unwrap_or("en");
                    let caption = record.caption(lang).unwrap_or("");
                    let body = format!(
                        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n\
                         <title>{n}</title>\n</head>\n<body>\n\
                         <h1><code>{n}</code> {c}</h1>\n\
                         <p>Introduced in {v}.</p>\n\
                         <p><a href=\"?format=ttl\">Turtle</a></p>\n</body>\n</html>\n",
                        n = escape(&record.notation),
                        c = escape(caption),
                        v = escape(&record.introduced),
                    );
                    with_format(format, body)
                }
            }
        }
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

async fn handle_legacy(
    State(state): State<Arc<AppState>>,
    AxumPath(id): AxumPath<String>,
) -> Response {
    match legacy_lookup(&state.store, &state.uri, &id) {
        Some(uri) => (
            StatusCode::MOVED_PERMANENTLY,
            [(header::LOCATION, uri)],
        )
            .into_response(),
        None => ErrorBody::new(
            StatusCode::NOT_FOUND,
            "unknown_legacy_id",
            format!("no record carries legacy id {id:?}"),
        )
        .into_response(),
    }
}

async fn handle_fallback() -> Response {
    ErrorBody::new(StatusCode::NOT_FOUND, "no_route", "no such route").into_response()
}

/// Build the router. Public so tests can drive it without a socket.
pub fn build_router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/legacy/:id", get(handle_legacy))
        .route("/:dataset/api/parse/*notation", get(handle_parse))
        .route("/:dataset/:version/:notation", get(handle_record))
        .fallback(handle_fallback)
        .with_state(state)
}

/// Load the config, ingest the datasets and serve until shutdown.
pub async fn serve(config: ServiceConfig) -> anyhow::Result<()> {
    let store = Store::ingest_files(&config.dataset_files, &config.version_catalog)?;
    let state = Arc::new(AppState {
        uri: config.uri_config(),
        tokens: config.token_tiers()?,
        store,
    });
    let listener = tokio::net::TcpListener::bind(&config.listen_address).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, build_router(state)).await?;
    Ok(())
}

/// Parse-and-validate helper shared with the CLI `ingest` command.
pub fn load_store(config: &ServiceConfig) -> anyhow::Result<Store> {
    Ok(Store::ingest_files(
        &config.dataset_files,
        &config.version_catalog,
    )?)
}
