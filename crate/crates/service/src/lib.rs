//! HTTP session service for the explorer front end.
//!
//! Sessions hold one closed configuration plus its mutation history. All
//! request bodies and responses are JSON; failures use the envelope
//! `{code, message, offending}` with a matching status code.

pub mod error;
pub mod store;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::header;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ncotor_core::oracle::DEFAULT_SEED;
use ncotor_core::render::Highlight;
use ncotor_core::{Direction, PolygonSpec};
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub use error::ServiceError;
pub use store::{EnumerationKind, Initial, SessionStore, Snapshot};

type Shared = Arc<SessionStore>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    spec: ncotor_core::document::SpecDoc,
    #[serde(default)]
    diagonals: Option<Vec<[u32; 2]>>,
    /// `"empty"` or `"random-closed"`; ignored when `diagonals` is given.
    #[serde(default)]
    initial: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MutateRequest {
    diagonals: Vec<[u32; 2]>,
    direction: Direction,
}

#[derive(Debug, Deserialize)]
struct RenderQuery {
    format: Option<String>,
    highlight: Option<String>,
}

#[derive(Debug, Deserialize)]
struct PageQuery {
    page: Option<usize>,
    page_size: Option<usize>,
}

/// Parse a body by hand so malformed input still gets the error envelope.
fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ServiceError> {
    serde_json::from_slice(bytes).map_err(|e| ServiceError::bad_request(format!("invalid request body: {e}")))
}

fn spec_of(n: u32, m: u32) -> Result<PolygonSpec, ServiceError> {
    Ok(PolygonSpec::new(n, m)?)
}

async fn create(State(store): State<Shared>, bytes: Bytes) -> Result<Response, ServiceError> {
    let req: CreateRequest = body(&bytes)?;
    let spec = spec_of(req.spec.n, req.spec.m)?;
    let initial = match (req.diagonals, req.initial.as_deref()) {
        (Some(ds), _) => Initial::Diagonals(ds),
        (None, None | Some("empty")) => Initial::Empty,
        (None, Some("random-closed")) => Initial::RandomClosed {
            seed: req.seed.unwrap_or(DEFAULT_SEED),
        },
        (None, Some(other)) => {
            return Err(ServiceError::bad_request(format!(
                "unknown initial configuration `{other}`"
            )))
        }
    };
    let view = store.create(spec, initial)?;
    Ok((axum::http::StatusCode::CREATED, Json(view)).into_response())
}

async fn show(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.get(&id)?).into_response())
}

async fn mutate(State(store): State<Shared>, Path(id): Path<String>, bytes: Bytes) -> Result<Response, ServiceError> {
    let req: MutateRequest = body(&bytes)?;
    Ok(Json(store.mutate(&id, &req.diagonals, req.direction)?).into_response())
}

async fn undo(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.undo(&id)?).into_response())
}

async fn frame(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(serde_json::json!({ "frame": store.list_frame(&id)? })).into_response())
}

async fn snapshot(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.snapshot(&id)?).into_response())
}

async fn restore(State(store): State<Shared>, bytes: Bytes) -> Result<Response, ServiceError> {
    let snap: Snapshot = body(&bytes)?;
    let view = store.restore(&snap)?;
    Ok((axum::http::StatusCode::CREATED, Json(view)).into_response())
}

async fn render(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Query(q): Query<RenderQuery>,
) -> Result<Response, ServiceError> {
    let format = q.format.unwrap_or_else(|| "svg".to_string());
    let highlight = match q.highlight.as_deref() {
        None | Some("none") => Highlight::None,
        Some("frame") => Highlight::Frame,
        Some("nc") => Highlight::Nc,
        Some(other) => return Err(ServiceError::bad_request(format!("unknown highlight `{other}`"))),
    };
    let text = store.render(&id, &format, highlight)?;
    let mime = match format.as_str() {
        "svg" => "image/svg+xml",
        "dot" => "text/vnd.graphviz",
        _ => "text/plain; charset=utf-8",
    };
    Ok(([(header::CONTENT_TYPE, mime)], text).into_response())
}

fn page(store: &SessionStore, n: u32, m: u32, kind: EnumerationKind, q: PageQuery) -> Result<Response, ServiceError> {
    let spec = spec_of(n, m)?;
    let p = store.enumerate(spec, kind, q.page.unwrap_or(0), q.page_size.unwrap_or(100))?;
    Ok(Json(p).into_response())
}

async fn closed(
    State(store): State<Shared>,
    Path((n, m)): Path<(u32, u32)>,
    Query(q): Query<PageQuery>,
) -> Result<Response, ServiceError> {
    page(&store, n, m, EnumerationKind::Closed, q)
}

async fn cluster_tilting(
    State(store): State<Shared>,
    Path((n, m)): Path<(u32, u32)>,
    Query(q): Query<PageQuery>,
) -> Result<Response, ServiceError> {
    page(&store, n, m, EnumerationKind::ClusterTilting, q)
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/restore", post(restore))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/mutate", post(mutate))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/frame", get(frame))
        .route("/sessions/{id}/render", get(render))
        .route("/sessions/{id}/snapshot", get(snapshot))
        .route("/specs/{n}/{m}/closed", get(closed))
        .route("/specs/{n}/{m}/cluster-tilting", get(cluster_tilting))
        .with_state(store)
}

/// Bind and serve until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(SessionStore::new()))).await
}
