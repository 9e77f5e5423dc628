//! HTTP front end for the designer UI: lattice validation and reports,
//! generator downloads, and asynchronous benchmark jobs.
//!
//! Jobs live in memory until deleted or until the process exits. At most
//! `max_jobs` run at once; the rest wait in the queue. A job's result is the
//! same [`SweepResult`] the CLI `bench` command produces for the same inputs.

mod jobs;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use squab::cellulation::{save, CellulationFile, FormatError, LoadOptions};
use squab::generators::{GeneratorError, GeneratorRef, PlanarText};
use squab::{CodeReport, SweepConfig};
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use jobs::{JobState, JobStore, JobView};

/// The OpenAPI description served at `/api/spec`.
pub const OPENAPI: &str = include_str!("openapi.json");

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Largest accepted `trials_per_point`.
    pub trial_cap: u64,
    /// Largest accepted request body in bytes.
    pub body_limit: usize,
    /// Jobs allowed to run at once.
    pub max_jobs: usize,
    /// Threads per job; 0 picks the machine's parallelism.
    pub workers: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            trial_cap: 1_000_000,
            body_limit: 16 * 1024 * 1024,
            max_jobs: 8,
            workers: 0,
        }
    }
}

#[derive(Clone)]
struct AppState {
    config: Arc<ServiceConfig>,
    jobs: JobStore,
}

/// JSON error body `{"error": ...}` with extra fields merged in.
fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

fn format_error(err: FormatError) -> Response {
    error(StatusCode::BAD_REQUEST, err.to_string())
}

fn json_file(bytes: Vec<u8>) -> Response {
    (
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        )],
        bytes,
    )
        .into_response()
}

pub fn router(config: ServiceConfig) -> Router {
    let body_limit = config.body_limit;
    let state = AppState {
        jobs: JobStore::new(config.max_jobs),
        config: Arc::new(config),
    };
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|origin, _| {
            let origin = origin.as_bytes();
            [
                &b"http://localhost"[..],
                b"http://127.0.0.1",
                b"http://[::1]",
            ]
            .iter()
            .any(|host| {
                origin
                    .strip_prefix(*host)
                    .is_some_and(|rest| rest.is_empty() || rest[0] == b':')
            })
        }))
        .allow_methods(tower_http::cors::Any)
        .allow_headers(tower_http::cors::Any);
    Router::new()
        .route("/api/spec", get(spec))
        .route("/api/lattices/validate", post(validate_lattice))
        .route("/api/lattices/info", post(lattice_info))
        .route("/api/generators/toric", get(gen_toric))
        .route("/api/generators/bk", get(gen_bk))
        .route("/api/generators/planar", get(gen_planar))
        .route("/api/benchmarks", post(submit))
        .route("/api/benchmarks/{id}", get(job_status).delete(job_delete))
        .route("/api/benchmarks/{id}/result", get(job_result))
        .layer(DefaultBodyLimit::max(body_limit))
        .layer(cors)
        .with_state(state)
}

/// Serves on `addr` until the process is stopped.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(config)).await
}

async fn spec() -> Response {
    json_file(OPENAPI.as_bytes().to_vec())
}

async fn validate_lattice(body: Bytes) -> Response {
    match CellulationFile::parse(&body, LoadOptions::default()) {
        Ok(file) => Json(file.validation_report()).into_response(),
        Err(err) => format_error(err),
    }
}

async fn lattice_info(body: Bytes) -> Response {
    let file = match CellulationFile::parse(&body, LoadOptions::default()) {
        Ok(file) => file,
        Err(err) => return format_error(err),
    };
    let report = file.validation_report();
    if !report.ok {
        return (StatusCode::UNPROCESSABLE_ENTITY, Json(report)).into_response();
    }
    match file.into_loaded() {
        Ok(loaded) => Json(CodeReport::new(&loaded.surface, &loaded.dual)).into_response(),
        Err(err) => error(StatusCode::UNPROCESSABLE_ENTITY, err.to_string()),
    }
}

fn generated(result: Result<GeneratorRef, String>) -> Response {
    let built = result.and_then(|r| r.build().map_err(|e: GeneratorError| e.to_string()));
    match built {
        Ok((s, dual)) => json_file(save(&s, Some(&dual))),
        Err(message) => error(StatusCode::UNPROCESSABLE_ENTITY, message),
    }
}

fn size_param(params: &[(String, String)]) -> Result<usize, String> {
    let d = params
        .iter()
        .find(|(k, _)| k == "d")
        .ok_or_else(|| "missing parameter `d`".to_string())?;
    d.1.parse()
        .map_err(|_| format!("`d` must be a non-negative integer, got `{}`", d.1))
}

async fn gen_toric(Query(params): Query<Vec<(String, String)>>) -> Response {
    generated(size_param(&params).map(|d| GeneratorRef::Toric { d }))
}

async fn gen_bk(Query(params): Query<Vec<(String, String)>>) -> Response {
    generated(size_param(&params).map(|d| GeneratorRef::Bk { d }))
}

/// `cells=RxC`, optional `sides`, `top`, `bottom`, `left`, `right`, and any
/// number of `hole=row,col,HxW:class`.
async fn gen_planar(Query(params): Query<Vec<(String, String)>>) -> Response {
    let mut text = PlanarText::default();
    let mut cells = None;
    for (key, value) in params {
        let slot = match key.as_str() {
            "cells" => &mut cells,
            "sides" => &mut text.sides,
            "top" => &mut text.top,
            "bottom" => &mut text.bottom,
            "left" => &mut text.left,
            "right" => &mut text.right,
            "hole" | "holes" => {
                text.holes.push(value);
                continue;
            }
            other => {
                return error(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    format!("unknown parameter `{other}`"),
                )
            }
        };
        *slot = Some(value);
    }
    let result = cells
        .ok_or_else(|| "missing parameter `cells`".to_string())
        .map(|cells| {
            text.cells = cells;
            GeneratorRef::Planar(text)
        });
    generated(result)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchmarkRequest {
    #[serde(default)]
    lattice: Option<serde_json::Value>,
    #[serde(default)]
    generator: Option<GeneratorRef>,
    sweep: SweepConfig,
}

async fn submit(State(state): State<AppState>, body: Bytes) -> Response {
    let request: BenchmarkRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(err) if err.is_data() => {
            return error(StatusCode::UNPROCESSABLE_ENTITY, err.to_string())
        }
        Err(err) => return error(StatusCode::BAD_REQUEST, err.to_string()),
    };
    if let Err(err) = request.sweep.check() {
        return error(StatusCode::UNPROCESSABLE_ENTITY, err.to_string());
    }
    if request.sweep.trials_per_point > state.config.trial_cap {
        return error(
            StatusCode::UNPROCESSABLE_ENTITY,
            format!(
                "trials_per_point exceeds the server cap of {}",
                state.config.trial_cap
            ),
        );
    }
    let pair = match (request.lattice, request.generator) {
        (Some(lattice), None) => {
            let bytes = serde_json::to_vec(&lattice).expect("json values serialize");
            CellulationFile::parse(&bytes, LoadOptions::default())
                .and_then(CellulationFile::into_loaded)
                .map(|l| (l.surface, l.dual))
                .map_err(|e| e.to_string())
        }
        (None, Some(generator)) => generator.build().map_err(|e| e.to_string()),
        _ => Err("give exactly one of `lattice` and `generator`".to_string()),
    };
    let (surface, dual) = match pair {
        Ok(pair) => pair,
        Err(message) => return error(StatusCode::UNPROCESSABLE_ENTITY, message),
    };
    let id = state
        .jobs
        .submit(surface, dual, request.sweep, state.config.workers);
    (StatusCode::ACCEPTED, Json(json!({ "id": id }))).into_response()
}

async fn job_status(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.jobs.view(&id) {
        Some(view) => Json(view).into_response(),
        None => error(StatusCode::NOT_FOUND, format!("no job `{id}`")),
    }
}

async fn job_result(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.jobs.result(&id) {
        None => error(StatusCode::NOT_FOUND, format!("no job `{id}`")),
        Some(Err(view)) => (
            StatusCode::CONFLICT,
            Json(json!({ "error": format!("job is {}", view.state), "job": view })),
        )
            .into_response(),
        Some(Ok(result)) => Json(&*result).into_response(),
    }
}

/// Cancels a queued or running job; removes a finished one.
async fn job_delete(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.jobs.delete(&id) {
        None => error(StatusCode::NOT_FOUND, format!("no job `{id}`")),
        Some(Some(view)) => Json(view).into_response(),
        Some(None) => StatusCode::NO_CONTENT.into_response(),
    }
}
