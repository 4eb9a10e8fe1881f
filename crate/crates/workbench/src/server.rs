//! HTTP/JSON API used by the browser editor.
//!
//! Every failure answers with `{"error": {"code", "message"}}` and a status
//! from [`ErrorKind::http_status`].

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use aspwb_core::Dialect;
use aspwb_viz::{export_svg, VisAtomSet};
use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::error::{ErrorKind, WbError};
use crate::ops::{self, AbduceRequest, InterpretationRef, InterpretationView};
use crate::workspace::Workspace;

const INDEX: &str = include_str!("../assets/index.html");

type Shared = Arc<Workspace>;

impl IntoResponse for WbError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.kind.http_status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self.body())).into_response()
    }
}

type ApiResult<T> = Result<T, WbError>;

fn body<T: DeserializeOwned>(bytes: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(bytes).map_err(|e| WbError::new(ErrorKind::Usage, "bad-request", format!("invalid request body: {e}")))
}

/// Runs blocking work (grounding, solving, disk) off the async workers.
async fn blocking<T, F>(ws: Shared, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&Workspace) -> ApiResult<T> + Send + 'static,
{
    tokio::task::spawn_blocking(move || f(&ws))
        .await
        .map_err(|e| WbError::new(ErrorKind::Environment, "internal", e.to_string()))?
}

pub fn router(ws: Arc<Workspace>, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/parse", post(parse))
        .route("/api/solve", post(solve))
        .route("/api/interpretations", get(list_interpretations).post(add_interpretation))
        .route("/api/interpretations/{label}", get(get_interpretation).delete(delete_interpretation))
        .route("/api/diff", post(diff))
        .route("/api/visualize", post(visualize))
        .route("/api/abduce", post(abduce))
        .route("/api/scene/{id}", get(scene))
        .route("/api/scene/{id}/svg", get(scene_svg))
        .route("/", get(|| async { Html(INDEX) }))
        .with_state(ws);
    let fallback = |r: Router| r.fallback(|| async { WbError::new(ErrorKind::NotFound, "not-found", "no such route") });
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => fallback(api),
    }
}

pub async fn serve(ws: Workspace, addr: SocketAddr, assets: Option<PathBuf>) -> Result<(), WbError> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| WbError::new(ErrorKind::Environment, "io-error", format!("cannot bind {addr}: {e}")))?;
    let local = listener.local_addr().unwrap_or(addr);
    eprintln!("listening on http://{local}");
    axum::serve(listener, router(Arc::new(ws), assets))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| WbError::new(ErrorKind::Environment, "io-error", e.to_string()))
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

#[derive(Deserialize)]
struct ParseRequest {
    source: String,
    #[serde(default)]
    dialect: Option<Dialect>,
    #[serde(default)]
    file: Option<String>,
    #[serde(default = "yes")]
    lint: bool,
    #[serde(default = "yes")]
    outline: bool,
}

fn yes() -> bool {
    true
}

async fn parse(body_bytes: Bytes) -> ApiResult<Json<ops::DiagnosticsReport>> {
    let req: ParseRequest = body(&body_bytes)?;
    let file = req.file.unwrap_or_else(|| "<input>".into());
    let (mut report, program) = ops::check_source(&file, &req.source, req.dialect.unwrap_or(Dialect::Gringo), req.lint);
    if req.outline {
        report.outline = Some(ops::outline(&program));
    }
    Ok(Json(report))
}

#[derive(Deserialize)]
struct SourceFile {
    file: String,
    source: String,
}

#[derive(Deserialize)]
struct SolveRequest {
    #[serde(default)]
    source: Option<String>,
    #[serde(default)]
    sources: Vec<SourceFile>,
    #[serde(default)]
    dialect: Option<Dialect>,
    #[serde(default)]
    limit: Option<usize>,
    #[serde(default)]
    launch: Option<String>,
    /// Store answer sets under `<store>-<k>`.
    #[serde(default)]
    store: Option<String>,
}

async fn solve(State(ws): State<Shared>, body_bytes: Bytes) -> ApiResult<Json<ops::SolveReport>> {
    let req: SolveRequest = body(&body_bytes)?;
    blocking(ws, move |ws| {
        let (mut report, sets) = match &req.launch {
            Some(id) => ops::solve_launch(ws, id, &[], req.limit)?,
            None => {
                let mut sources: Vec<(String, String)> = req.sources.into_iter().map(|s| (s.file, s.source)).collect();
                if let Some(s) = req.source {
                    sources.insert(0, ("<input>".into(), s));
                }
                if sources.is_empty() {
                    return Err(WbError::usage("give `source` or `sources`"));
                }
                let program = ops::load_program(&sources, req.dialect.unwrap_or(Dialect::Gringo))?;
                ops::solve_internal(&program, req.limit)?
            }
        };
        if let Some(prefix) = &req.store {
            ops::store_answer_sets(ws, prefix, &mut report, &sets)?;
        }
        Ok(Json(report))
    })
    .await
}

#[derive(Serialize)]
struct LabelList {
    labels: Vec<String>,
}

async fn list_interpretations(State(ws): State<Shared>) -> ApiResult<Json<LabelList>> {
    blocking(ws, |ws| Ok(Json(LabelList { labels: ws.interpretations.labels()? }))).await
}

#[derive(Deserialize)]
struct AddInterpretation {
    label: String,
    #[serde(default)]
    literals: Option<Vec<aspwb_core::GroundLiteral>>,
    #[serde(default)]
    facts: Option<String>,
    #[serde(default)]
    dialect: Option<Dialect>,
    #[serde(default)]
    overwrite: bool,
}

async fn add_interpretation(State(ws): State<Shared>, body_bytes: Bytes) -> ApiResult<(StatusCode, Json<InterpretationView>)> {
    let req: AddInterpretation = body(&body_bytes)?;
    let content = match (req.literals, req.facts) {
        (Some(literals), None) => InterpretationRef::Literals { literals },
        (None, Some(facts)) => InterpretationRef::Facts {
            facts,
            dialect: req.dialect,
        },
        _ => return Err(WbError::usage("give exactly one of `literals` and `facts`")),
    };
    let (label, overwrite) = (req.label, req.overwrite);
    blocking(ws, move |ws| {
        let i = content.resolve(ws)?;
        ws.interpretations.put(&label, &i, overwrite)?;
        let view = InterpretationView::new(&i.with_label(label), Dialect::Gringo)?;
        Ok((StatusCode::CREATED, Json(view)))
    })
    .await
}

async fn get_interpretation(State(ws): State<Shared>, Path(label): Path<String>) -> ApiResult<Json<InterpretationView>> {
    blocking(ws, move |ws| Ok(Json(InterpretationView::new(&ws.interpretations.get(&label)?, Dialect::Gringo)?))).await
}

async fn delete_interpretation(State(ws): State<Shared>, Path(label): Path<String>) -> ApiResult<StatusCode> {
    blocking(ws, move |ws| {
        ws.interpretations.remove(&label)?;
        Ok(StatusCode::NO_CONTENT)
    })
    .await
}

#[derive(Deserialize)]
struct DiffRequest {
    left: InterpretationRef,
    right: InterpretationRef,
}

async fn diff(State(ws): State<Shared>, body_bytes: Bytes) -> ApiResult<Json<ops::DiffReport>> {
    let req: DiffRequest = body(&body_bytes)?;
    blocking(ws, move |ws| {
        let l = req.left.resolve(ws)?;
        let r = req.right.resolve(ws)?;
        Ok(Json(ops::diff_report(&l, &r)))
    })
    .await
}

#[derive(Deserialize)]
struct VisualizeRequest {
    interpretation: InterpretationRef,
    /// Visualization program; the generic drawing when absent.
    #[serde(default)]
    program: Option<String>,
    #[serde(default)]
    dialect: Option<Dialect>,
    #[serde(default)]
    launch: Option<String>,
    /// Also return the SVG text.
    #[serde(default)]
    svg: bool,
}

#[derive(Serialize)]
struct VisualizeResponse {
    scene_id: String,
    scene: aspwb_viz::Scene,
    vis_atoms: VisAtomSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    svg: Option<String>,
}

async fn visualize(State(ws): State<Shared>, body_bytes: Bytes) -> ApiResult<Json<VisualizeResponse>> {
    let req: VisualizeRequest = body(&body_bytes)?;
    blocking(ws, move |ws| {
        let i = req.interpretation.resolve(ws)?;
        let dialect = req.dialect.unwrap_or(Dialect::Gringo);
        let stored = ops::visualize(Some(ws), &i, req.program.as_deref().map(|p| (p, dialect)), req.launch.as_deref())?;
        Ok(Json(VisualizeResponse {
            svg: req.svg.then(|| export_svg(&stored.scene)),
            scene_id: stored.scene_id,
            scene: stored.scene,
            vis_atoms: stored.vis_atoms,
        }))
    })
    .await
}

async fn abduce(State(ws): State<Shared>, body_bytes: Bytes) -> ApiResult<Json<ops::AbduceReport>> {
    let req: AbduceRequest = body(&body_bytes)?;
    blocking(ws, move |ws| Ok(Json(ops::run_abduce(Some(ws), &req)?))).await
}

async fn scene(State(ws): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<crate::workspace::StoredScene>> {
    blocking(ws, move |ws| Ok(Json(ws.scenes.get(&id)?))).await
}

async fn scene_svg(State(ws): State<Shared>, Path(id): Path<String>) -> ApiResult<Response> {
    blocking(ws, move |ws| {
        let s = ws.scenes.get(&id)?;
        Ok(([(header::CONTENT_TYPE, "image/svg+xml")], export_svg(&s.scene)).into_response())
    })
    .await
}
