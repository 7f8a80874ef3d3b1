//! JSON-over-HTTP game sessions.
//!
//! ```text
//! POST   /session                  {"mode": "plain"|"strong"}  -> {"id", "state"}
//! POST   /session/{id}/move        {"extra": box, "point"?: map} -> state
//! GET    /session/{id}/state
//! GET    /session/{id}/witness?k=K
//! GET    /session/{id}/suggestions
//! GET    /session/{id}/log          the move log, as JSON lines
//! DELETE /session/{id}             abandons; the state stays readable
//! POST   /op                       any stateless operation, see `api::Op`
//! ```
//!
//! Errors: 400 malformed input, 404 unknown session, 409 wrong turn or
//! abandoned game, 422 illegal move or rejected operation.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::Mutex;

use crate::api::{self, ApiError, BoxInput, ErrorKind, Op};
use crate::choquet::{self, GameError, GameState, LogEntry, Mode};
use crate::maps::ProgressionMap;

struct Session {
    game: GameState,
    log: Vec<LogEntry>,
}

#[derive(Default)]
pub struct AppState {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    counter: AtomicU64,
    log_dir: Option<PathBuf>,
}

impl AppState {
    /// With `log_dir`, each session's move log is appended to
    /// `<log_dir>/<id>.jsonl` as it grows.
    pub fn new(log_dir: Option<PathBuf>) -> Self {
        AppState {
            log_dir,
            ..Default::default()
        }
    }

    async fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, HttpError> {
        self.sessions.lock().await.get(id).cloned().ok_or_else(|| {
            HttpError::new(
                StatusCode::NOT_FOUND,
                "unknown_session",
                format!("no session {id}"),
            )
        })
    }

    fn persist(&self, id: &str, entries: &[LogEntry]) -> Result<(), HttpError> {
        let Some(dir) = &self.log_dir else {
            return Ok(());
        };
        let write = || -> std::io::Result<()> {
            let mut file = std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(dir.join(format!("{id}.jsonl")))?;
            for e in entries {
                writeln!(file, "{}", choquet::log_line(e))?;
            }
            Ok(())
        };
        write().map_err(|e| {
            HttpError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "log_write",
                e.to_string(),
            )
        })
    }
}

#[derive(Debug)]
struct HttpError {
    status: StatusCode,
    body: Value,
}

impl HttpError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        HttpError {
            status,
            body: json!({ "error": code, "message": message.into() }),
        }
    }
}

impl IntoResponse for HttpError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<GameError> for HttpError {
    fn from(e: GameError) -> Self {
        let message = e.to_string();
        match e {
            GameError::Illegal(reason) => HttpError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({ "error": "illegal_move", "message": message, "reason": reason }),
            },
            GameError::WrongTurn { .. } => {
                HttpError::new(StatusCode::CONFLICT, "wrong_turn", message)
            }
            GameError::Abandoned => HttpError::new(StatusCode::CONFLICT, "abandoned", message),
            GameError::PrefixTooLong { .. } => {
                HttpError::new(StatusCode::BAD_REQUEST, "prefix_too_long", message)
            }
            GameError::Scheme(_) => {
                HttpError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
            }
        }
    }
}

impl From<ApiError> for HttpError {
    fn from(e: ApiError) -> Self {
        let status = match e.kind {
            ErrorKind::Usage => StatusCode::BAD_REQUEST,
            ErrorKind::Domain => StatusCode::UNPROCESSABLE_ENTITY,
        };
        HttpError {
            status,
            body: json!({ "error": e.kind, "message": e.message }),
        }
    }
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, HttpError> {
    let body: &[u8] = if body.iter().all(u8::is_ascii_whitespace) {
        b"{}"
    } else {
        body
    };
    serde_json::from_slice(body)
        .map_err(|e| HttpError::new(StatusCode::BAD_REQUEST, "bad_request", e.to_string()))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/session", post(create))
        .route("/session/{id}/move", post(play))
        .route("/session/{id}/state", get(read_state))
        .route("/session/{id}/witness", get(witness))
        .route("/session/{id}/suggestions", get(suggestions))
        .route("/session/{id}/log", get(read_log))
        .route("/session/{id}", axum::routing::delete(abandon))
        .route("/op", post(operation))
        .with_state(state)
}

pub async fn serve(port: u16, log_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(AppState::new(log_dir)))).await
}

#[derive(Deserialize)]
struct CreateRequest {
    #[serde(default = "plain")]
    mode: Mode,
}

fn plain() -> Mode {
    Mode::Plain
}

async fn create(State(app): State<Arc<AppState>>, body: Bytes) -> Result<Response, HttpError> {
    let req: CreateRequest = parse_body(&body)?;
    let id = format!("s{:x}", app.counter.fetch_add(1, Ordering::Relaxed) + 1);
    let game = GameState::new(req.mode);
    let log = vec![LogEntry::New { mode: req.mode }];
    app.persist(&id, &log)?;
    let state = game.state_json();
    app.sessions
        .lock()
        .await
        .insert(id.clone(), Arc::new(Mutex::new(Session { game, log })));
    Ok((
        StatusCode::CREATED,
        Json(json!({ "id": id, "state": state })),
    )
        .into_response())
}

#[derive(Deserialize)]
struct MoveRequest {
    #[serde(default = "no_extra")]
    extra: BoxInput,
    #[serde(default)]
    point: Option<ProgressionMap>,
}

fn no_extra() -> BoxInput {
    BoxInput::List(Vec::new())
}

async fn play(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<Value>, HttpError> {
    let req: MoveRequest = parse_body(&body)?;
    let extra = req.extra.constraints()?;
    let session = app.session(&id).await?;
    let mut s = session.lock().await;
    let entries = api::play_round(&mut s.game, extra, req.point)?;
    app.persist(&id, &entries)?;
    s.log.extend(entries);
    Ok(Json(s.game.state_json()))
}

async fn read_state(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<Value>, HttpError> {
    let session = app.session(&id).await?;
    let s = session.lock().await;
    Ok(Json(s.game.state_json()))
}

async fn read_log(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<String, HttpError> {
    let session = app.session(&id).await?;
    let s = session.lock().await;
    Ok(s.log.iter().map(|e| choquet::log_line(e) + "\n").collect())
}

#[derive(Deserialize)]
struct WitnessQuery {
    k: Option<usize>,
}

async fn witness(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<WitnessQuery>,
) -> Result<Json<Value>, HttpError> {
    let session = app.session(&id).await?;
    let mut s = session.lock().await;
    let k = q.k.unwrap_or(s.game.rounds());
    let prefix = s.game.witness_prefix(k)?;
    Ok(Json(json!({ "k": k, "prefix": prefix })))
}

async fn suggestions(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<Value>, HttpError> {
    let session = app.session(&id).await?;
    let s = session.lock().await;
    Ok(Json(json!(s.game.suggestions())))
}

async fn abandon(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<Value>, HttpError> {
    let session = app.session(&id).await?;
    let mut s = session.lock().await;
    s.game.abandon();
    app.persist(&id, &[LogEntry::Abandon])?;
    s.log.push(LogEntry::Abandon);
    Ok(Json(s.game.state_json()))
}

async fn operation(body: Bytes) -> Result<Json<Value>, HttpError> {
    let op: Op = parse_body(&body)?;
    Ok(Json(api::run(&op)?.json))
}
