//! JSON-over-HTTP front end for [`SessionStore`].
//!
//! | method | path                | body / result                          |
//! |--------|---------------------|----------------------------------------|
//! | POST   | `/games`            | [`CreateRequest`] → `{id, snapshot}`   |
//! | GET    | `/games/{id}`       | snapshot                               |
//! | POST   | `/games/{id}/moves` | [`MoveRequest`] → snapshot             |
//! | GET    | `/games/{id}/hint`  | `{district, color, tag}`               |
//! | GET    | `/games/{id}/replay`| replay lines                           |
//! | DELETE | `/games/{id}`       | 204                                    |
//!
//! Errors come back as `{"error": {"code", "message"}}`.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;

use super::{CreateRequest, ErrorCode, MoveRequest, SessionError, SessionStore, Snapshot};

impl ErrorCode {
    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::DistrictFull
            | ErrorCode::PoolExhausted
            | ErrorCode::NotYourTurn
            | ErrorCode::GameOver => StatusCode::CONFLICT,
            ErrorCode::BadDistrict | ErrorCode::InvalidConfig | ErrorCode::InvalidStrategy => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            ErrorCode::EngineFailure | ErrorCode::Journal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a SessionError,
}

impl IntoResponse for SessionError {
    fn into_response(self) -> Response {
        (self.code.status(), Json(ErrorBody { error: &self })).into_response()
    }
}

#[derive(Serialize)]
struct Created {
    id: String,
    snapshot: Snapshot,
}

type Shared = Arc<SessionStore>;

async fn blocking<T, F>(f: F) -> Result<T, SessionError>
where
    F: FnOnce() -> Result<T, SessionError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(SessionError::new(ErrorCode::EngineFailure, e.to_string())))
}

fn body<T>(payload: Result<Json<T>, JsonRejection>, code: ErrorCode) -> Result<T, SessionError> {
    payload
        .map(|Json(v)| v)
        .map_err(|e| SessionError::new(code, e.body_text()))
}

async fn create(
    State(store): State<Shared>,
    payload: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<impl IntoResponse, SessionError> {
    let request = body(payload, ErrorCode::InvalidConfig)?;
    let snapshot = blocking(move || store.create_session(&request)).await?;
    Ok((
        StatusCode::CREATED,
        Json(Created {
            id: snapshot.id.clone(),
            snapshot,
        }),
    ))
}

async fn show(
    State(store): State<Shared>,
    Path(id): Path<String>,
) -> Result<Json<Snapshot>, SessionError> {
    store.snapshot(&id).map(Json)
}

async fn play(
    State(store): State<Shared>,
    Path(id): Path<String>,
    payload: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<Snapshot>, SessionError> {
    let mv = body(payload, ErrorCode::BadDistrict)?;
    blocking(move || store.post_move(&id, mv)).await.map(Json)
}

async fn hint(
    State(store): State<Shared>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, SessionError> {
    blocking(move || store.get_hint(&id)).await.map(Json)
}

async fn replay(
    State(store): State<Shared>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, SessionError> {
    let text = store.export_replay(&id)?.to_text();
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], text))
}

async fn remove(
    State(store): State<Shared>,
    Path(id): Path<String>,
) -> Result<StatusCode, SessionError> {
    store.delete(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/games", post(create))
        .route("/games/{id}", get(show).delete(remove))
        .route("/games/{id}/moves", post(play))
        .route("/games/{id}/hint", get(hint))
        .route("/games/{id}/replay", get(replay))
        .with_state(store)
}

/// Serves until ctrl-c.
pub async fn serve(addr: SocketAddr, store: Arc<SessionStore>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
