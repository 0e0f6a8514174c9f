//! REST service for the ranking survey.
//!
//! | Method | Path | Body / query | Reply |
//! |---|---|---|---|
//! | POST | `/questionnaires` | `{"seed": u64, "pool"?: [system_id]}` | blinded questionnaire |
//! | GET | `/questionnaires/{id}` | | blinded questionnaire |
//! | POST | `/responses` | [`ResponseSubmission`] | `{"response_id"}` |
//! | GET | `/export` | `?accepted=true` (default) | [`SurveyExport`] |
//! | GET | `/instructions` | | HTML |
//! | GET | `/health` | | `{"status":"ok"}` |
//!
//! `/export` reveals system ids and is meant for operators, not respondents.

use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use super::{
    build_questionnaire, export_outcomes, validate_response, ResponseSubmission, SurveyConfig, SurveyError,
    SurveyExport, SurveyStore, TestItem, INSTRUCTIONS_HTML,
};

pub struct SurveyService {
    pub store: SurveyStore,
    pub test_set: Vec<TestItem>,
    /// Used when a request names no pool.
    pub default_pool: Vec<String>,
    pub config: SurveyConfig,
}

impl SurveyService {
    /// Systems with an output for every test item.
    pub fn pool_from_test_set(test_set: &[TestItem]) -> Vec<String> {
        let Some(first) = test_set.first() else {
            return Vec::new();
        };
        first
            .outputs
            .keys()
            .filter(|s| test_set.iter().all(|t| t.outputs.contains_key(*s)))
            .cloned()
            .collect()
    }

    pub fn export(&self, accepted_only: bool) -> Result<SurveyExport, SurveyError> {
        export_outcomes(&self.store.responses(), &self.store.questionnaires(), accepted_only)
    }
}

struct ApiError(SurveyError);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            SurveyError::UnknownQuestionnaire(_) => StatusCode::NOT_FOUND,
            SurveyError::Journal(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        (status, Json(json!({ "error": self.0.to_string() }))).into_response()
    }
}

impl From<SurveyError> for ApiError {
    fn from(e: SurveyError) -> Self {
        Self(e)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateQuestionnaire {
    seed: u64,
    #[serde(default)]
    pool: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct ExportQuery {
    #[serde(default = "yes")]
    accepted: bool,
}

fn yes() -> bool {
    true
}

fn now_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

async fn create_questionnaire(
    State(svc): State<Arc<SurveyService>>,
    Json(req): Json<CreateQuestionnaire>,
) -> Result<Response, ApiError> {
    let pool = req.pool.unwrap_or_else(|| svc.default_pool.clone());
    let q = build_questionnaire(&svc.test_set, &pool, req.seed, &svc.config, now_secs())?;
    let stored = svc.store.put_questionnaire(q)?;
    Ok((StatusCode::CREATED, Json(stored.blinded())).into_response())
}

async fn get_questionnaire(
    State(svc): State<Arc<SurveyService>>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let q = svc.store.questionnaire(&id).ok_or(SurveyError::UnknownQuestionnaire(id))?;
    Ok(Json(q.blinded()).into_response())
}

async fn submit_response(
    State(svc): State<Arc<SurveyService>>,
    Json(sub): Json<ResponseSubmission>,
) -> Result<Response, ApiError> {
    let q = svc
        .store
        .questionnaire(&sub.questionnaire_id)
        .ok_or_else(|| SurveyError::UnknownQuestionnaire(sub.questionnaire_id.clone()))?;
    let resp = validate_response(&sub, &q, &svc.config)?;
    let stored = svc.store.put_response(resp)?;
    Ok((StatusCode::CREATED, Json(json!({ "response_id": stored.response_id }))).into_response())
}

async fn export(
    State(svc): State<Arc<SurveyService>>,
    Query(q): Query<ExportQuery>,
) -> Result<Json<SurveyExport>, ApiError> {
    Ok(Json(svc.export(q.accepted)?))
}

pub fn router(svc: Arc<SurveyService>) -> Router {
    Router::new()
        .route("/questionnaires", post(create_questionnaire))
        .route("/questionnaires/:id", get(get_questionnaire))
        .route("/responses", post(submit_response))
        .route("/export", get(export))
        .route("/instructions", get(|| async { Html(INSTRUCTIONS_HTML) }))
        .route("/health", get(|| async { Json(json!({ "status": "ok" })) }))
        .with_state(svc)
}

pub async fn serve(listener: tokio::net::TcpListener, svc: Arc<SurveyService>) -> std::io::Result<()> {
    tracing::info!(addr = ?listener.local_addr().ok(), "survey service listening");
    axum::serve(listener, router(svc)).await
}
