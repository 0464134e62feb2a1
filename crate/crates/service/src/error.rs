use std::fmt;

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use ncotor_core::{Diagonal, DocumentError, Error};
use serde::Serialize;

/// Error body: `{code, message, offending: [[a,b], ...]}`, plus the closure
/// of the offered set when it was rejected for not being closed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ServiceError {
    #[serde(skip)]
    pub status: u16,
    pub code: &'static str,
    pub message: String,
    pub offending: Vec<[u32; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suggestion: Option<Vec<[u32; 2]>>,
}

impl ServiceError {
    pub fn new(status: u16, code: &'static str, message: impl Into<String>) -> Self {
        ServiceError {
            status,
            code,
            message: message.into(),
            offending: Vec::new(),
            suggestion: None,
        }
    }

    pub fn not_found(id: &str) -> Self {
        ServiceError::new(404, "not_found", format!("no session `{id}`"))
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ServiceError::new(400, "bad_request", message)
    }

    pub fn with_offending(mut self, ds: &[Diagonal]) -> Self {
        self.offending = ds.iter().map(|d| d.endpoints()).collect();
        self
    }
}

impl fmt::Display for ServiceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {}", self.code, self.status, self.message)
    }
}

impl std::error::Error for ServiceError {}

impl From<DocumentError> for ServiceError {
    fn from(e: DocumentError) -> Self {
        let mut err = ServiceError::new(400, "invalid_document", e.to_string());
        err.offending = e.offending();
        err
    }
}

impl From<Error> for ServiceError {
    fn from(e: Error) -> Self {
        match &e {
            Error::NotClosed => ServiceError::new(422, "not_closed", e.to_string()),
            Error::CutNotInFrame(ds) => ServiceError::new(422, "not_in_frame", e.to_string()).with_offending(ds),
            Error::CrossingCutSet(u, v) => {
                ServiceError::new(422, "crossing_cut", e.to_string()).with_offending(&[*u, *v])
            }
            Error::BudgetExceeded { .. } => ServiceError::new(413, "budget_exceeded", e.to_string()),
            _ => ServiceError::bad_request(e.to_string()),
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}
