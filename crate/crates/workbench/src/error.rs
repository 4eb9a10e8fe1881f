use aspwb_core::engine::EngineError;
use aspwb_tools::{RegistryError, RunError};
use aspwb_viz::VizError;
use serde::Serialize;
use thiserror::Error;

/// Broad classes of failure, shared by exit codes and HTTP statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    /// The input program or data has errors.
    Findings,
    /// No answer set, no visualization, no abduced interpretation.
    Unsat,
    Usage,
    NotFound,
    Conflict,
    Environment,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Findings | ErrorKind::Unsat => 1,
            _ => 2,
        }
    }

    pub fn http_status(self) -> u16 {
        match self {
            ErrorKind::Findings | ErrorKind::Unsat => 422,
            ErrorKind::Usage => 400,
            ErrorKind::NotFound => 404,
            ErrorKind::Conflict => 409,
            ErrorKind::Environment => 500,
        }
    }
}

#[derive(Debug, Clone, Error)]
#[error("{message}")]
pub struct WbError {
    pub kind: ErrorKind,
    pub code: String,
    pub message: String,
}

impl WbError {
    pub fn new(kind: ErrorKind, code: &str, message: impl Into<String>) -> Self {
        Self {
            kind,
            code: code.to_string(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Usage, "bad-request", message)
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        Self::new(ErrorKind::NotFound, "not-found", format!("no {what} named `{id}`"))
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        let kind = if e.kind() == std::io::ErrorKind::NotFound {
            ErrorKind::NotFound
        } else {
            ErrorKind::Environment
        };
        Self::new(kind, "io-error", format!("{}: {e}", path.display()))
    }

    pub fn body(&self) -> serde_json::Value {
        serde_json::json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl From<EngineError> for WbError {
    fn from(e: EngineError) -> Self {
        let kind = match e {
            EngineError::Capacity { .. } | EngineError::Cancelled => ErrorKind::Environment,
            _ => ErrorKind::Findings,
        };
        Self::new(kind, e.code(), e.to_string())
    }
}

impl From<VizError> for WbError {
    fn from(e: VizError) -> Self {
        let kind = match &e {
            VizError::Engine(inner) => return inner.clone().into(),
            VizError::Parse(_) | VizError::Vocabulary { .. } => ErrorKind::Findings,
            VizError::Unsat | VizError::AbductionUnsat => ErrorKind::Unsat,
            VizError::DanglingReference { .. } | VizError::InvalidEdit(_) | VizError::Problem(_) => {
                ErrorKind::Usage
            }
            VizError::Conflict { .. } => ErrorKind::Conflict,
            VizError::Solver(_) => ErrorKind::Environment,
        };
        Self::new(kind, e.code(), e.to_string())
    }
}

impl From<RegistryError> for WbError {
    fn from(e: RegistryError) -> Self {
        let kind = match e {
            RegistryError::Duplicate(_) | RegistryError::Integrity { .. } => ErrorKind::Conflict,
            RegistryError::NotFound(_) => ErrorKind::NotFound,
            RegistryError::Invalid { .. } => ErrorKind::Usage,
            RegistryError::Io { .. } | RegistryError::Format { .. } => ErrorKind::Environment,
        };
        Self::new(kind, e.code(), e.to_string())
    }
}

impl From<RunError> for WbError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(inner) => inner.into(),
            other => Self::new(ErrorKind::Environment, other.code(), other.to_string()),
        }
    }
}
