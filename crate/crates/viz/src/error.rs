use aspwb_core::engine::EngineError;
use aspwb_core::Diagnostic;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VizError {
    #[error("visualization program has {} error(s): {}", .0.len(), .0.first().map(|d| d.message.as_str()).unwrap_or(""))]
    Parse(Vec<Diagnostic>),
    #[error("visualization program has no answer set")]
    Unsat,
    #[error("`{atom}`: {message}")]
    Vocabulary { atom: String, message: String },
    #[error("`{atom}` refers to unknown element `{id}`")]
    DanglingReference { id: String, atom: String },
    #[error("element `{id}`: {message}")]
    Conflict { id: String, message: String },
    #[error("invalid edit: {0}")]
    InvalidEdit(String),
    #[error("no interpretation visualizes to the edited scene")]
    AbductionUnsat,
    #[error("invalid abduction problem: {0}")]
    Problem(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("solver: {0}")]
    Solver(String),
}

impl VizError {
    pub fn code(&self) -> &'static str {
        match self {
            VizError::Parse(_) => "parse-error",
            VizError::Unsat => "visualization-unsat",
            VizError::Vocabulary { .. } => "vocabulary-error",
            VizError::DanglingReference { .. } => "dangling-reference",
            VizError::Conflict { .. } => "conflict",
            VizError::InvalidEdit(_) => "invalid-edit",
            VizError::AbductionUnsat => "abduction-unsat",
            VizError::Problem(_) => "invalid-problem",
            VizError::Engine(e) => e.code(),
            VizError::Solver(_) => "solver-error",
        }
    }
}
