use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("non-finite action component ({v}, {w}) for robot {robot}")]
    NonFiniteAction { robot: usize, v: f64, w: f64 },
    #[error("expected {expected} actions (one per robot), got {got}")]
    ActionCountMismatch { expected: usize, got: usize },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("infeasible scenario: {0}")]
    InfeasibleScenario(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("fixture i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("fixture parse: {0}")]
    Json(#[from] serde_json::Error),
}
