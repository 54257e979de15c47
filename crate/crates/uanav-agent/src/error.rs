use thiserror::Error;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("input out of range: {0}")]
    InputOutOfRange(String),
    #[error("length mismatch: {context}: {a} vs {b}")]
    LengthMismatch {
        context: String,
        a: usize,
        b: usize,
    },
    #[error("action on or outside the squash boundary")]
    BoundaryAction,
    #[error("wrong sequence length: expected {expected}, got {got}")]
    SequenceLength { expected: usize, got: usize },
    #[error("empty dataset")]
    EmptyDataset,
    #[error("training diverged (non-finite loss) at episode {episode}, gradient step {grad_step}, batch seed {batch_seed}")]
    Divergence {
        episode: usize,
        grad_step: u64,
        batch_seed: u64,
    },
    #[error("incompatible checkpoint: {0}")]
    IncompatibleCheckpoint(String),
    #[error(transparent)]
    Nn(#[from] uanav_nn::NnError),
    #[error(transparent)]
    Sim(#[from] uanav_sim::SimError),
    #[error("dataset i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}
