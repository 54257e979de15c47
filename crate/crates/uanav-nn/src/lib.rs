//! Minimal reverse-mode automatic differentiation for the navigation
//! networks: dense/conv1d/GRU layers, Adam, finite-difference gradient
//! checking and the checkpoint container.

pub mod adam;
pub mod checkpoint;
pub mod error;
pub mod gradcheck;
pub mod graph;
pub mod layers;
pub mod params;
pub mod tape;
pub mod tensor;

pub use adam::{adam_step, AdamState};
pub use checkpoint::{
    file_sha256, load_checkpoint, save_checkpoint, CheckpointManifest, ParamInfo,
    CHECKPOINT_MAGIC,
};
pub use error::NnError;
pub use gradcheck::{gradient_check, GradCheckReport};
pub use graph::{Graph, ParamGrads};
pub use layers::{Activation, Conv1d, Dense, GruCell};
pub use params::ParameterSet;
pub use tape::{Gradients, Tape, Var};
pub use tensor::Tensor;

/// f64 instantiations used by the pipeline.
pub type Tensorf = Tensor<uanav_num::Scalar>;
pub type ParameterSetf = ParameterSet<uanav_num::Scalar>;
