//! Fully connected towers, the shared classifier head, the two losses and
//! hand-written backpropagation through the baseline, prototype and texture
//! pipelines.

mod checkpoint;
mod gucnet;
mod loss;
mod tower;

pub use checkpoint::{load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use gucnet::{Architecture, ForwardPass, GucnetModel, ModelGrads, ModelMode, Objective, OutputGrads, StepResult};
pub use loss::{cross_entropy_loss, matching_loss, total_loss};
pub use tower::{Dense, DenseGrad, FcnTower, TowerCache};
