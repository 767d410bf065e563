//! Optimizers and the baseline, prototype-guided and texture-guided
//! training loops.

mod config;
mod optim;
mod trainer;

pub use config::{Alternation, OptimizerKind, TrainConfig};
pub use optim::{adam_step, OptimizerState};
pub use trainer::{
    fit, train_baseline, train_prototype, train_texture, EpochMetrics, GuideData, StepCounts, TrainOutcome,
};
