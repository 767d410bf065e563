use serde::{Deserialize, Serialize};

use crate::error::{GucError, Result};
use crate::model::{Architecture, ModelMode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OptimizerKind {
    Adam { beta1: f64, beta2: f64, epsilon: f64 },
    Sgd { momentum: f64 },
}

impl Default for OptimizerKind {
    fn default() -> Self {
        OptimizerKind::Adam { beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

/// How the prototype objective's two terms are optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternation {
    /// Even-numbered batches step on cross-entropy, odd-numbered ones on
    /// `alpha * L_ml`; one optimizer state is shared.
    #[default]
    PerBatch,
    /// One step on `L_ce + alpha * L_ml` per batch.
    Joint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub mode: ModelMode,
    pub epochs: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    /// Batch size; in texture mode, the size of each of the two halves.
    pub batch_size: usize,
    pub alpha: f64,
    pub alternation: Alternation,
    pub seed: u64,
    pub latent_dim: usize,
    pub hidden: Vec<usize>,
    pub dropout: f64,
    pub split_ratio: f64,
    /// Record real epoch wall times. Off by default so metric streams are
    /// reproducible byte for byte.
    pub record_wall_time: bool,
}

impl TrainConfig {
    pub fn new(mode: ModelMode) -> Self {
        TrainConfig {
            mode,
            epochs: 50,
            learning_rate: 0.001,
            optimizer: OptimizerKind::default(),
            batch_size: 32,
            alpha: 0.01,
            alternation: Alternation::PerBatch,
            seed: 0,
            latent_dim: 128,
            hidden: vec![1024, 512],
            dropout: 0.5,
            split_ratio: 0.7,
            record_wall_time: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(GucError::Config(m));
        if !(self.alpha < 1.0) {
            return fail(format!("alpha must be < 1.0, got {}", self.alpha));
        }
        if !(self.alpha >= 0.0) {
            return fail(format!("alpha must be non-negative, got {}", self.alpha));
        }
        if self.epochs == 0 {
            return fail("epochs must be >= 1".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail(format!("learning_rate must be > 0, got {}", self.learning_rate));
        }
        if self.batch_size == 0 {
            return fail("batch_size must be >= 1".into());
        }
        if self.latent_dim == 0 || self.hidden.contains(&0) {
            return fail("layer sizes must be positive".into());
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return fail(format!("dropout must be in [0, 1), got {}", self.dropout));
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return fail(format!("split_ratio must be in (0, 1), got {}", self.split_ratio));
        }
        match self.optimizer {
            OptimizerKind::Adam { beta1, beta2, epsilon } => {
                if !(0.0..1.0).contains(&beta1) || !(0.0..1.0).contains(&beta2) || !(epsilon > 0.0) {
                    return fail("adam needs beta1, beta2 in [0, 1) and epsilon > 0".into());
                }
            }
            OptimizerKind::Sgd { momentum } => {
                if !(0.0..1.0).contains(&momentum) {
                    return fail("sgd momentum must be in [0, 1)".into());
                }
            }
        }
        Ok(())
    }

    pub fn architecture(&self, input_dim: usize, num_classes: usize, guide_input_dim: Option<usize>) -> Architecture {
        Architecture {
            input_dim,
            guide_input_dim,
            hidden: self.hidden.clone(),
            latent_dim: self.latent_dim,
            num_classes,
            dropout: self.dropout,
        }
    }
}
