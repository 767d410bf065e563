//! Guided-clustering classification.
//!
//! A fully connected classifier is trained on a hard, cluttered feature set
//! while its latent layer is pulled onto well separated clusters supplied by
//! a guide: either a second, easily separable dataset that shares the
//! classifier head (texture guiding) or one fixed prototype vector per class
//! matched with an L1 loss (prototype guiding).
//!
//! Start with [`training::train_prototype`], [`training::train_texture`] and
//! [`training::train_baseline`]; the `examples/` directory has one runnable
//! program per capability.

pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod model;
pub mod numeric;
pub mod prototypes;
pub mod training;

pub use error::{GucError, Result};
