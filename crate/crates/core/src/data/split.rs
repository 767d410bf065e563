use serde::Serialize;

use super::{fingerprint_indices, DatasetBundle};
use crate::error::{GucError, Result};
use crate::numeric::{Rng64, Stream};

/// Disjoint train/test index sets covering a bundle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitView {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub ratio: f64,
}

impl SplitView {
    /// Stable hash of both index lists.
    pub fn fingerprint(&self) -> u64 {
        fingerprint_indices([self.train.as_slice(), self.test.as_slice()])
    }
}

/// Shuffles each class independently and sends `round(n_c * ratio)` of its
/// samples to the training side, keeping at least one on each side.
pub fn stratified_split(bundle: &DatasetBundle, ratio: f64, seed: u64) -> Result<SplitView> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(GucError::InvalidArgument(format!(
            "split ratio must be in (0, 1) so both sides are non-empty, got {ratio}"
        )));
    }
    let mut by_class = vec![Vec::new(); bundle.num_classes()];
    for (i, &l) in bundle.labels().iter().enumerate() {
        by_class[l].push(i);
    }
    let mut rng = Rng64::with_stream(seed, Stream::Split);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, mut idx) in by_class.into_iter().enumerate() {
        if idx.len() < 2 {
            return Err(GucError::ClassTooSmall { class, count: idx.len(), needed: 2 });
        }
        rng.shuffle(&mut idx);
        let n_train = ((idx.len() as f64 * ratio).round() as usize).clamp(1, idx.len() - 1);
        test.extend_from_slice(&idx[n_train..]);
        idx.truncate(n_train);
        train.extend(idx);
    }
    Ok(SplitView { train, test, ratio })
}
