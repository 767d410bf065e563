use super::{CoBinning, DatasetBundle};
use crate::error::{GucError, Result};
use crate::numeric::{Matrix, Rng64};

/// Shuffles `indices` and cuts them into batches of `batch_size`; the last
/// batch may be short.
pub fn shuffled_batches(indices: &[usize], batch_size: usize, rng: &mut Rng64) -> Vec<Vec<usize>> {
    assert!(batch_size > 0, "batch size must be positive");
    let mut order = indices.to_vec();
    rng.shuffle(&mut order);
    order.chunks(batch_size).map(<[usize]>::to_vec).collect()
}

/// Endless stream of guide indices: a fresh shuffle of the pool each time
/// it is exhausted. Persists across epochs.
#[derive(Debug, Clone)]
pub struct GuideSampler {
    pool: Vec<usize>,
    order: Vec<usize>,
    pos: usize,
    rng: Rng64,
}

impl GuideSampler {
    pub fn new(pool: Vec<usize>, rng: Rng64) -> Result<Self> {
        if pool.is_empty() {
            return Err(GucError::EmptyDataset);
        }
        Ok(GuideSampler { order: Vec::new(), pos: 0, pool, rng })
    }

    pub fn take(&mut self, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            if self.pos == self.order.len() {
                self.order = self.pool.clone();
                self.rng.shuffle(&mut self.order);
                self.pos = 0;
            }
            let k = (n - out.len()).min(self.order.len() - self.pos);
            out.extend_from_slice(&self.order[self.pos..self.pos + k]);
            self.pos += k;
        }
        out
    }
}

/// One texture-mode step: an X half and a guide half whose labels have been
/// mapped through the co-binning.
#[derive(Debug, Clone)]
pub struct PairedBatch {
    pub x: Matrix,
    pub x_labels: Vec<usize>,
    pub y: Matrix,
    pub y_labels: Vec<usize>,
}

pub struct PairedBatches<'a> {
    x: &'a DatasetBundle,
    y: &'a DatasetBundle,
    binning: &'a CoBinning,
    guide: &'a mut GuideSampler,
    x_batches: std::vec::IntoIter<Vec<usize>>,
    half_batch: usize,
}

/// Iterates one epoch over `x_train` in shuffled batches of `half_batch`,
/// pairing each with `half_batch` guide samples.
pub fn paired_batches<'a>(
    x: &'a DatasetBundle,
    x_train: &[usize],
    y: &'a DatasetBundle,
    guide: &'a mut GuideSampler,
    binning: &'a CoBinning,
    half_batch: usize,
    rng: &mut Rng64,
) -> Result<PairedBatches<'a>> {
    if x.num_classes() != y.num_classes() || binning.len() != x.num_classes() {
        return Err(GucError::ClassCountMismatch(format!(
            "X has {} classes, guide {}, binning {}",
            x.num_classes(),
            y.num_classes(),
            binning.len()
        )));
    }
    if half_batch == 0 {
        return Err(GucError::InvalidArgument("half batch must be positive".into()));
    }
    let x_batches = shuffled_batches(x_train, half_batch, rng).into_iter();
    Ok(PairedBatches { x, y, binning, guide, x_batches, half_batch })
}

impl PairedBatches<'_> {
    pub fn num_steps(&self) -> usize {
        self.x_batches.len()
    }
}

impl Iterator for PairedBatches<'_> {
    type Item = PairedBatch;

    fn next(&mut self) -> Option<PairedBatch> {
        let xb = self.x_batches.next()?;
        let (x, x_labels) = self.x.select(&xb);
        let yb = self.guide.take(self.half_batch);
        let (y, raw) = self.y.select(&yb);
        let y_labels = raw.into_iter().map(|l| self.binning.map(l)).collect();
        Some(PairedBatch { x, x_labels, y, y_labels })
    }
}
