use serde::{Deserialize, Serialize};

use super::loss::{cross_entropy_loss, matching_loss, total_loss};
use super::tower::{Dense, DenseGrad, FcnTower, TowerCache};
use crate::error::{GucError, Result};
use crate::numeric::{softmax_rows, Matrix, Rng64, Stream};
use crate::prototypes::PrototypeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelMode {
    Baseline,
    Prototype,
    Texture,
}

impl ModelMode {
    pub(crate) fn tag(self) -> u32 {
        match self {
            ModelMode::Baseline => 0,
            ModelMode::Prototype => 1,
            ModelMode::Texture => 2,
        }
    }

    pub(crate) fn from_tag(tag: u32) -> Option<Self> {
        match tag {
            0 => Some(ModelMode::Baseline),
            1 => Some(ModelMode::Prototype),
            2 => Some(ModelMode::Texture),
            _ => None,
        }
    }
}

/// Layer sizes of the towers and head.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Architecture {
    pub input_dim: usize,
    /// Input dimension of the guide tower (texture mode only).
    pub guide_input_dim: Option<usize>,
    pub hidden: Vec<usize>,
    pub latent_dim: usize,
    pub num_classes: usize,
    pub dropout: f64,
}

impl Architecture {
    /// `input -> 1024 -> 512 -> latent -> classes`, dropout 0.5.
    pub fn standard(input_dim: usize, latent_dim: usize, num_classes: usize) -> Self {
        Architecture {
            input_dim,
            guide_input_dim: None,
            hidden: vec![1024, 512],
            latent_dim,
            num_classes,
            dropout: 0.5,
        }
    }

    fn tower_dims(&self, input: usize) -> Vec<usize> {
        let mut d = vec![input];
        d.extend_from_slice(&self.hidden);
        d.push(self.latent_dim);
        d
    }
}

/// Extractor tower(s) plus one classifier head shared by every stream.
#[derive(Debug, Clone, PartialEq)]
pub struct GucnetModel {
    mode: ModelMode,
    tower_x: FcnTower,
    tower_y: Option<FcnTower>,
    head: Dense,
    prototypes: Option<PrototypeSet>,
}

/// Gradients of every parameter, in the same order as
/// [`GucnetModel::params`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelGrads {
    pub tower_x: Vec<DenseGrad>,
    pub tower_y: Option<Vec<DenseGrad>>,
    pub head: DenseGrad,
}

/// Loss gradients with respect to the model outputs.
#[derive(Debug, Clone, Default)]
pub struct OutputGrads {
    pub logits_x: Option<Matrix>,
    pub latent_x: Option<Matrix>,
    pub logits_y: Option<Matrix>,
    pub latent_y: Option<Matrix>,
}

#[derive(Debug, Clone)]
pub struct ForwardPass {
    pub latent_x: Matrix,
    pub logits_x: Matrix,
    pub latent_y: Option<Matrix>,
    pub logits_y: Option<Matrix>,
    cache_x: TowerCache,
    cache_y: Option<TowerCache>,
}

/// Which loss a training step differentiates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    CrossEntropy,
    /// `alpha * L_ml` only.
    Matching { alpha: f64 },
    /// `L_ce + alpha * L_ml`.
    Joint { alpha: f64 },
}

/// Loss values and gradients of one step.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub ce_loss: f64,
    pub ml_loss: Option<f64>,
    /// Value of the differentiated objective.
    pub objective: f64,
    /// Arg-max predictions for the X stream from this (training-mode) pass.
    pub predictions: Vec<usize>,
    pub grads: ModelGrads,
}

impl GucnetModel {
    /// Builds a freshly initialized model. Each tower and the head draw their
    /// initial weights from their own stream of `seed`.
    pub fn new(arch: &Architecture, mode: ModelMode, prototypes: Option<PrototypeSet>, seed: u64) -> Result<Self> {
        if arch.num_classes < 2 {
            return Err(GucError::InvalidArgument("need at least two classes".into()));
        }
        let tower_x = FcnTower::new(&arch.tower_dims(arch.input_dim), arch.dropout, &mut Rng64::with_stream(seed, Stream::InitX))?;
        let tower_y = match (mode, arch.guide_input_dim) {
            (ModelMode::Texture, Some(dy)) => Some(FcnTower::new(
                &arch.tower_dims(dy),
                arch.dropout,
                &mut Rng64::with_stream(seed, Stream::InitY),
            )?),
            (ModelMode::Texture, None) => {
                return Err(GucError::InvalidArgument("texture mode needs a guide input dimension".into()))
            }
            _ => None,
        };
        let head = Dense::init(arch.latent_dim, arch.num_classes, &mut Rng64::with_stream(seed, Stream::InitHead));
        Self::from_parts(mode, tower_x, tower_y, head, prototypes)
    }

    pub fn from_parts(
        mode: ModelMode,
        tower_x: FcnTower,
        tower_y: Option<FcnTower>,
        head: Dense,
        prototypes: Option<PrototypeSet>,
    ) -> Result<Self> {
        let k = tower_x.latent_dim();
        let c = head.fan_out();
        if head.fan_in() != k {
            return Err(GucError::ShapeMismatch { op: "head input", left: (1, k), right: head.weight.shape() });
        }
        if let Some(ty) = &tower_y {
            if ty.latent_dim() != k {
                return Err(GucError::ShapeMismatch {
                    op: "guide tower latent",
                    left: (1, ty.latent_dim()),
                    right: (1, k),
                });
            }
        }
        match mode {
            ModelMode::Prototype => {
                let g = prototypes.as_ref().ok_or(GucError::MissingPrototypes)?;
                if g.dim() != k || g.num_classes() != c {
                    return Err(GucError::ShapeMismatch {
                        op: "prototypes vs model",
                        left: g.vectors().shape(),
                        right: (c, k),
                    });
                }
            }
            ModelMode::Texture if tower_y.is_none() => {
                return Err(GucError::InvalidArgument("texture mode needs a guide tower".into()));
            }
            _ => {}
        }
        if mode != ModelMode::Texture && tower_y.is_some() {
            return Err(GucError::InvalidArgument("guide tower only exists in texture mode".into()));
        }
        if mode != ModelMode::Prototype && prototypes.is_some() {
            return Err(GucError::InvalidArgument("prototypes only exist in prototype mode".into()));
        }
        Ok(GucnetModel { mode, tower_x, tower_y, head, prototypes })
    }

    pub fn mode(&self) -> ModelMode {
        self.mode
    }

    pub fn tower_x(&self) -> &FcnTower {
        &self.tower_x
    }

    pub fn tower_y(&self) -> Option<&FcnTower> {
        self.tower_y.as_ref()
    }

    pub fn head(&self) -> &Dense {
        &self.head
    }

    pub fn head_mut(&mut self) -> &mut Dense {
        &mut self.head
    }

    pub fn prototypes(&self) -> Option<&PrototypeSet> {
        self.prototypes.as_ref()
    }

    pub fn input_dim(&self) -> usize {
        self.tower_x.input_dim()
    }

    pub fn latent_dim(&self) -> usize {
        self.tower_x.latent_dim()
    }

    pub fn num_classes(&self) -> usize {
        self.head.fan_out()
    }

    pub fn set_training(&mut self, training: bool) {
        self.tower_x.set_training(training);
        if let Some(t) = &mut self.tower_y {
            t.set_training(training);
        }
    }

    /// Class probabilities for X-stream features, dropout off. Needs no
    /// guide tower or guide data.
    pub fn predict_proba(&self, x: &Matrix) -> Result<Matrix> {
        let latent = self.tower_x.latent(x)?;
        Ok(softmax_rows(&self.head.forward(&latent)?))
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<usize>> {
        Ok(self.predict_proba(x)?.argmax_rows())
    }

    pub fn forward(&self, x: &Matrix, y: Option<&Matrix>, rng: &mut Rng64) -> Result<ForwardPass> {
        let (latent_x, cache_x) = self.tower_x.forward_latent(x, rng)?;
        let logits_x = self.head.forward(&latent_x)?;
        let (latent_y, logits_y, cache_y) = match y {
            Some(y) => {
                let tower = self
                    .tower_y
                    .as_ref()
                    .ok_or_else(|| GucError::InvalidArgument("model has no guide tower".into()))?;
                let (ly, cy) = tower.forward_latent(y, rng)?;
                let logits = self.head.forward(&ly)?;
                (Some(ly), Some(logits), Some(cy))
            }
            None => (None, None, None),
        };
        Ok(ForwardPass { latent_x, logits_x, latent_y, logits_y, cache_x, cache_y })
    }

    /// Backpropagates output gradients into every parameter. Streams without
    /// any output gradient contribute nothing.
    pub fn backward(&self, pass: &ForwardPass, grads: &OutputGrads) -> Result<ModelGrads> {
        let mut head = DenseGrad::zeros_like(&self.head);
        let tower_x = match self.stream_latent_grad(
            &mut head,
            &pass.latent_x,
            grads.logits_x.as_ref(),
            grads.latent_x.as_ref(),
        )? {
            Some(d) => self.tower_x.backward(&pass.cache_x, &d)?,
            None => zero_grads(&self.tower_x),
        };
        let tower_y = match &self.tower_y {
            Some(ty) => {
                let d = match &pass.latent_y {
                    Some(latent_y) => self.stream_latent_grad(
                        &mut head,
                        latent_y,
                        grads.logits_y.as_ref(),
                        grads.latent_y.as_ref(),
                    )?,
                    None => None,
                };
                Some(match (d, &pass.cache_y) {
                    (Some(d), Some(cache)) => ty.backward(cache, &d)?,
                    _ => zero_grads(ty),
                })
            }
            None => None,
        };
        Ok(ModelGrads { tower_x, tower_y, head })
    }

    /// Accumulates head gradients for one stream and returns the gradient
    /// reaching its latent layer.
    fn stream_latent_grad(
        &self,
        head: &mut DenseGrad,
        latent: &Matrix,
        dlogits: Option<&Matrix>,
        dlatent_extra: Option<&Matrix>,
    ) -> Result<Option<Matrix>> {
        let mut dlatent = None;
        if let Some(dl) = dlogits {
            let g = self.head.grads(latent, dl)?;
            head.weight.add_scaled(&g.weight, 1.0)?;
            head.bias.add_scaled(&g.bias, 1.0)?;
            dlatent = Some(dl.matmul_t(&self.head.weight)?);
        }
        if let Some(extra) = dlatent_extra {
            match &mut dlatent {
                Some(d) => d.add_scaled(extra, 1.0)?,
                None => dlatent = Some(extra.clone()),
            }
        }
        Ok(dlatent)
    }

    /// Baseline and prototype-mode step on one X batch.
    pub fn guided_step(&self, x: &Matrix, labels: &[usize], objective: Objective, rng: &mut Rng64) -> Result<StepResult> {
        let pass = self.forward(x, None, rng)?;
        let (ce_loss, dlogits) = cross_entropy_loss(&pass.logits_x, labels)?;
        let ml = match &self.prototypes {
            Some(g) => Some(matching_loss(&pass.latent_x, labels, Some(g))?),
            None => None,
        };
        let mut out = OutputGrads::default();
        let value = match objective {
            Objective::CrossEntropy => {
                out.logits_x = Some(dlogits);
                ce_loss
            }
            Objective::Matching { alpha } => {
                let (ml_loss, mut dml) = ml.clone().ok_or(GucError::MissingPrototypes)?;
                dml.scale(alpha);
                out.latent_x = Some(dml);
                alpha * ml_loss
            }
            Objective::Joint { alpha } => {
                let (ml_loss, mut dml) = ml.clone().ok_or(GucError::MissingPrototypes)?;
                dml.scale(alpha);
                out.logits_x = Some(dlogits);
                out.latent_x = Some(dml);
                total_loss(ce_loss, ml_loss, alpha)
            }
        };
        let grads = self.backward(&pass, &out)?;
        Ok(StepResult {
            ce_loss,
            ml_loss: ml.map(|(l, _)| l),
            objective: value,
            predictions: pass.logits_x.argmax_rows(),
            grads,
        })
    }

    /// Texture-mode step: both streams go through their towers into the
    /// shared head, and cross-entropy is averaged over all samples of the
    /// combined batch. `y_labels` must already be co-binned.
    pub fn texture_step(
        &self,
        x: &Matrix,
        x_labels: &[usize],
        y: &Matrix,
        y_labels: &[usize],
        rng: &mut Rng64,
    ) -> Result<StepResult> {
        let pass = self.forward(x, Some(y), rng)?;
        let logits_y = pass.logits_y.as_ref().expect("guide stream requested");
        let logits = pass.logits_x.vstack(logits_y)?;
        let labels: Vec<usize> = x_labels.iter().chain(y_labels).copied().collect();
        let (ce_loss, dlogits) = cross_entropy_loss(&logits, &labels)?;
        let (dx, dy) = dlogits.split_rows(x.rows());
        let out = OutputGrads { logits_x: Some(dx), logits_y: Some(dy), ..Default::default() };
        let grads = self.backward(&pass, &out)?;
        Ok(StepResult {
            ce_loss,
            ml_loss: None,
            objective: ce_loss,
            predictions: pass.logits_x.argmax_rows(),
            grads,
        })
    }

    /// All parameters in a fixed order: X tower (weight, bias per layer),
    /// guide tower, head.
    pub fn params(&self) -> Vec<&Matrix> {
        let mut v = Vec::new();
        for l in self.tower_x.layers() {
            v.push(&l.weight);
            v.push(&l.bias);
        }
        if let Some(t) = &self.tower_y {
            for l in t.layers() {
                v.push(&l.weight);
                v.push(&l.bias);
            }
        }
        v.push(&self.head.weight);
        v.push(&self.head.bias);
        v
    }

    pub fn params_mut(&mut self) -> Vec<&mut Matrix> {
        let mut v = Vec::new();
        for l in self.tower_x.layers_mut() {
            v.push(&mut l.weight);
            v.push(&mut l.bias);
        }
        if let Some(t) = &mut self.tower_y {
            for l in t.layers_mut() {
                v.push(&mut l.weight);
                v.push(&mut l.bias);
            }
        }
        v.push(&mut self.head.weight);
        v.push(&mut self.head.bias);
        v
    }

    pub fn num_params(&self) -> usize {
        self.params().iter().map(|p| p.len()).sum()
    }

    /// All parameters concatenated into one `1 x P` row.
    pub fn flat_params(&self) -> Matrix {
        Matrix::row_vector(self.params().iter().flat_map(|p| p.as_slice().iter().copied()).collect())
    }

    pub fn set_flat_params(&mut self, flat: &Matrix) -> Result<()> {
        if flat.len() != self.num_params() {
            return Err(GucError::ShapeMismatch { op: "set_flat_params", left: flat.shape(), right: (1, self.num_params()) });
        }
        let mut offset = 0;
        for p in self.params_mut() {
            let n = p.len();
            p.as_mut_slice().copy_from_slice(&flat.as_slice()[offset..offset + n]);
            offset += n;
        }
        Ok(())
    }
}

fn zero_grads(tower: &FcnTower) -> Vec<DenseGrad> {
    tower.layers().iter().map(DenseGrad::zeros_like).collect()
}

impl ModelGrads {
    pub fn tensors(&self) -> Vec<&Matrix> {
        let mut v = Vec::new();
        for g in &self.tower_x {
            v.push(&g.weight);
            v.push(&g.bias);
        }
        if let Some(ty) = &self.tower_y {
            for g in ty {
                v.push(&g.weight);
                v.push(&g.bias);
            }
        }
        v.push(&self.head.weight);
        v.push(&self.head.bias);
        v
    }

    pub fn flatten(&self) -> Matrix {
        Matrix::row_vector(self.tensors().iter().flat_map(|p| p.as_slice().iter().copied()).collect())
    }
}
