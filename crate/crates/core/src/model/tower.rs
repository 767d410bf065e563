use crate::error::{GucError, Result};
use crate::numeric::{relu, relu_backward, Matrix, Rng64};

/// Affine layer `x * W + b` with `W` stored `in x out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub weight: Matrix,
    pub bias: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseGrad {
    pub weight: Matrix,
    pub bias: Matrix,
}

impl Dense {
    /// Uniform in `±sqrt(6 / fan_in)`, zero bias.
    pub fn init(fan_in: usize, fan_out: usize, rng: &mut Rng64) -> Self {
        let bound = (6.0 / fan_in.max(1) as f64).sqrt();
        let data = (0..fan_in * fan_out).map(|_| rng.uniform_in(-bound, bound)).collect();
        Dense {
            weight: Matrix::new(fan_in, fan_out, data).expect("length matches"),
            bias: Matrix::zeros(1, fan_out),
        }
    }

    pub fn zeros(fan_in: usize, fan_out: usize) -> Self {
        Dense { weight: Matrix::zeros(fan_in, fan_out), bias: Matrix::zeros(1, fan_out) }
    }

    pub fn fan_in(&self) -> usize {
        self.weight.rows()
    }

    pub fn fan_out(&self) -> usize {
        self.weight.cols()
    }

    pub fn forward(&self, x: &Matrix) -> Result<Matrix> {
        let mut z = x.matmul(&self.weight)?;
        z.add_row_broadcast(self.bias.as_slice())?;
        Ok(z)
    }

    /// Parameter gradients for upstream `dz` given the layer input.
    pub fn grads(&self, input: &Matrix, dz: &Matrix) -> Result<DenseGrad> {
        Ok(DenseGrad { weight: input.t_matmul(dz)?, bias: dz.column_sums() })
    }
}

impl DenseGrad {
    pub fn zeros_like(layer: &Dense) -> Self {
        DenseGrad {
            weight: Matrix::zeros(layer.fan_in(), layer.fan_out()),
            bias: Matrix::zeros(1, layer.fan_out()),
        }
    }
}

/// Stack of dense layers ending in the latent layer.
///
/// Hidden layers are `linear -> ReLU -> dropout`; the final projection to the
/// latent dimension has neither activation nor dropout. Dropout is inverted:
/// kept units are scaled by `1/(1-p)` during training so evaluation is the
/// plain deterministic forward.
#[derive(Debug, Clone, PartialEq)]
pub struct FcnTower {
    layers: Vec<Dense>,
    dropout: f64,
    training: bool,
    version: u64,
}

/// Activations recorded by a training forward pass.
#[derive(Debug, Clone)]
pub struct TowerCache {
    version: u64,
    /// Input to each layer (post-dropout for hidden layers).
    inputs: Vec<Matrix>,
    /// Pre-activation of each hidden layer.
    pre_acts: Vec<Matrix>,
    /// Scaled dropout mask per hidden layer, when dropout was applied.
    masks: Vec<Option<Matrix>>,
}

impl FcnTower {
    /// `dims` is `[input, hidden..., latent]`.
    pub fn new(dims: &[usize], dropout: f64, rng: &mut Rng64) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(GucError::InvalidArgument(format!("bad tower dims {dims:?}")));
        }
        if !(0.0..1.0).contains(&dropout) {
            return Err(GucError::InvalidArgument(format!("dropout must be in [0, 1), got {dropout}")));
        }
        let layers = dims.windows(2).map(|w| Dense::init(w[0], w[1], rng)).collect();
        Ok(FcnTower { layers, dropout, training: true, version: 0 })
    }

    pub fn from_layers(layers: Vec<Dense>, dropout: f64) -> Result<Self> {
        if layers.is_empty() {
            return Err(GucError::InvalidArgument("tower needs at least one layer".into()));
        }
        for w in layers.windows(2) {
            if w[0].fan_out() != w[1].fan_in() {
                return Err(GucError::ShapeMismatch {
                    op: "tower layer chain",
                    left: w[0].weight.shape(),
                    right: w[1].weight.shape(),
                });
            }
        }
        for l in &layers {
            if l.bias.shape() != (1, l.fan_out()) {
                return Err(GucError::ShapeMismatch { op: "tower bias", left: l.weight.shape(), right: l.bias.shape() });
            }
        }
        Ok(FcnTower { layers, dropout, training: true, version: 0 })
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![self.layers[0].fan_in()];
        d.extend(self.layers.iter().map(Dense::fan_out));
        d
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].fan_in()
    }

    pub fn latent_dim(&self) -> usize {
        self.layers.last().map(Dense::fan_out).unwrap_or(0)
    }

    pub fn dropout(&self) -> f64 {
        self.dropout
    }

    pub fn is_training(&self) -> bool {
        self.training
    }

    pub fn set_training(&mut self, training: bool) {
        self.training = training;
    }

    pub fn layers(&self) -> &[Dense] {
        &self.layers
    }

    /// Mutable access invalidates outstanding caches.
    pub fn layers_mut(&mut self) -> &mut [Dense] {
        self.version += 1;
        &mut self.layers
    }

    fn check_input(&self, x: &Matrix) -> Result<()> {
        if x.cols() != self.input_dim() {
            return Err(GucError::ShapeMismatch {
                op: "tower input",
                left: x.shape(),
                right: self.layers[0].weight.shape(),
            });
        }
        Ok(())
    }

    /// Deterministic forward with dropout disabled.
    pub fn latent(&self, x: &Matrix) -> Result<Matrix> {
        self.check_input(x)?;
        let last = self.layers.len() - 1;
        let mut a = x.clone();
        for (i, layer) in self.layers.iter().enumerate() {
            let z = layer.forward(&a)?;
            a = if i < last { relu(&z) } else { z };
        }
        Ok(a)
    }

    /// Forward pass recording what backward needs. Dropout masks are drawn
    /// from `rng` only in training mode.
    pub fn forward_latent(&self, x: &Matrix, rng: &mut Rng64) -> Result<(Matrix, TowerCache)> {
        self.check_input(x)?;
        let last = self.layers.len() - 1;
        let n_hidden = last;
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut pre_acts = Vec::with_capacity(n_hidden);
        let mut masks = Vec::with_capacity(n_hidden);
        let mut a = x.clone();
        for (i, layer) in self.layers.iter().enumerate() {
            let z = layer.forward(&a)?;
            inputs.push(a);
            if i == last {
                a = z;
                break;
            }
            let mut h = relu(&z);
            if self.training && self.dropout > 0.0 {
                let keep_scale = 1.0 / (1.0 - self.dropout);
                let mut mask = Matrix::zeros(h.rows(), h.cols());
                for (m, v) in mask.as_mut_slice().iter_mut().zip(h.as_mut_slice()) {
                    if rng.uniform() >= self.dropout {
                        *m = keep_scale;
                        *v *= keep_scale;
                    } else {
                        *v = 0.0;
                    }
                }
                masks.push(Some(mask));
            } else {
                masks.push(None);
            }
            pre_acts.push(z);
            a = h;
        }
        Ok((a, TowerCache { version: self.version, inputs, pre_acts, masks }))
    }

    /// Parameter gradients given the gradient of the loss w.r.t. the latent.
    pub fn backward(&self, cache: &TowerCache, dlatent: &Matrix) -> Result<Vec<DenseGrad>> {
        if cache.version != self.version || cache.inputs.len() != self.layers.len() {
            return Err(GucError::StaleCache);
        }
        let batch = cache.inputs[0].rows();
        if dlatent.shape() != (batch, self.latent_dim()) {
            return Err(GucError::ShapeMismatch {
                op: "tower backward",
                left: dlatent.shape(),
                right: (batch, self.latent_dim()),
            });
        }
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut dz = dlatent.clone();
        for i in (0..self.layers.len()).rev() {
            let layer = &self.layers[i];
            grads.push(layer.grads(&cache.inputs[i], &dz)?);
            if i == 0 {
                break;
            }
            let mut da = dz.matmul_t(&layer.weight)?;
            if let Some(mask) = &cache.masks[i - 1] {
                for (d, &m) in da.as_mut_slice().iter_mut().zip(mask.as_slice()) {
                    *d *= m;
                }
            }
            dz = relu_backward(&cache.pre_acts[i - 1], &da)?;
        }
        grads.reverse();
        Ok(grads)
    }
}
