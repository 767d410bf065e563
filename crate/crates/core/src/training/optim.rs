use super::config::OptimizerKind;
use crate::error::{GucError, Result};
use crate::numeric::Matrix;

/// One bias-corrected Adam update of `param`; `step` is 1-based.
#[allow(clippy::too_many_arguments)]
pub fn adam_step(
    param: &mut Matrix,
    grad: &Matrix,
    m: &mut Matrix,
    v: &mut Matrix,
    step: u64,
    lr: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
) -> Result<()> {
    param.check_same_shape("adam_step", grad)?;
    param.check_same_shape("adam_step", m)?;
    param.check_same_shape("adam_step", v)?;
    let c1 = 1.0 - beta1.powi(step as i32);
    let c2 = 1.0 - beta2.powi(step as i32);
    let p = param.as_mut_slice();
    let (m, v) = (m.as_mut_slice(), v.as_mut_slice());
    for i in 0..p.len() {
        let g = grad.as_slice()[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        let m_hat = m[i] / c1;
        let v_hat = v[i] / c2;
        p[i] -= lr * m_hat / (v_hat.sqrt() + epsilon);
    }
    Ok(())
}

/// Per-parameter optimizer accumulators, shaped like the parameters.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    kind: OptimizerKind,
    first: Vec<Matrix>,
    second: Vec<Matrix>,
    step: u64,
}

impl OptimizerState {
    pub fn new(kind: OptimizerKind, params: &[&Matrix]) -> Self {
        let zeros = || params.iter().map(|p| Matrix::zeros(p.rows(), p.cols())).collect::<Vec<_>>();
        let second = match kind {
            OptimizerKind::Adam { .. } => zeros(),
            OptimizerKind::Sgd { .. } => Vec::new(),
        };
        OptimizerState { kind, first: zeros(), second, step: 0 }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn step(&mut self, params: Vec<&mut Matrix>, grads: &[&Matrix], lr: f64) -> Result<()> {
        if params.len() != self.first.len() || grads.len() != params.len() {
            return Err(GucError::InvalidArgument(format!(
                "optimizer tracks {} tensors, got {} params and {} grads",
                self.first.len(),
                params.len(),
                grads.len()
            )));
        }
        self.step += 1;
        match self.kind {
            OptimizerKind::Adam { beta1, beta2, epsilon } => {
                for (i, p) in params.into_iter().enumerate() {
                    adam_step(p, grads[i], &mut self.first[i], &mut self.second[i], self.step, lr, beta1, beta2, epsilon)?;
                }
            }
            OptimizerKind::Sgd { momentum } => {
                for (i, p) in params.into_iter().enumerate() {
                    p.check_same_shape("sgd_step", grads[i])?;
                    let vel = self.first[i].as_mut_slice();
                    for ((w, v), &g) in p.as_mut_slice().iter_mut().zip(vel).zip(grads[i].as_slice()) {
                        *v = momentum * *v + g;
                        *w -= lr * *v;
                    }
                }
            }
        }
        Ok(())
    }
}
