use serde::{Deserialize, Serialize};

use super::DatasetBundle;
use crate::error::{GucError, Result};
use crate::numeric::{Matrix, Rng64};

/// Isotropic Gaussian mixture with class means on a sphere.
///
/// `sigma / radius` is the clutter knob: around 1 the classes overlap
/// heavily, near 0 they are trivially separable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureParams {
    pub classes: usize,
    pub dim: usize,
    pub per_class: usize,
    #[serde(default = "one")]
    pub radius: f64,
    pub sigma: f64,
    pub seed: u64,
}

fn one() -> f64 {
    1.0
}

pub fn gen_gaussian_mixture(p: &MixtureParams) -> Result<DatasetBundle> {
    if p.classes < 2 || p.dim < p.classes || p.per_class == 0 {
        return Err(GucError::InvalidArgument(format!(
            "mixture needs C >= 2, D >= C and at least one sample per class (C={}, D={}, n={})",
            p.classes, p.dim, p.per_class
        )));
    }
    if !(p.radius > 0.0 && p.radius.is_finite()) || !(p.sigma >= 0.0 && p.sigma.is_finite()) {
        return Err(GucError::InvalidArgument(format!("radius {} / sigma {} out of range", p.radius, p.sigma)));
    }
    let mut rng = Rng64::new(p.seed);
    let mut means = Matrix::zeros(p.classes, p.dim);
    for c in 0..p.classes {
        // Normalized Gaussian direction is uniform on the sphere.
        let row = means.row_mut(c);
        loop {
            row.iter_mut().for_each(|v| *v = rng.normal());
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-12 {
                row.iter_mut().for_each(|v| *v *= p.radius / norm);
                break;
            }
        }
    }
    let n = p.classes * p.per_class;
    let mut features = Matrix::zeros(n, p.dim);
    let mut labels = Vec::with_capacity(n);
    for c in 0..p.classes {
        for i in 0..p.per_class {
            let row = features.row_mut(c * p.per_class + i);
            for (v, &m) in row.iter_mut().zip(means.row(c)) {
                *v = m + p.sigma * rng.normal();
            }
            labels.push(c);
        }
    }
    let name = format!("mixture-c{}-d{}-s{}", p.classes, p.dim, p.seed);
    DatasetBundle::new(features, labels, p.classes, name)
}
