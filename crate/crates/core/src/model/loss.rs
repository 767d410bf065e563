use crate::error::{GucError, Result};
use crate::numeric::{softmax_rows, Matrix};
use crate::prototypes::PrototypeSet;

fn check_labels(labels: &[usize], rows: usize, classes: usize) -> Result<()> {
    if labels.len() != rows {
        return Err(GucError::ShapeMismatch { op: "labels", left: (rows, classes), right: (labels.len(), 1) });
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= classes) {
        return Err(GucError::LabelOutOfRange { label: bad, classes });
    }
    Ok(())
}

/// Mean softmax cross-entropy and its gradient `(softmax - onehot) / B`.
pub fn cross_entropy_loss(logits: &Matrix, labels: &[usize]) -> Result<(f64, Matrix)> {
    let (b, c) = logits.shape();
    check_labels(labels, b, c)?;
    if b == 0 {
        return Ok((0.0, Matrix::zeros(0, c)));
    }
    let mut grad = softmax_rows(logits);
    let mut loss = 0.0;
    for (i, &y) in labels.iter().enumerate() {
        // log-sum-exp form keeps the loss finite when the true-class
        // probability underflows.
        let row = logits.row(i);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + row.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        loss += lse - row[y];
        grad.row_mut(i)[y] -= 1.0;
    }
    grad.scale(1.0 / b as f64);
    Ok((loss / b as f64, grad))
}

/// Mean absolute deviation of each latent row from its class prototype,
/// averaged over all `B*K` entries. The gradient is `sign(latent - g) / (B*K)`
/// with `sign(0) = 0`.
pub fn matching_loss(latent: &Matrix, labels: &[usize], prototypes: Option<&PrototypeSet>) -> Result<(f64, Matrix)> {
    let g = prototypes.ok_or(GucError::MissingPrototypes)?;
    let (b, k) = latent.shape();
    if g.dim() != k {
        return Err(GucError::ShapeMismatch { op: "matching_loss", left: latent.shape(), right: g.vectors().shape() });
    }
    check_labels(labels, b, g.num_classes())?;
    if b == 0 {
        return Ok((0.0, Matrix::zeros(0, k)));
    }
    let scale = 1.0 / (b * k) as f64;
    let mut grad = Matrix::zeros(b, k);
    let mut loss = 0.0;
    for (i, &y) in labels.iter().enumerate() {
        let target = g.prototype(y);
        for ((d, &z), &t) in grad.row_mut(i).iter_mut().zip(latent.row(i)).zip(target) {
            let diff = z - t;
            loss += diff.abs();
            *d = if diff > 0.0 {
                scale
            } else if diff < 0.0 {
                -scale
            } else {
                0.0
            };
        }
    }
    Ok((loss * scale, grad))
}

/// `ce + alpha * ml`.
pub fn total_loss(ce: f64, ml: f64, alpha: f64) -> f64 {
    ce + alpha * ml
}
