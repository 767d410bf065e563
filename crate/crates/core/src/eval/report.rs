use serde::{Deserialize, Serialize};

use crate::data::DatasetBundle;
use crate::error::{GucError, Result};
use crate::model::GucnetModel;
use crate::numeric::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    /// `None` for classes absent from the evaluated set.
    pub per_class_recall: Vec<Option<f64>>,
    pub num_test: usize,
}

impl EvalReport {
    pub fn from_predictions(predictions: &[usize], labels: &[usize], num_classes: usize) -> Result<Self> {
        if predictions.len() != labels.len() {
            return Err(GucError::InvalidArgument(format!(
                "{} predictions for {} labels",
                predictions.len(),
                labels.len()
            )));
        }
        let mut confusion = vec![vec![0usize; num_classes]; num_classes];
        for (&p, &l) in predictions.iter().zip(labels) {
            if l >= num_classes || p >= num_classes {
                return Err(GucError::LabelOutOfRange { label: l.max(p), classes: num_classes });
            }
            confusion[l][p] += 1;
        }
        let n = labels.len();
        let trace: usize = (0..num_classes).map(|c| confusion[c][c]).sum();
        let per_class_recall = confusion
            .iter()
            .enumerate()
            .map(|(c, row)| {
                let total: usize = row.iter().sum();
                (total > 0).then(|| row[c] as f64 / total as f64)
            })
            .collect();
        Ok(EvalReport {
            accuracy: if n == 0 { 0.0 } else { trace as f64 / n as f64 },
            confusion,
            per_class_recall,
            num_test: n,
        })
    }
}

const EVAL_CHUNK: usize = 1024;

/// Eval-mode predictions of the X tower and head; no guide data involved.
pub fn evaluate(model: &GucnetModel, features: &Matrix, labels: &[usize]) -> Result<EvalReport> {
    if features.cols() != model.input_dim() {
        return Err(GucError::ShapeMismatch {
            op: "evaluate",
            left: features.shape(),
            right: (features.rows(), model.input_dim()),
        });
    }
    let mut predictions = Vec::with_capacity(features.rows());
    let idx: Vec<usize> = (0..features.rows()).collect();
    for chunk in idx.chunks(EVAL_CHUNK) {
        let part = if chunk.len() == features.rows() { features.clone() } else { features.select_rows(chunk) };
        predictions.extend(model.predict(&part)?);
    }
    EvalReport::from_predictions(&predictions, labels, model.num_classes())
}

pub fn evaluate_view(model: &GucnetModel, data: &DatasetBundle, indices: &[usize]) -> Result<EvalReport> {
    if data.num_classes() != model.num_classes() {
        return Err(GucError::ClassCountMismatch(format!(
            "data has {} classes, model {}",
            data.num_classes(),
            model.num_classes()
        )));
    }
    let (x, y) = data.select(indices);
    evaluate(model, &x, &y)
}
