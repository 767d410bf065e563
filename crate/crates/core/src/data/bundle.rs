use crate::error::{GucError, Result};
use crate::numeric::Matrix;

/// Feature rows with one class id per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    features: Matrix,
    labels: Vec<usize>,
    num_classes: usize,
    name: String,
}

impl DatasetBundle {
    /// Validates that labels are in range and that every class occurs.
    pub fn new(features: Matrix, labels: Vec<usize>, num_classes: usize, name: impl Into<String>) -> Result<Self> {
        if features.rows() == 0 {
            return Err(GucError::EmptyDataset);
        }
        if labels.len() != features.rows() {
            return Err(GucError::InvariantViolation(format!(
                "{} labels for {} feature rows",
                labels.len(),
                features.rows()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= num_classes) {
            return Err(GucError::LabelOutOfRange { label: bad, classes: num_classes });
        }
        if !features.is_finite() {
            return Err(GucError::NonFinite("feature matrix".into()));
        }
        let bundle = DatasetBundle { features, labels, num_classes, name: name.into() };
        if let Some(empty) = bundle.class_counts().iter().position(|&n| n == 0) {
            return Err(GucError::InvariantViolation(format!("class {empty} has no samples")));
        }
        Ok(bundle)
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Features and labels of the given rows, without re-validation.
    pub fn select(&self, indices: &[usize]) -> (Matrix, Vec<usize>) {
        (self.features.select_rows(indices), indices.iter().map(|&i| self.labels[i]).collect())
    }

    /// Per-class feature means (`C x D`).
    pub fn class_means(&self) -> Matrix {
        let mut means = Matrix::zeros(self.num_classes, self.dim());
        for (row, &l) in self.features.iter_rows().zip(&self.labels) {
            for (m, &v) in means.row_mut(l).iter_mut().zip(row) {
                *m += v;
            }
        }
        for (c, n) in self.class_counts().into_iter().enumerate() {
            means.row_mut(c).iter_mut().for_each(|m| *m /= n as f64);
        }
        means
    }

    /// Accuracy of assigning each row to the class with the nearest mean.
    pub fn nearest_mean_accuracy(&self) -> f64 {
        let means = self.class_means();
        let correct = self
            .features
            .iter_rows()
            .zip(&self.labels)
            .filter(|(row, &l)| {
                let dist = |c: usize| -> f64 { row.iter().zip(means.row(c)).map(|(a, b)| (a - b) * (a - b)).sum() };
                let best = (0..self.num_classes).min_by(|&a, &b| dist(a).total_cmp(&dist(b))).unwrap();
                best == l
            })
            .count();
        correct as f64 / self.len() as f64
    }
}
