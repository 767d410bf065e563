//! Guide prototypes: one fixed `K`-dimensional target per class.
//!
//! Multi-hot block prototypes put `m` ones on disjoint, contiguous column
//! blocks (`[i*m, (i+1)*m)` for class `i`), so every pair of prototypes
//! differs in exactly `2m` positions. Columns past `C*m` stay zero in every
//! prototype. Random prototypes draw every entry uniformly from `[0, 1)` and
//! stand in for embedding-style class vectors with uneven spacing.

use serde::{Deserialize, Serialize};

use crate::error::{GucError, Result};
use crate::numeric::{Matrix, Rng64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrototypeKind {
    MultiHotBlock { ones: usize },
    RandomUnit { seed: u64 },
}

/// Separation regimes for block prototypes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Separation {
    /// `m = floor(K/C)`, the largest disjoint support.
    HMax,
    /// `m = max(1, floor(floor(K/C) / 2))`.
    HHalf,
    /// One-hot, `m = 1`.
    H2,
}

impl Separation {
    pub fn ones(self, classes: usize, dim: usize) -> usize {
        let max = dim / classes.max(1);
        match self {
            Separation::HMax => max,
            Separation::HHalf => (max / 2).max(1),
            Separation::H2 => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeSet {
    vectors: Matrix,
    kind: PrototypeKind,
}

impl PrototypeSet {
    pub fn multi_hot(classes: usize, dim: usize, ones: usize) -> Result<Self> {
        if classes == 0 {
            return Err(GucError::InvalidArgument("need at least one class".into()));
        }
        if dim < classes {
            return Err(GucError::PrototypeDimension { classes, dim });
        }
        if ones == 0 || ones > dim / classes {
            return Err(GucError::InfeasibleSupport { classes, dim, ones });
        }
        let mut vectors = Matrix::zeros(classes, dim);
        for c in 0..classes {
            vectors.row_mut(c)[c * ones..(c + 1) * ones].fill(1.0);
        }
        Ok(PrototypeSet { vectors, kind: PrototypeKind::MultiHotBlock { ones } })
    }

    pub fn with_separation(classes: usize, dim: usize, level: Separation) -> Result<Self> {
        if dim < classes {
            return Err(GucError::PrototypeDimension { classes, dim });
        }
        Self::multi_hot(classes, dim, level.ones(classes, dim))
    }

    pub fn random_unit(classes: usize, dim: usize, seed: u64) -> Result<Self> {
        if classes == 0 || dim == 0 {
            return Err(GucError::InvalidArgument(format!(
                "random prototypes need C >= 1 and K >= 1, got C={classes}, K={dim}"
            )));
        }
        let mut rng = Rng64::new(seed);
        let data = (0..classes * dim).map(|_| rng.uniform()).collect();
        Ok(PrototypeSet {
            vectors: Matrix::new(classes, dim, data)?,
            kind: PrototypeKind::RandomUnit { seed },
        })
    }

    /// Wraps an explicit matrix. Used when loading prototypes from disk.
    pub fn from_matrix(vectors: Matrix, kind: PrototypeKind) -> Result<Self> {
        if let PrototypeKind::MultiHotBlock { ones } = kind {
            // Shape feasibility; any disjoint m-hot layout is accepted, not only the block one.
            Self::multi_hot(vectors.rows(), vectors.cols(), ones)?;
            let valid = vectors.as_slice().iter().all(|&v| v == 0.0 || v == 1.0)
                && vectors.iter_rows().all(|r| r.iter().filter(|&&v| v == 1.0).count() == ones)
                && (0..vectors.cols()).all(|c| (0..vectors.rows()).filter(|&r| vectors.get(r, c) == 1.0).count() <= 1);
            if !valid {
                return Err(GucError::InvariantViolation(
                    "matrix is not a disjoint multi-hot prototype set".into(),
                ));
            }
        }
        Ok(PrototypeSet { vectors, kind })
    }

    pub fn num_classes(&self) -> usize {
        self.vectors.rows()
    }

    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }

    pub fn kind(&self) -> PrototypeKind {
        self.kind
    }

    pub fn prototype(&self, class: usize) -> &[f64] {
        self.vectors.row(class)
    }

    /// Pairwise Hamming distances between block prototypes.
    pub fn pairwise_hamming(&self) -> Result<Vec<Vec<usize>>> {
        if let PrototypeKind::RandomUnit { .. } = self.kind {
            return Err(GucError::UnsupportedKind("random-unit"));
        }
        let c = self.num_classes();
        let mut out = vec![vec![0; c]; c];
        for i in 0..c {
            for j in (i + 1)..c {
                let d = self
                    .prototype(i)
                    .iter()
                    .zip(self.prototype(j))
                    .filter(|(a, b)| a != b)
                    .count();
                out[i][j] = d;
                out[j][i] = d;
            }
        }
        Ok(out)
    }

    /// Squared Euclidean distances between all prototype pairs `i < j`.
    pub fn pairwise_sq_distances(&self) -> Vec<f64> {
        let c = self.num_classes();
        let mut out = Vec::with_capacity(c * c.saturating_sub(1) / 2);
        for i in 0..c {
            for j in (i + 1)..c {
                let d = self
                    .prototype(i)
                    .iter()
                    .zip(self.prototype(j))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                out.push(d);
            }
        }
        out
    }

    /// Reassigns prototypes to classes: class `c` of the result gets the
    /// prototype of class `perm[c]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.num_classes())?;
        Ok(PrototypeSet { vectors: self.vectors.select_rows(perm), kind: self.kind })
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(GucError::InvalidArgument(format!("permutation of length {} for {n} classes", perm.len())));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(GucError::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}
