use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numeric::Rng64;
use crate::prototypes::check_permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinningKind {
    Identity,
    Shuffled { seed: u64 },
}

/// Assignment of guide clusters to experimental classes: guide class `g`
/// shares a bin (and a training label) with experimental class `mapping[g]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoBinning {
    mapping: Vec<usize>,
    kind: BinningKind,
}

impl CoBinning {
    pub fn new(classes: usize, kind: BinningKind) -> Self {
        let mapping = match kind {
            BinningKind::Identity => (0..classes).collect(),
            BinningKind::Shuffled { seed } => Rng64::new(seed).permutation(classes),
        };
        CoBinning { mapping, kind }
    }

    pub fn from_mapping(mapping: Vec<usize>, kind: BinningKind) -> Result<Self> {
        check_permutation(&mapping, mapping.len())?;
        Ok(CoBinning { mapping, kind })
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn kind(&self) -> BinningKind {
        self.kind
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    #[inline]
    pub fn map(&self, guide_label: usize) -> usize {
        self.mapping[guide_label]
    }

    pub fn fixed_points(&self) -> usize {
        self.mapping.iter().enumerate().filter(|(i, &m)| *i == m).count()
    }
}
