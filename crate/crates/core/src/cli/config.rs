use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{gen_gaussian_mixture, load_csv, load_gfv1, BinningKind, CoBinning, DatasetBundle, MixtureParams};
use crate::error::{GucError, Result};
use crate::model::ModelMode;
use crate::prototypes::{PrototypeKind, PrototypeSet, Separation};
use crate::training::{Alternation, OptimizerKind, TrainConfig};

/// Where a labeled feature bundle comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    Gfv1 { path: PathBuf },
    Csv {
        path: PathBuf,
        #[serde(default)]
        label_column: Option<usize>,
    },
    Synthetic(MixtureParams),
}

impl DataSource {
    /// Loads the bundle. Relative paths resolve against `base`.
    pub fn load(&self, base: &Path) -> Result<DatasetBundle> {
        match self {
            DataSource::Gfv1 { path } => load_gfv1(base.join(path)),
            DataSource::Csv { path, label_column } => load_csv(base.join(path), *label_column),
            DataSource::Synthetic(p) => gen_gaussian_mixture(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PrototypeChoice {
    HMax,
    HHalf,
    H2,
    MultiHotBlock { ones: usize },
    RandomUnit { seed: u64 },
}

impl PrototypeChoice {
    pub fn build(self, classes: usize, dim: usize) -> Result<PrototypeSet> {
        match self {
            PrototypeChoice::HMax => PrototypeSet::with_separation(classes, dim, Separation::HMax),
            PrototypeChoice::HHalf => PrototypeSet::with_separation(classes, dim, Separation::HHalf),
            PrototypeChoice::H2 => PrototypeSet::with_separation(classes, dim, Separation::H2),
            PrototypeChoice::MultiHotBlock { ones } => PrototypeSet::multi_hot(classes, dim, ones),
            PrototypeChoice::RandomUnit { seed } => PrototypeSet::random_unit(classes, dim, seed),
        }
    }
}

impl From<PrototypeKind> for PrototypeChoice {
    fn from(k: PrototypeKind) -> Self {
        match k {
            PrototypeKind::MultiHotBlock { ones } => PrototypeChoice::MultiHotBlock { ones },
            PrototypeKind::RandomUnit { seed } => PrototypeChoice::RandomUnit { seed },
        }
    }
}

fn identity_binning() -> BinningKind {
    BinningKind::Identity
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GuideSource {
    Prototypes(PrototypeChoice),
    Texture {
        data: DataSource,
        #[serde(default = "identity_binning")]
        binning: BinningKind,
    },
}

/// A complete experiment: training hyperparameters, data, guide and
/// output location. Omitted hyperparameters take the defaults of
/// [`TrainConfig::new`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: ModelMode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternation: Option<Alternation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latent_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dropout: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_wall_time: Option<bool>,
    pub data: DataSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guide: Option<GuideSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// Everything a training or ablation run needs, loaded and checked.
#[derive(Debug)]
pub struct ResolvedExperiment {
    pub train: TrainConfig,
    pub data: DatasetBundle,
    pub guide: ResolvedGuide,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug)]
pub enum ResolvedGuide {
    None,
    Prototypes(PrototypeSet),
    Texture { data: DatasetBundle, binning: CoBinning },
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GucError::Config(format!("invalid experiment config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| GucError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn train_config(&self) -> TrainConfig {
        let mut c = TrainConfig::new(self.mode);
        c.seed = self.seed;
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        take!(epochs, learning_rate, optimizer, batch_size, alpha, alternation, latent_dim, hidden, dropout, split_ratio, record_wall_time);
        c
    }

    /// Checks hyperparameters and that the guide matches the mode.
    pub fn validate(&self) -> Result<TrainConfig> {
        let cfg = self.train_config();
        cfg.validate()?;
        match (self.mode, &self.guide) {
            (ModelMode::Baseline, None)
            | (ModelMode::Prototype, Some(GuideSource::Prototypes(_)))
            | (ModelMode::Texture, Some(GuideSource::Texture { .. })) => Ok(cfg),
            (ModelMode::Baseline, Some(_)) => Err(GucError::Config("baseline mode takes no guide".into())),
            (ModelMode::Prototype, _) => Err(GucError::Config("prototype mode needs a \"prototypes\" guide".into())),
            (ModelMode::Texture, _) => Err(GucError::Config("texture mode needs a \"texture\" guide".into())),
        }
    }

    /// Validates, then loads data and guide. Relative paths resolve against
    /// `base`, normally the config file's directory.
    pub fn resolve(&self, base: &Path) -> Result<ResolvedExperiment> {
        let train = self.validate()?;
        let data = self.data.load(base)?;
        let guide = match &self.guide {
            None => ResolvedGuide::None,
            Some(GuideSource::Prototypes(choice)) => {
                ResolvedGuide::Prototypes(choice.build(data.num_classes(), train.latent_dim)?)
            }
            Some(GuideSource::Texture { data: src, binning }) => {
                let y = src.load(base)?;
                if y.num_classes() != data.num_classes() {
                    return Err(GucError::ClassCountMismatch(format!(
                        "data has {} classes, guide has {}",
                        data.num_classes(),
                        y.num_classes()
                    )));
                }
                let binning = CoBinning::new(data.num_classes(), *binning);
                ResolvedGuide::Texture { data: y, binning }
            }
        };
        let output_dir = self.output_dir.as_ref().map(|p| base.join(p));
        Ok(ResolvedExperiment { train, data, guide, output_dir })
    }
}
