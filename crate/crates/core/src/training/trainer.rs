use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{Alternation, TrainConfig};
use super::optim::OptimizerState;
use crate::data::{paired_batches, shuffled_batches, stratified_split, CoBinning, DatasetBundle, GuideSampler, SplitView};
use crate::error::{GucError, Result};
use crate::eval::{evaluate_view, EvalReport};
use crate::model::{GucnetModel, ModelMode, Objective, StepResult};
use crate::numeric::{Rng64, Stream};
use crate::prototypes::PrototypeSet;

/// One line of the metrics stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub ce_loss: f64,
    pub ml_loss: Option<f64>,
    /// Accuracy of the training-mode forward passes made during the epoch.
    pub train_acc: f64,
    pub test_acc: f64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StepCounts {
    pub ce_steps: usize,
    pub ml_steps: usize,
    pub joint_steps: usize,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: GucnetModel,
    pub metrics: Vec<EpochMetrics>,
    pub split: SplitView,
    pub final_report: EvalReport,
    pub steps: StepCounts,
}

/// Guide dataset and its class assignment for texture training.
#[derive(Debug, Clone, Copy)]
pub struct GuideData<'a> {
    pub data: &'a DatasetBundle,
    pub binning: &'a CoBinning,
}

fn expect_mode(cfg: &TrainConfig, mode: ModelMode) -> Result<()> {
    if cfg.mode != mode {
        return Err(GucError::Config(format!("config mode {:?} used for {:?} training", cfg.mode, mode)));
    }
    cfg.validate()
}

/// Cross-entropy only, X tower and head.
pub fn train_baseline(x: &DatasetBundle, cfg: &TrainConfig) -> Result<TrainOutcome> {
    expect_mode(cfg, ModelMode::Baseline)?;
    let split = stratified_split(x, cfg.split_ratio, cfg.seed)?;
    let model = GucnetModel::new(&cfg.architecture(x.dim(), x.num_classes(), None), ModelMode::Baseline, None, cfg.seed)?;
    fit(model, x, &split, None, cfg)
}

/// Cross-entropy plus `alpha`-weighted L1 matching of latents to class
/// prototypes.
pub fn train_prototype(x: &DatasetBundle, prototypes: &PrototypeSet, cfg: &TrainConfig) -> Result<TrainOutcome> {
    expect_mode(cfg, ModelMode::Prototype)?;
    if prototypes.num_classes() != x.num_classes() {
        return Err(GucError::ClassCountMismatch(format!(
            "{} prototypes for {} classes",
            prototypes.num_classes(),
            x.num_classes()
        )));
    }
    if prototypes.dim() != cfg.latent_dim {
        return Err(GucError::ShapeMismatch {
            op: "prototype dim vs latent_dim",
            left: prototypes.vectors().shape(),
            right: (x.num_classes(), cfg.latent_dim),
        });
    }
    let split = stratified_split(x, cfg.split_ratio, cfg.seed)?;
    let model = GucnetModel::new(
        &cfg.architecture(x.dim(), x.num_classes(), None),
        ModelMode::Prototype,
        Some(prototypes.clone()),
        cfg.seed,
    )?;
    fit(model, x, &split, None, cfg)
}

/// Shared-head cross-entropy over paired X and co-binned guide batches.
pub fn train_texture(x: &DatasetBundle, y: &DatasetBundle, binning: &CoBinning, cfg: &TrainConfig) -> Result<TrainOutcome> {
    expect_mode(cfg, ModelMode::Texture)?;
    if x.num_classes() != y.num_classes() || binning.len() != x.num_classes() {
        return Err(GucError::ClassCountMismatch(format!(
            "X has {} classes, guide {}, binning {}",
            x.num_classes(),
            y.num_classes(),
            binning.len()
        )));
    }
    let split = stratified_split(x, cfg.split_ratio, cfg.seed)?;
    let model = GucnetModel::new(
        &cfg.architecture(x.dim(), x.num_classes(), Some(y.dim())),
        ModelMode::Texture,
        None,
        cfg.seed,
    )?;
    fit(model, x, &split, Some(GuideData { data: y, binning }), cfg)
}

#[derive(Default)]
struct EpochTally {
    ce_sum: f64,
    ce_count: usize,
    ml_sum: f64,
    seen: usize,
    correct: usize,
    has_ml: bool,
}

impl EpochTally {
    /// `ce_count` is the number of samples the step's cross-entropy averages over.
    fn add(&mut self, step: &StepResult, x_labels: &[usize], ce_count: usize) {
        self.ce_sum += step.ce_loss * ce_count as f64;
        self.ce_count += ce_count;
        if let Some(ml) = step.ml_loss {
            self.ml_sum += ml * x_labels.len() as f64;
            self.has_ml = true;
        }
        self.correct += step.predictions.iter().zip(x_labels).filter(|(p, l)| p == l).count();
        self.seen += x_labels.len();
    }
}

/// Trains an already constructed model on `split` of `x`. The model's mode
/// selects the procedure; texture mode requires `guide`.
pub fn fit(
    mut model: GucnetModel,
    x: &DatasetBundle,
    split: &SplitView,
    guide: Option<GuideData<'_>>,
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    let mode = model.mode();
    if mode == ModelMode::Texture && guide.is_none() {
        return Err(GucError::Config("texture training needs guide data".into()));
    }
    let mut opt = OptimizerState::new(cfg.optimizer, &model.params());
    let mut shuffle_rng = Rng64::with_stream(cfg.seed, Stream::Shuffle);
    let mut dropout_rng = Rng64::with_stream(cfg.seed, Stream::Dropout);
    let mut sampler = match guide {
        Some(g) => Some(GuideSampler::new((0..g.data.len()).collect(), Rng64::with_stream(cfg.seed, Stream::GuideShuffle))?),
        None => None,
    };
    let mut steps = StepCounts::default();
    let mut metrics = Vec::with_capacity(cfg.epochs);
    let mut last_report = None;

    for epoch in 1..=cfg.epochs {
        let started = Instant::now();
        model.set_training(true);
        let mut tally = EpochTally::default();

        match (mode, guide, sampler.as_mut()) {
            (ModelMode::Texture, Some(g), Some(sampler)) => {
                let batches = paired_batches(x, &split.train, g.data, sampler, g.binning, cfg.batch_size, &mut shuffle_rng)?;
                for b in batches {
                    let step = model.texture_step(&b.x, &b.x_labels, &b.y, &b.y_labels, &mut dropout_rng)?;
                    tally.add(&step, &b.x_labels, b.x_labels.len() + b.y_labels.len());
                    opt.step(model.params_mut(), &step.grads.tensors(), cfg.learning_rate)?;
                    steps.joint_steps += 1;
                }
            }
            _ => {
                for (i, idx) in shuffled_batches(&split.train, cfg.batch_size, &mut shuffle_rng).iter().enumerate() {
                    let (xb, lb) = x.select(idx);
                    let objective = match (mode, cfg.alternation) {
                        (ModelMode::Prototype, Alternation::Joint) => {
                            steps.joint_steps += 1;
                            Objective::Joint { alpha: cfg.alpha }
                        }
                        (ModelMode::Prototype, Alternation::PerBatch) if i % 2 == 1 => {
                            steps.ml_steps += 1;
                            Objective::Matching { alpha: cfg.alpha }
                        }
                        _ => {
                            steps.ce_steps += 1;
                            Objective::CrossEntropy
                        }
                    };
                    let step = model.guided_step(&xb, &lb, objective, &mut dropout_rng)?;
                    tally.add(&step, &lb, lb.len());
                    opt.step(model.params_mut(), &step.grads.tensors(), cfg.learning_rate)?;
                }
            }
        }

        model.set_training(false);
        let report = evaluate_view(&model, x, &split.test)?;
        let ce_loss = tally.ce_sum / tally.ce_count.max(1) as f64;
        let ml_loss = tally.has_ml.then(|| tally.ml_sum / tally.seen.max(1) as f64);
        if !ce_loss.is_finite() || ml_loss.is_some_and(|m| !m.is_finite()) {
            return Err(GucError::NonFinite(format!("loss in epoch {epoch}")));
        }
        metrics.push(EpochMetrics {
            epoch,
            ce_loss,
            ml_loss,
            train_acc: tally.correct as f64 / tally.seen.max(1) as f64,
            test_acc: report.accuracy,
            wall_ms: if cfg.record_wall_time { started.elapsed().as_millis() as u64 } else { 0 },
        });
        last_report = Some(report);
    }

    Ok(TrainOutcome {
        model,
        metrics,
        split: split.clone(),
        final_report: last_report.expect("at least one epoch"),
        steps,
    })
}
