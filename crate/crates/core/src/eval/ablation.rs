use serde::{Deserialize, Serialize};

use super::report::EvalReport;
use crate::data::{BinningKind, CoBinning, DatasetBundle};
use crate::error::{GucError, Result};
use crate::model::ModelMode;
use crate::prototypes::{PrototypeSet, Separation};
use crate::training::{train_prototype, train_texture, EpochMetrics, TrainConfig, TrainOutcome};

/// Prototype regimes compared by the separability study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HammingCondition {
    /// Entries uniform in `[0, 1)`, standing in for word-embedding prototypes.
    RandomUnit,
    H2,
    HHalf,
    HMax,
}

impl HammingCondition {
    pub const ALL: [HammingCondition; 4] =
        [HammingCondition::RandomUnit, HammingCondition::H2, HammingCondition::HHalf, HammingCondition::HMax];

    pub fn label(self) -> &'static str {
        match self {
            HammingCondition::RandomUnit => "random",
            HammingCondition::H2 => "H=2",
            HammingCondition::HHalf => "H_max/2",
            HammingCondition::HMax => "H_max",
        }
    }

    pub fn prototypes(self, classes: usize, dim: usize, seed: u64) -> Result<PrototypeSet> {
        let level = match self {
            HammingCondition::RandomUnit => return PrototypeSet::random_unit(classes, dim, seed),
            HammingCondition::H2 => Separation::H2,
            HammingCondition::HHalf => Separation::HHalf,
            HammingCondition::HMax => Separation::HMax,
        };
        PrototypeSet::with_separation(classes, dim, level)
    }
}

/// Outcome of one ablation condition.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionResult {
    pub label: String,
    /// The varied factor, serialized. Everything else is in the shared config.
    pub condition: serde_json::Value,
    pub report: EvalReport,
    pub metrics: Vec<EpochMetrics>,
    pub split_fingerprint: String,
    /// Co-binning permutation (binning study).
    pub permutation: Option<Vec<usize>>,
    /// Pairwise prototype Hamming distance (block prototypes only).
    pub hamming_distance: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AblationReport {
    pub study: String,
    pub config: TrainConfig,
    pub config_fingerprint: String,
    pub conditions: Vec<ConditionResult>,
}

impl AblationReport {
    pub fn accuracy(&self, label: &str) -> Option<f64> {
        self.conditions.iter().find(|c| c.label == label).map(|c| c.report.accuracy)
    }

    pub fn best_accuracy(&self) -> f64 {
        self.conditions.iter().map(|c| c.report.accuracy).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Condition as a single JSON object: shared config plus the varied
    /// factor. Two conditions differ only in that factor.
    pub fn condition_config(&self, index: usize) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.config).expect("config serializes");
        v.as_object_mut()
            .expect("config is an object")
            .insert("varied".into(), self.conditions[index].condition.clone());
        v
    }
}

fn fingerprint_hex(h: u64) -> String {
    format!("{h:016x}")
}

fn config_fingerprint(cfg: &TrainConfig) -> String {
    let text = serde_json::to_string(cfg).expect("config serializes");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    fingerprint_hex(h)
}

/// Runs `run` over `items` with at most `jobs` conditions in flight and
/// returns results in input order.
fn run_conditions<T, F>(items: &[T], jobs: usize, run: F) -> Result<Vec<ConditionResult>>
where
    T: Sync,
    F: Fn(&T) -> Result<ConditionResult> + Sync,
{
    let jobs = jobs.max(1);
    if jobs == 1 {
        return items.iter().map(&run).collect();
    }
    let mut out = Vec::with_capacity(items.len());
    for chunk in items.chunks(jobs) {
        let results: Vec<Result<ConditionResult>> = std::thread::scope(|s| {
            let handles: Vec<_> = chunk.iter().map(|item| s.spawn(|| run(item))).collect();
            handles.into_iter().map(|h| h.join().expect("ablation worker panicked")).collect()
        });
        for r in results {
            out.push(r?);
        }
    }
    Ok(out)
}

fn result_from(label: &str, condition: serde_json::Value, outcome: TrainOutcome) -> ConditionResult {
    ConditionResult {
        label: label.to_string(),
        condition,
        split_fingerprint: fingerprint_hex(outcome.split.fingerprint()),
        report: outcome.final_report,
        metrics: outcome.metrics,
        permutation: None,
        hamming_distance: None,
    }
}

/// Trains the prototype model once per prototype regime with identical
/// seeds and split. Random prototypes are drawn with the config seed.
pub fn ablate_hamming(
    x: &DatasetBundle,
    cfg: &TrainConfig,
    conditions: &[HammingCondition],
    jobs: usize,
) -> Result<AblationReport> {
    if cfg.mode != ModelMode::Prototype {
        return Err(GucError::Config("the hamming study needs a prototype-mode config".into()));
    }
    cfg.validate()?;
    let results = run_conditions(conditions, jobs, |&cond| {
        let g = cond.prototypes(x.num_classes(), cfg.latent_dim, cfg.seed)?;
        let outcome = train_prototype(x, &g, cfg)?;
        let mut r = result_from(cond.label(), serde_json::json!({ "prototypes": g.kind() }), outcome);
        r.hamming_distance = g.pairwise_hamming().ok().and_then(|h| h.first().and_then(|row| row.get(1)).copied());
        Ok(r)
    })?;
    Ok(AblationReport {
        study: "hamming".into(),
        config: cfg.clone(),
        config_fingerprint: config_fingerprint(cfg),
        conditions: results,
    })
}

/// Texture training with identity co-binning, then once per shuffle seed.
pub fn ablate_binning(
    x: &DatasetBundle,
    y: &DatasetBundle,
    cfg: &TrainConfig,
    shuffle_seeds: &[u64],
    jobs: usize,
) -> Result<AblationReport> {
    if cfg.mode != ModelMode::Texture {
        return Err(GucError::Config("the binning study needs a texture-mode config".into()));
    }
    cfg.validate()?;
    let kinds: Vec<BinningKind> = std::iter::once(BinningKind::Identity)
        .chain(shuffle_seeds.iter().map(|&seed| BinningKind::Shuffled { seed }))
        .collect();
    let results = run_conditions(&kinds, jobs, |&kind| {
        let binning = CoBinning::new(x.num_classes(), kind);
        let outcome = train_texture(x, y, &binning, cfg)?;
        let label = match kind {
            BinningKind::Identity => "same".to_string(),
            BinningKind::Shuffled { seed } => format!("shuffled-{seed}"),
        };
        let mut r = result_from(&label, serde_json::json!({ "binning": kind }), outcome);
        r.permutation = Some(binning.mapping().to_vec());
        Ok(r)
    })?;
    Ok(AblationReport {
        study: "binning".into(),
        config: cfg.clone(),
        config_fingerprint: config_fingerprint(cfg),
        conditions: results,
    })
}
