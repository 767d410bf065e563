//! Accuracy and confusion reports, plus the prototype-separability and
//! co-binning ablation harnesses.

mod ablation;
mod report;


pub use report::{evaluate, evaluate_view, EvalReport};
pub use ablation::{ablate_binning, ablate_hamming, AblationReport, ConditionResult, HammingCondition};
