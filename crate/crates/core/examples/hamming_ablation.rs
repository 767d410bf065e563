//! Compares random prototypes with block prototypes at three separation
//! levels under one fixed seed and split.
//!
//! cargo run --release --example hamming_ablation -- [epochs] [jobs]

use gucnet::data::{gen_gaussian_mixture, MixtureParams};
use gucnet::eval::{ablate_hamming, HammingCondition};
use gucnet::model::ModelMode;
use gucnet::training::TrainConfig;

fn main() -> gucnet::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let epochs = args.next().unwrap_or(10);
    let jobs = args.next().unwrap_or(1);

    let x = gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 64, per_class: 400, radius: 1.0, sigma: 0.9, seed: 1 })?;
    let mut cfg = TrainConfig::new(ModelMode::Prototype);
    cfg.epochs = epochs;
    cfg.seed = 1;

    let report = ablate_hamming(&x, &cfg, &HammingCondition::ALL, jobs)?;
    for c in &report.conditions {
        let h = c.hamming_distance.map_or("-".to_string(), |h| h.to_string());
        println!("{:<8} H={:<4} test accuracy {:.4}", c.label, h, c.report.accuracy);
    }
    println!("config fingerprint {}", report.config_fingerprint);
    Ok(())
}
