//! Texture training with the identity co-binning and with shuffled
//! assignments of guide clusters to classes.
//!
//! cargo run --release --example binning_ablation -- [epochs] [jobs]

use gucnet::data::{gen_gaussian_mixture, MixtureParams};
use gucnet::eval::ablate_binning;
use gucnet::model::ModelMode;
use gucnet::training::TrainConfig;

fn main() -> gucnet::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let epochs = args.next().unwrap_or(10);
    let jobs = args.next().unwrap_or(1);

    let x = gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 64, per_class: 400, radius: 1.0, sigma: 0.9, seed: 1 })?;
    let y = gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 64, per_class: 400, radius: 1.0, sigma: 0.05, seed: 2 })?;
    let mut cfg = TrainConfig::new(ModelMode::Texture);
    cfg.epochs = epochs;
    cfg.seed = 1;

    let report = ablate_binning(&x, &y, &cfg, &[1, 2, 3], jobs)?;
    let same = report.accuracy("same").unwrap_or(f64::NAN);
    for c in &report.conditions {
        println!(
            "{:<11} {:?}  test accuracy {:.4} ({:+.2} pts)",
            c.label,
            c.permutation.as_deref().unwrap_or(&[]),
            c.report.accuracy,
            100.0 * (c.report.accuracy - same)
        );
    }
    Ok(())
}
