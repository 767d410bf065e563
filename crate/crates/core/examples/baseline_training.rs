//! Trains the plain classifier on a cluttered synthetic mixture.
//!
//! cargo run --release --example baseline_training -- [epochs]

use gucnet::data::{gen_gaussian_mixture, MixtureParams};
use gucnet::model::ModelMode;
use gucnet::training::{train_baseline, TrainConfig};

fn main() -> gucnet::Result<()> {
    let epochs = std::env::args().nth(1).map_or(10, |a| a.parse().expect("epochs"));
    let x = gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 64, per_class: 400, radius: 1.0, sigma: 0.9, seed: 1 })?;
    println!("{}: {} samples, nearest-mean accuracy {:.3}", x.name(), x.len(), x.nearest_mean_accuracy());

    let mut cfg = TrainConfig::new(ModelMode::Baseline);
    cfg.epochs = epochs;
    cfg.seed = 1;
    let out = train_baseline(&x, &cfg)?;
    for m in &out.metrics {
        println!("epoch {:>3}  ce {:.4}  train {:.3}  test {:.3}", m.epoch, m.ce_loss, m.train_acc, m.test_acc);
    }
    println!("final test accuracy {:.4}", out.final_report.accuracy);
    Ok(())
}
