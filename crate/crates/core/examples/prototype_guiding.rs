//! Trains with maximally separated block prototypes as the guide and
//! compares against the baseline on the same split.
//!
//! cargo run --release --example prototype_guiding -- [epochs] [joint]

use gucnet::data::{gen_gaussian_mixture, MixtureParams};
use gucnet::model::ModelMode;
use gucnet::prototypes::{PrototypeSet, Separation};
use gucnet::training::{train_baseline, train_prototype, Alternation, TrainConfig};

fn main() -> gucnet::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs = args.next().map_or(10, |a| a.parse().expect("epochs"));
    let joint = args.next().as_deref() == Some("joint");

    let x = gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 64, per_class: 400, radius: 1.0, sigma: 0.9, seed: 1 })?;
    let mut cfg = TrainConfig::new(ModelMode::Prototype);
    cfg.epochs = epochs;
    cfg.seed = 1;
    if joint {
        cfg.alternation = Alternation::Joint;
    }
    let g = PrototypeSet::with_separation(x.num_classes(), cfg.latent_dim, Separation::HMax)?;
    println!("prototypes: {:?}, alternation {:?}", g.kind(), cfg.alternation);

    let guided = train_prototype(&x, &g, &cfg)?;
    for m in &guided.metrics {
        println!(
            "epoch {:>3}  ce {:.4}  ml {:.4}  train {:.3}  test {:.3}",
            m.epoch,
            m.ce_loss,
            m.ml_loss.unwrap_or(f64::NAN),
            m.train_acc,
            m.test_acc
        );
    }
    println!("steps: {:?}", guided.steps);

    let mut base_cfg = cfg.clone();
    base_cfg.mode = ModelMode::Baseline;
    let base = train_baseline(&x, &base_cfg)?;
    println!(
        "test accuracy: prototype {:.4}, baseline {:.4}",
        guided.final_report.accuracy, base.final_report.accuracy
    );
    Ok(())
}
