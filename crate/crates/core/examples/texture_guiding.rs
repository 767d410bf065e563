//! Trains two towers into a shared latent space: the cluttered data and a
//! well-separated guide set, co-binned class by class.
//!
//! cargo run --release --example texture_guiding -- [epochs] [shuffle-seed]

use gucnet::data::{gen_gaussian_mixture, BinningKind, CoBinning, MixtureParams};
use gucnet::eval::evaluate;
use gucnet::model::ModelMode;
use gucnet::training::{train_texture, TrainConfig};

fn main() -> gucnet::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs = args.next().map_or(10, |a| a.parse().expect("epochs"));
    let kind = args.next().map_or(BinningKind::Identity, |s| BinningKind::Shuffled { seed: s.parse().expect("seed") });

    let x = gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 64, per_class: 400, radius: 1.0, sigma: 0.9, seed: 1 })?;
    let y = gen_gaussian_mixture(&MixtureParams { classes: 7, dim: 64, per_class: 400, radius: 1.0, sigma: 0.05, seed: 2 })?;
    let binning = CoBinning::new(x.num_classes(), kind);
    println!("guide cluster -> class: {:?}", binning.mapping());

    let mut cfg = TrainConfig::new(ModelMode::Texture);
    cfg.epochs = epochs;
    cfg.seed = 1;
    let out = train_texture(&x, &y, &binning, &cfg)?;
    for m in &out.metrics {
        println!("epoch {:>3}  ce {:.4}  train {:.3}  test {:.3}", m.epoch, m.ce_loss, m.train_acc, m.test_acc);
    }

    // Only the X tower and head run at inference time.
    let (f, l) = x.select(&out.split.test);
    let report = evaluate(&out.model, &f, &l)?;
    println!("test accuracy {:.4}", report.accuracy);
    println!("per-class recall: {:?}", report.per_class_recall);
    Ok(())
}
