//! Trains a small prototype-guided model, saves it, reloads it and checks
//! that predictions are unchanged.
//!
//! cargo run --release --example checkpoint_roundtrip -- [path]

use gucnet::data::{gen_gaussian_mixture, MixtureParams};
use gucnet::eval::evaluate;
use gucnet::model::{load_checkpoint, save_checkpoint, ModelMode};
use gucnet::prototypes::{PrototypeSet, Separation};
use gucnet::training::{train_prototype, TrainConfig};

fn main() -> gucnet::Result<()> {
    let path = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("model.gucw"), Into::into);
    let x = gen_gaussian_mixture(&MixtureParams { classes: 5, dim: 16, per_class: 60, radius: 1.0, sigma: 0.4, seed: 3 })?;
    let mut cfg = TrainConfig::new(ModelMode::Prototype);
    cfg.epochs = 20;
    cfg.hidden = vec![64, 32];
    cfg.latent_dim = 20;
    let g = PrototypeSet::with_separation(5, 20, Separation::HMax)?;
    let out = train_prototype(&x, &g, &cfg)?;

    save_checkpoint(&out.model, &path)?;
    let size = std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
    println!("wrote {} ({size} bytes, {} parameters)", path.display(), out.model.num_params());

    let loaded = load_checkpoint(&path)?;
    let (f, l) = x.select(&out.split.test);
    let before = evaluate(&out.model, &f, &l)?;
    let after = evaluate(&loaded, &f, &l)?;
    assert_eq!(before, after);
    println!("test accuracy {:.4} before and after reload", after.accuracy);
    println!("prototypes restored: {:?}", loaded.prototypes().map(|p| p.kind()));
    Ok(())
}
