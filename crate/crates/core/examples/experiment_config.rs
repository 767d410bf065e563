//! Runs a JSON experiment config the same way the `gucnet train` command
//! does and prints where the outputs went.
//!
//! cargo run --release --example experiment_config -- [output-dir]

use std::path::PathBuf;

use gucnet::cli::{cmd_train, ExperimentConfig};

const CONFIG: &str = r#"{
    "mode": "prototype",
    "seed": 1,
    "epochs": 5,
    "alpha": 0.01,
    "data": {"synthetic": {"classes": 7, "dim": 64, "per_class": 400, "sigma": 0.9, "seed": 1}},
    "guide": {"prototypes": "h_max"}
}"#;

fn main() -> gucnet::Result<()> {
    let out: PathBuf = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("gucnet-run"), Into::into);
    let parsed = ExperimentConfig::from_json(CONFIG)?;
    println!("resolved training config: {:?}", parsed.validate()?);

    std::fs::create_dir_all(&out).map_err(|e| gucnet::GucError::Io { path: out.clone(), source: e })?;
    let config_path = out.join("config.json");
    std::fs::write(&config_path, CONFIG).map_err(|e| gucnet::GucError::Io { path: config_path.clone(), source: e })?;
    let report = cmd_train(&config_path, Some(&out))?;
    println!("test accuracy {:.4}", report.test_accuracy);
    for f in ["checkpoint.gucw", "metrics.jsonl", "report.json"] {
        println!("  {}", out.join(f).display());
    }
    Ok(())
}
