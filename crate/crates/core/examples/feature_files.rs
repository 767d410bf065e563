//! Writes a dataset as GFV1 and CSV, reads both back and checks they agree.
//!
//! cargo run --example feature_files -- [output-dir]

use std::fmt::Write as _;

use gucnet::data::{gen_gaussian_mixture, load_csv, load_gfv1, save_gfv1, MixtureParams};

fn main() -> gucnet::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, Into::into);
    let x = gen_gaussian_mixture(&MixtureParams { classes: 3, dim: 4, per_class: 5, radius: 1.0, sigma: 0.3, seed: 7 })?;

    let gfv1 = dir.join("features.gfv1");
    save_gfv1(&x, &gfv1)?;
    let back = load_gfv1(&gfv1)?;
    println!("{}: N={} D={} C={}", gfv1.display(), back.len(), back.dim(), back.num_classes());
    assert_eq!(back.features(), x.features());

    let mut text = String::from("# f0,f1,f2,f3,label\n");
    for (row, label) in x.features().iter_rows().zip(x.labels()) {
        for v in row {
            // `{:?}` prints the shortest string that parses back to the same f64.
            write!(text, "{v:?},").unwrap();
        }
        writeln!(text, "{label}").unwrap();
    }
    let csv = dir.join("features.csv");
    std::fs::write(&csv, text).map_err(|e| gucnet::GucError::Io { path: csv.clone(), source: e })?;
    let from_csv = load_csv(&csv, None)?;
    println!("{}: N={} D={} C={}", csv.display(), from_csv.len(), from_csv.dim(), from_csv.num_classes());
    assert_eq!(from_csv.features(), x.features());
    assert_eq!(from_csv.labels(), x.labels());
    println!("class counts {:?}, nearest-mean accuracy {:.3}", x.class_counts(), x.nearest_mean_accuracy());
    Ok(())
}
