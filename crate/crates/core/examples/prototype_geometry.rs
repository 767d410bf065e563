//! Builds block prototypes at each separation level and prints their
//! pairwise Hamming distances.
//!
//! cargo run --example prototype_geometry -- [classes] [dim]

use gucnet::prototypes::{PrototypeSet, Separation};

fn main() -> gucnet::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let classes = args.next().unwrap_or(7);
    let dim = args.next().unwrap_or(128);

    for level in [Separation::HMax, Separation::HHalf, Separation::H2] {
        let p = PrototypeSet::with_separation(classes, dim, level)?;
        let h = p.pairwise_hamming()?;
        println!("{level:?}: {:?}, pairwise Hamming distance {}", p.kind(), h[0][1]);
    }

    let p = PrototypeSet::with_separation(classes, dim, Separation::HMax)?;
    println!("\nH_max distance matrix:");
    for row in p.pairwise_hamming()? {
        println!("  {row:?}");
    }

    let r = PrototypeSet::random_unit(classes, dim, 0)?;
    let d = r.pairwise_sq_distances();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    println!("\nrandom [0,1) prototypes: mean squared pairwise distance {mean:.2}");
    Ok(())
}
