//! Compares analytic gradients with central finite differences for every
//! training objective on a small model.

use gucnet::model::{Architecture, GucnetModel, ModelMode, Objective};
use gucnet::numeric::{grad_check, Matrix, Rng64};
use gucnet::prototypes::{PrototypeSet, Separation};

fn random(rows: usize, cols: usize, rng: &mut Rng64) -> Matrix {
    Matrix::new(rows, cols, (0..rows * cols).map(|_| rng.normal()).collect()).unwrap()
}

fn main() -> gucnet::Result<()> {
    let arch = Architecture { input_dim: 6, guide_input_dim: None, hidden: vec![12, 10], latent_dim: 16, num_classes: 4, dropout: 0.5 };
    let mut rng = Rng64::new(1);
    let x = random(10, 6, &mut rng);
    let labels: Vec<usize> = (0..10).map(|i| i % 4).collect();

    let g = PrototypeSet::with_separation(4, 16, Separation::HMax)?;
    let mut model = GucnetModel::new(&arch, ModelMode::Prototype, Some(g), 2)?;
    // Dropout off so the objective is a deterministic function of the weights.
    model.set_training(false);

    for obj in [Objective::CrossEntropy, Objective::Matching { alpha: 0.3 }, Objective::Joint { alpha: 0.3 }] {
        let step = model.guided_step(&x, &labels, obj, &mut rng)?;
        let mut probe = model.clone();
        let err = grad_check(
            |p| {
                probe.set_flat_params(p).unwrap();
                probe.guided_step(&x, &labels, obj, &mut Rng64::new(0)).unwrap().objective
            },
            &model.flat_params(),
            &step.grads.flatten(),
            1e-5,
        )?;
        println!("{obj:?}: objective {:.6}, max relative error {err:.2e}", step.objective);
    }

    let tex_arch = Architecture { guide_input_dim: Some(7), ..arch };
    let mut tex = GucnetModel::new(&tex_arch, ModelMode::Texture, None, 3)?;
    tex.set_training(false);
    let y = random(10, 7, &mut rng);
    let ly: Vec<usize> = (0..10).map(|i| (i + 1) % 4).collect();
    let step = tex.texture_step(&x, &labels, &y, &ly, &mut rng)?;
    let mut probe = tex.clone();
    let err = grad_check(
        |p| {
            probe.set_flat_params(p).unwrap();
            probe.texture_step(&x, &labels, &y, &ly, &mut Rng64::new(0)).unwrap().objective
        },
        &tex.flat_params(),
        &step.grads.flatten(),
        1e-5,
    )?;
    println!("texture cross-entropy: max relative error {err:.2e}");
    Ok(())
}
