//! Dense linear algebra, activations, seeded randomness and a
//! finite-difference gradient checker.

mod activation;
mod gradcheck;
mod matrix;
mod rng;

pub use activation::{relu, relu_backward, softmax_rows};
pub use gradcheck::{grad_check, grad_check_masked};
pub use matrix::{matmul, Matrix};
pub use rng::{Rng64, Stream};
