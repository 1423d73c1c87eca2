//! Dense numeric kernels: row-major `f64` matrices, a stabilized softmax,
//! the Adam optimizer, a seeded RNG, and the central-difference gradient
//! oracle used to validate every analytic backward pass.

mod adam;
mod grad_check;
mod matrix;
mod rng;

pub use adam::{adam_step, AdamState, ADAM_BETA1, ADAM_BETA2, ADAM_EPS};
pub use grad_check::finite_diff_grad;
pub use matrix::Matrix;
pub use rng::SplitMix64;
