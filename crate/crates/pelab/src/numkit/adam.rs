//! Adam optimizer over a flat list of parameter tensors.

use crate::error::{Error, Result};
use crate::numkit::Matrix;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;

/// First/second moment estimates, one pair per parameter tensor, plus the
/// step counter used for bias correction.
#[derive(Clone, Debug)]
pub struct AdamState {
    first_moment: Vec<Matrix>,
    second_moment: Vec<Matrix>,
    step_count: u64,
}

impl AdamState {
    /// Zero moments shaped like `params`.
    pub fn new(params: &[&Matrix]) -> Self {
        let zeros: Vec<Matrix> = params.iter().map(|p| Matrix::zeros(p.rows(), p.cols())).collect();
        AdamState { first_moment: zeros.clone(), second_moment: zeros, step_count: 0 }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }
}

/// One Adam update with bias correction:
///
/// ```text
/// m <- b1*m + (1-b1)*g        v <- b2*v + (1-b2)*g^2
/// p <- p - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
/// ```
pub fn adam_step(
    params: &mut [&mut Matrix],
    grads: &[&Matrix],
    state: &mut AdamState,
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
) -> Result<()> {
    if params.len() != grads.len()
        || params.len() != state.first_moment.len()
        || params.len() != state.second_moment.len()
    {
        return Err(Error::dimension(
            "adam_step",
            format!("{} params, {} grads, {} moment pairs", params.len(), grads.len(), state.first_moment.len()),
        ));
    }
    for (i, (p, g)) in params.iter().zip(grads).enumerate() {
        if p.shape() != g.shape() || p.shape() != state.first_moment[i].shape() {
            return Err(Error::dimension(
                "adam_step",
                format!("param {i}: shape {:?} vs grad {:?}", p.shape(), g.shape()),
            ));
        }
    }

    state.step_count += 1;
    let t = state.step_count;
    let bc1 = 1.0 - beta1.powi(t as i32);
    let bc2 = 1.0 - beta2.powi(t as i32);

    for i in 0..params.len() {
        let p = params[i].data_mut();
        let g = grads[i].data();
        let m = state.first_moment[i].data_mut();
        let v = state.second_moment[i].data_mut();
        for j in 0..p.len() {
            m[j] = beta1 * m[j] + (1.0 - beta1) * g[j];
            v[j] = beta2 * v[j] + (1.0 - beta2) * g[j] * g[j];
            let m_hat = m[j] / bc1;
            let v_hat = v[j] / bc2;
            p[j] -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradients_change_nothing() {
        let mut p = Matrix::from_vec(1, 2, vec![0.5, -1.5]).unwrap();
        let g = Matrix::zeros(1, 2);
        let mut state = AdamState::new(&[&p]);
        for _ in 0..5 {
            adam_step(&mut [&mut p], &[&g], &mut state, 0.01, ADAM_BETA1, ADAM_BETA2, ADAM_EPS).unwrap();
        }
        assert!(state.step_count() > 0);
        assert_eq!(p.data(), &[0.5, -1.5]);
    }

    #[test]
    fn first_step_moves_by_about_lr() {
        // With g=1 the bias-corrected ratio is 1/(1+eps'), so the first
        // update is lr to within eps.
        let mut p = Matrix::from_vec(1, 1, vec![2.0]).unwrap();
        let g = Matrix::from_vec(1, 1, vec![1.0]).unwrap();
        let mut state = AdamState::new(&[&p]);
        let lr = 0.001;
        adam_step(&mut [&mut p], &[&g], &mut state, lr, ADAM_BETA1, ADAM_BETA2, ADAM_EPS).unwrap();
        assert!((p.get(0, 0) - (2.0 - lr)).abs() < 1e-9);
        assert_eq!(state.step_count(), 1);
    }

    #[test]
    fn identical_tensors_receive_identical_updates() {
        let mut p1 = Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let mut p2 = p1.clone();
        let g = Matrix::from_vec(2, 2, vec![0.3, -0.7, 0.1, 0.0]).unwrap();
        let mut state = AdamState::new(&[&p1, &p2]);
        adam_step(&mut [&mut p1, &mut p2], &[&g, &g], &mut state, 0.01, ADAM_BETA1, ADAM_BETA2, ADAM_EPS)
            .unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn shape_mismatch_is_error() {
        let mut p = Matrix::zeros(2, 2);
        let g = Matrix::zeros(2, 3);
        let mut state = AdamState::new(&[&p]);
        let r = adam_step(&mut [&mut p], &[&g], &mut state, 0.01, ADAM_BETA1, ADAM_BETA2, ADAM_EPS);
        assert!(matches!(r, Err(Error::Dimension { .. })));
    }
}
