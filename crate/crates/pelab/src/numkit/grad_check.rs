//! Central-difference gradient oracle.
//!
//! This is the independent reference every analytic backward pass in the
//! crate is checked against; it must stay free of any code from the
//! implementation paths it validates.

use crate::error::{Error, Result};
use crate::numkit::Matrix;

/// Estimate `df/dx` entrywise via `(f(x+eps*e) - f(x-eps*e)) / (2*eps)`.
///
/// `f` must be pure; a non-finite evaluation aborts with an oracle error.
pub fn finite_diff_grad(mut f: impl FnMut(&Matrix) -> f64, x: &Matrix, eps: f64) -> Result<Matrix> {
    if !(eps > 0.0) {
        return Err(Error::config("eps", format!("must be > 0, got {eps}")));
    }
    let mut probe = x.clone();
    let mut grad = Matrix::zeros(x.rows(), x.cols());
    for i in 0..x.data().len() {
        let orig = probe.data()[i];

        probe.data_mut()[i] = orig + eps;
        let plus = f(&probe);
        probe.data_mut()[i] = orig - eps;
        let minus = f(&probe);
        probe.data_mut()[i] = orig;

        if !plus.is_finite() || !minus.is_finite() {
            return Err(Error::Oracle {
                detail: format!("non-finite evaluation at entry {i}: f+={plus}, f-={minus}"),
            });
        }
        grad.data_mut()[i] = (plus - minus) / (2.0 * eps);
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_sum_has_all_ones_gradient() {
        let x = Matrix::from_vec(2, 3, vec![0.1, -0.2, 0.3, 0.4, -0.5, 0.6]).unwrap();
        let g = finite_diff_grad(|m| m.data().iter().sum(), &x, 1e-5).unwrap();
        for &v in g.data() {
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn quadratic_at_three() {
        let x = Matrix::from_vec(1, 1, vec![3.0]).unwrap();
        let g = finite_diff_grad(|m| m.get(0, 0) * m.get(0, 0), &x, 1e-5).unwrap();
        assert!((g.get(0, 0) - 6.0).abs() < 1e-6);
    }

    #[test]
    fn non_finite_evaluation_is_oracle_error() {
        let x = Matrix::from_vec(1, 1, vec![0.0]).unwrap();
        let r = finite_diff_grad(|m| 1.0 / m.get(0, 0), &x, 1e-5);
        assert!(matches!(r, Err(Error::Oracle { .. })));
    }

    #[test]
    fn bad_eps_is_config_error() {
        let x = Matrix::zeros(1, 1);
        assert!(matches!(finite_diff_grad(|_| 0.0, &x, 0.0), Err(Error::Config { .. })));
    }
}
