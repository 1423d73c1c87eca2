//! Sinusoidal absolute encodings.
//!
//! ```text
//! PE(pos, 2i)   = sin(pos / 10000^(2i/d_model))
//! PE(pos, 2i+1) = cos(pos / 10000^(2i/d_model))
//! ```

use crate::encodings::PEMatrix;
use crate::error::{Error, Result};
use crate::numkit::Matrix;

pub fn sinusoidal_pe(n: usize, d_model: usize) -> Result<PEMatrix> {
    if d_model == 0 || d_model % 2 != 0 {
        return Err(Error::config("d_model", format!("sinusoidal needs an even d_model >= 2, got {d_model}")));
    }
    if n == 0 {
        return Err(Error::config("n", "must be >= 1"));
    }
    let mut values = Matrix::zeros(n, d_model);
    for i in 0..d_model / 2 {
        let inv_freq = 10000f64.powf(2.0 * i as f64 / d_model as f64).recip();
        for pos in 0..n {
            let arg = pos as f64 * inv_freq;
            values.set(pos, 2 * i, arg.sin());
            values.set(pos, 2 * i + 1, arg.cos());
        }
    }
    Ok(PEMatrix { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn position_zero_alternates_zero_one() {
        let pe = sinusoidal_pe(4, 6).unwrap();
        assert_eq!(pe.row(0), &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn first_dimension_is_sin_of_pos() {
        let pe = sinusoidal_pe(4, 8).unwrap();
        assert!((pe.values.get(1, 0) - 1f64.sin()).abs() < 1e-12);
        assert!((pe.values.get(1, 0) - 0.841471).abs() < 1e-6);
        assert!((pe.values.get(3, 1) - 3f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn entries_bounded_by_one() {
        let pe = sinusoidal_pe(200, 64).unwrap();
        assert!(pe.values.data().iter().all(|v| v.abs() <= 1.0));
    }

    #[test]
    fn rows_pairwise_distinct_up_to_200() {
        let pe = sinusoidal_pe(200, 64).unwrap();
        let mut min_dist = f64::INFINITY;
        for a in 0..200 {
            for b in (a + 1)..200 {
                let d: f64 = pe
                    .row(a)
                    .iter()
                    .zip(pe.row(b))
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                min_dist = min_dist.min(d);
            }
        }
        assert!(min_dist > 0.0, "min pairwise row distance {min_dist}");
    }

    #[test]
    fn odd_d_model_is_config_error() {
        assert!(matches!(sinusoidal_pe(4, 5), Err(Error::Config { field: "d_model", .. })));
    }
}
