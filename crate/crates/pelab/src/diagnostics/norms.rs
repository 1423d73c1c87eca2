//! Row-norm summary for an encoding matrix.
//!
//! The harness compares these against the theoretical ceilings: sinusoidal
//! and Legendre rows are bounded by `sqrt(d_model)`, normalized wavelet
//! rows by 1.

use crate::encodings::PEMatrix;

#[derive(Clone, Copy, Debug)]
pub struct NormReport {
    pub max_row_norm: f64,
    pub mean_row_norm: f64,
}

pub fn norm_report(pe: &PEMatrix) -> NormReport {
    let n = pe.positions();
    let mut max = 0.0f64;
    let mut sum = 0.0;
    for pos in 0..n {
        let norm = pe.values.row_norm(pos);
        max = max.max(norm);
        sum += norm;
    }
    NormReport { max_row_norm: max, mean_row_norm: sum / n as f64 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{daubechies4_tables, legendre_pe, sinusoidal_pe, wavelet_pe, Scheme, SchemeConfig};

    #[test]
    fn sinusoidal_rows_stay_under_sqrt_d() {
        let pe = sinusoidal_pe(200, 64).unwrap();
        let report = norm_report(&pe);
        assert!(report.max_row_norm <= 8.0 + 1e-9, "max {}", report.max_row_norm);
        assert!(report.mean_row_norm > 0.0);
    }

    #[test]
    fn normalized_wavelet_rows_are_unit() {
        let mut cfg = SchemeConfig::new(Scheme::Wavelet);
        cfg.d_model = 64;
        cfg.n_max = 50;
        let tables = daubechies4_tables(10).unwrap();
        let pe = wavelet_pe(50, &cfg, &tables).unwrap();
        let report = norm_report(&pe);
        assert!((report.max_row_norm - 1.0).abs() < 1e-10);
        assert!((report.mean_row_norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn legendre_rows_approach_sqrt_d_for_large_positions() {
        let mut cfg = SchemeConfig::new(Scheme::Legendre);
        cfg.d_model = 64;
        cfg.n_max = 50;
        let pe = legendre_pe(100_000, &cfg).unwrap();
        let report = norm_report(&pe);
        assert!(report.max_row_norm <= 8.0 + 1e-9);
        // Far past n_max the row is essentially the all-ones vector.
        let last_norm = pe.values.row_norm(99_999);
        assert!((last_norm - 8.0).abs() < 1e-6, "norm {last_norm}");
    }
}
