//! Gram matrix of the selected (unnormalized) wavelet basis functions.
//!
//! Inner products are Riemann sums over `[0, n_max]` at the table
//! resolution. Daubechies-4 gives an orthonormal family, so interior
//! functions (support fully inside the window) should show near-identity
//! rows; boundary-truncated functions lose part of their support and are
//! flagged instead of judged.

use crate::encodings::{select_wavelet_basis, SchemeConfig, WaveletTables};
use crate::error::{Error, Result};
use crate::numkit::Matrix;

#[derive(Clone, Debug)]
pub struct GramReport {
    /// `d_model x d_model` inner products in basis-selection order.
    pub gram: Matrix,
    /// Whether each basis function's support lies fully inside `[0, n_max]`.
    pub interior: Vec<bool>,
    /// Indices of boundary-truncated basis functions.
    pub truncated: Vec<usize>,
    /// Largest `|gram[i][j]|`, i != j, over interior pairs.
    pub max_offdiag_interior: f64,
    /// Min/max of `gram[i][i]` over interior functions.
    pub diag_range_interior: (f64, f64),
}

pub fn gram_report(cfg: &SchemeConfig, tables: &WaveletTables) -> Result<GramReport> {
    if tables.refinement_levels < 10 {
        return Err(Error::config(
            "refinement_levels",
            format!("gram report needs levels >= 10, got {}", tables.refinement_levels),
        ));
    }
    let basis = select_wavelet_basis(cfg)?;
    let h = tables.grid_step;
    let n_cells = (cfg.n_max as f64 / h).round() as usize;

    // Evaluate every kept function on the shared grid, then one n_t product.
    let mut evals = Matrix::zeros(basis.len(), n_cells);
    for (b_idx, b) in basis.iter().enumerate() {
        let row = evals.row_mut(b_idx);
        for (m, slot) in row.iter_mut().enumerate() {
            *slot = b.eval(tables, m as f64 * h);
        }
    }
    let gram = evals.matmul_nt(&evals)?.scale(h);

    let interior: Vec<bool> = basis
        .iter()
        .map(|b| {
            let (lo, hi) = b.support();
            lo >= 0.0 && hi <= cfg.n_max as f64
        })
        .collect();
    let truncated: Vec<usize> =
        interior.iter().enumerate().filter(|(_, &ok)| !ok).map(|(i, _)| i).collect();

    let mut max_off = 0.0f64;
    let mut diag_min = f64::INFINITY;
    let mut diag_max = f64::NEG_INFINITY;
    for i in 0..basis.len() {
        if !interior[i] {
            continue;
        }
        diag_min = diag_min.min(gram.get(i, i));
        diag_max = diag_max.max(gram.get(i, i));
        for j in 0..basis.len() {
            if j != i && interior[j] {
                max_off = max_off.max(gram.get(i, j).abs());
            }
        }
    }
    Ok(GramReport {
        gram,
        interior,
        truncated,
        max_offdiag_interior: max_off,
        diag_range_interior: (diag_min, diag_max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{daubechies4_tables, Scheme, WaveletKind};

    fn cfg() -> SchemeConfig {
        let mut c = SchemeConfig::new(Scheme::Wavelet);
        c.d_model = 64;
        c.n_max = 50;
        c
    }

    #[test]
    fn interior_basis_is_near_orthonormal() {
        let tables = daubechies4_tables(10).unwrap();
        let report = gram_report(&cfg(), &tables).unwrap();
        assert!(!report.truncated.is_empty(), "boundary functions exist at n_max=50");
        assert!(report.interior.iter().any(|&ok| ok), "interior functions exist");
        let (lo, hi) = report.diag_range_interior;
        assert!(lo >= 0.9 && hi <= 1.1, "diag range [{lo}, {hi}]");
        assert!(report.max_offdiag_interior < 0.05, "offdiag {}", report.max_offdiag_interior);
    }

    #[test]
    fn disjoint_supports_have_exactly_zero_inner_product() {
        let tables = daubechies4_tables(10).unwrap();
        let report = gram_report(&cfg(), &tables).unwrap();
        let basis = select_wavelet_basis(&cfg()).unwrap();
        let mut checked = 0;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let (lo_i, hi_i) = basis[i].support();
                let (lo_j, hi_j) = basis[j].support();
                if hi_i <= lo_j || hi_j <= lo_i {
                    assert_eq!(report.gram.get(i, j), 0.0);
                    checked += 1;
                }
            }
        }
        assert!(checked > 0, "no disjoint pairs found");
    }

    #[test]
    fn same_scale_neighbors_are_nearly_orthogonal() {
        let tables = daubechies4_tables(10).unwrap();
        let report = gram_report(&cfg(), &tables).unwrap();
        let basis = select_wavelet_basis(&cfg()).unwrap();
        let mut checked = 0;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j || !report.interior[i] || !report.interior[j] {
                    continue;
                }
                let (a, b) = (&basis[i], &basis[j]);
                if a.kind == WaveletKind::Wavelet
                    && b.kind == WaveletKind::Wavelet
                    && a.scale == b.scale
                    && (a.shift - b.shift).abs() == 1
                {
                    assert!(report.gram.get(i, j).abs() < 0.05);
                    checked += 1;
                }
            }
        }
        assert!(checked > 0, "no same-scale neighbor pairs found");
    }

    #[test]
    fn coarse_tables_are_rejected() {
        let tables = daubechies4_tables(8).unwrap();
        assert!(matches!(gram_report(&cfg(), &tables), Err(Error::Config { .. })));
    }
}
