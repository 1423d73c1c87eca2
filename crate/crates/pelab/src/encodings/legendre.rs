//! Legendre-polynomial encodings on a tanh-squashed position axis.
//!
//! `x(pos) = tanh(gamma * pos / n_max)` keeps the argument inside (-1, 1)
//! for every finite position, so all entries stay in [-1, 1]; rows for very
//! large positions converge to the all-ones vector as `x -> 1`.

use crate::encodings::{PEMatrix, SchemeConfig};
use crate::error::{Error, Result};
use crate::numkit::Matrix;

/// Fill `row` with `P_0(x) ... P_{row.len()-1}(x)` by the three-term
/// recurrence `(l+1) P_{l+1} = (2l+1) x P_l - l P_{l-1}`.
pub(crate) fn legendre_row(x: f64, row: &mut [f64]) {
    if row.is_empty() {
        return;
    }
    row[0] = 1.0;
    if row.len() > 1 {
        row[1] = x;
    }
    for l in 1..row.len().saturating_sub(1) {
        let lf = l as f64;
        row[l + 1] = ((2.0 * lf + 1.0) * x * row[l] - lf * row[l - 1]) / (lf + 1.0);
    }
}

pub fn legendre_pe(n: usize, cfg: &SchemeConfig) -> Result<PEMatrix> {
    if !(cfg.gamma > 0.0) {
        return Err(Error::config("gamma", format!("must be > 0, got {}", cfg.gamma)));
    }
    let mut values = Matrix::zeros(n, cfg.d_model);
    for pos in 0..n {
        let x = (cfg.gamma * pos as f64 / cfg.n_max as f64).tanh();
        legendre_row(x, values.row_mut(pos));
    }
    Ok(PEMatrix { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::Scheme;
    use crate::numkit::SplitMix64;

    fn cfg(d_model: usize, n_max: usize) -> SchemeConfig {
        let mut c = SchemeConfig::new(Scheme::Legendre);
        c.d_model = d_model;
        c.n_max = n_max;
        c
    }

    // Closed forms for the first four polynomials; the independent oracle
    // for the recurrence.
    fn p_closed(l: usize, x: f64) -> f64 {
        match l {
            0 => 1.0,
            1 => x,
            2 => (3.0 * x * x - 1.0) / 2.0,
            3 => (5.0 * x * x * x - 3.0 * x) / 2.0,
            _ => unreachable!(),
        }
    }

    #[test]
    fn position_zero_gives_p_at_zero_pattern() {
        let pe = legendre_pe(3, &cfg(6, 50)).unwrap();
        let expect = [1.0, 0.0, -0.5, 0.0, 0.375, 0.0];
        for (got, want) in pe.row(0).iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn degree_two_at_half() {
        let mut row = [0.0; 3];
        legendre_row(0.5, &mut row);
        assert!((row[2] - (-0.125)).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_closed_forms_on_random_points() {
        let mut rng = SplitMix64::new(21);
        for _ in 0..100 {
            let x = 2.0 * rng.next_f64() - 1.0;
            let mut row = [0.0; 4];
            legendre_row(x, &mut row);
            for l in 0..4 {
                assert!((row[l] - p_closed(l, x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn entries_bounded_by_one_inside_the_interval() {
        let pe = legendre_pe(400, &cfg(64, 50)).unwrap();
        assert!(pe.values.data().iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn rows_tend_to_all_ones_for_large_positions() {
        let pe = legendre_pe(100_000, &cfg(16, 50)).unwrap();
        let last = pe.row(99_999);
        for &v in last {
            assert!((v - 1.0).abs() < 1e-9, "entry {v}");
        }
    }
}
