//! Daubechies-4 wavelet encodings.
//!
//! The scaling function and mother wavelet are tabulated once on a dyadic
//! grid by the cascade algorithm, then the encoding stacks evaluations of a
//! selected set of dilated/shifted basis functions. Scale convention here:
//! larger `j` is coarser,
//!
//! ```text
//! psi_{j,k}(pos) = 2^(-j/2) * psi(2^(-j) * pos - k)
//! ```
//!
//! with support `[2^j * k, 2^j * (k + 3)]`, so coarse scales keep responding
//! to positions well past the training range while fine scales vanish there.

use crate::encodings::{PEMatrix, SchemeConfig};
use crate::error::{Error, Result};
use crate::numkit::Matrix;

/// Daubechies-4 support length in mother coordinates.
const SUPPORT_LEN: f64 = 3.0;

/// Scaling filter `h` for Daubechies-4.
fn daub4_filter() -> [f64; 4] {
    let s3 = 3f64.sqrt();
    let norm = 4.0 * 2f64.sqrt();
    [(1.0 + s3) / norm, (3.0 + s3) / norm, (3.0 - s3) / norm, (1.0 - s3) / norm]
}

/// Scaling function and mother wavelet sampled on `[0, 3]` with step
/// `2^('levels')`.
#[derive(Clone, Debug)]
pub struct WaveletTables {
    pub grid_step: f64,
    /// `phi(m * grid_step)` for `m = 0 ..= 3 * 2^levels`.
    pub phi_samples: Vec<f64>,
    /// `psi(m * grid_step)` on the same grid.
    pub psi_samples: Vec<f64>,
    pub support_len: f64,
    pub refinement_levels: usize,
}

/// Tabulate phi and psi by the cascade algorithm.
///
/// Starts from the box indicator on `[0, 1)` and applies the two-scale
/// refinement `levels` times; each pass halves the grid step and preserves
/// the Riemann sum, so `integral(phi) = 1` holds to machine precision. The
/// mother wavelet comes from the quadrature-mirror filter
/// `g_k = (-1)^k h_{3-k}`.
pub fn daubechies4_tables(refinement_levels: usize) -> Result<WaveletTables> {
    if refinement_levels < 6 {
        return Err(Error::config(
            "refinement_levels",
            format!("must be >= 6 for usable tables, got {refinement_levels}"),
        ));
    }
    let h = daub4_filter();
    let sqrt2 = 2f64.sqrt();

    // Level 0: box indicator sampled at integer grid points (left-endpoint
    // cell values), x in {0, 1, 2, 3}.
    let mut phi = vec![1.0, 0.0, 0.0, 0.0];
    for level in 1..=refinement_levels {
        let pts = 3 * (1usize << level) + 1;
        let prev_scale = 1usize << (level - 1); // k in prev-grid units
        let mut next = vec![0.0; pts];
        for (m, slot) in next.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &hk) in h.iter().enumerate() {
                let idx = m as i64 - (k * prev_scale) as i64;
                if idx >= 0 && (idx as usize) < phi.len() {
                    acc += hk * phi[idx as usize];
                }
            }
            *slot = sqrt2 * acc;
        }
        phi = next;
    }

    // psi(x) = sqrt(2) * sum_k g_k * phi(2x - k), sampled on the same grid.
    let full_scale = 1usize << refinement_levels;
    let g: Vec<f64> = (0..4).map(|k| if k % 2 == 0 { h[3 - k] } else { -h[3 - k] }).collect();
    let mut psi = vec![0.0; phi.len()];
    for (m, slot) in psi.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (k, &gk) in g.iter().enumerate() {
            let idx = 2 * m as i64 - (k * full_scale) as i64;
            if idx >= 0 && (idx as usize) < phi.len() {
                acc += gk * phi[idx as usize];
            }
        }
        *slot = sqrt2 * acc;
    }

    Ok(WaveletTables {
        grid_step: 0.5f64.powi(refinement_levels as i32),
        phi_samples: phi,
        psi_samples: psi,
        support_len: SUPPORT_LEN,
        refinement_levels,
    })
}

impl WaveletTables {
    /// Linear interpolation of a table at mother coordinate `t`; zero
    /// outside the support `[0, 3]`.
    fn interp(samples: &[f64], grid_step: f64, t: f64) -> f64 {
        if !(0.0..=SUPPORT_LEN).contains(&t) {
            return 0.0;
        }
        let u = t / grid_step;
        let i0 = u.floor() as usize;
        if i0 + 1 >= samples.len() {
            return samples[samples.len() - 1];
        }
        let frac = u - i0 as f64;
        samples[i0] * (1.0 - frac) + samples[i0 + 1] * frac
    }

    pub fn eval_phi(&self, t: f64) -> f64 {
        Self::interp(&self.phi_samples, self.grid_step, t)
    }

    pub fn eval_psi(&self, t: f64) -> f64 {
        Self::interp(&self.psi_samples, self.grid_step, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WaveletKind {
    /// Scaling function, used at the coarsest scale only.
    Scaling,
    Wavelet,
}

/// One selected basis function `phi_{J,k}` or `psi_{j,k}`.
#[derive(Clone, Copy, Debug)]
pub struct WaveletBasisFn {
    pub kind: WaveletKind,
    /// Scale `j`; larger is coarser.
    pub scale: usize,
    /// Integer shift `k`.
    pub shift: i64,
}

impl WaveletBasisFn {
    /// Support in position coordinates: `[2^j * k, 2^j * (k + 3)]`.
    pub fn support(&self) -> (f64, f64) {
        let width = (1u64 << self.scale) as f64;
        (width * self.shift as f64, width * (self.shift as f64 + SUPPORT_LEN))
    }

    pub fn eval(&self, tables: &WaveletTables, pos: f64) -> f64 {
        let scale = (1u64 << self.scale) as f64;
        let t = pos / scale - self.shift as f64;
        let amp = scale.sqrt().recip(); // 2^(-j/2)
        match self.kind {
            WaveletKind::Scaling => amp * tables.eval_phi(t),
            WaveletKind::Wavelet => amp * tables.eval_psi(t),
        }
    }

    fn coverage(&self, n_max: usize) -> f64 {
        let (lo, hi) = self.support();
        (hi.min(n_max as f64) - lo.max(0.0)).max(0.0)
    }
}

/// Enumerate candidates over scales `0..=J` and keep the `d_model` with the
/// largest support overlap with `[0, n_max]`.
///
/// Candidates are wavelets at every scale plus scaling functions at the
/// coarsest scale. Ties break toward smaller `j`, then smaller `k`, with the
/// scaling function first, so selection is reproducible.
pub fn select_wavelet_basis(cfg: &SchemeConfig) -> Result<Vec<WaveletBasisFn>> {
    let j_max = cfg.max_scale();
    let n_max = cfg.n_max;
    let mut candidates: Vec<WaveletBasisFn> = Vec::new();
    for j in 0..=j_max {
        let width = 1i64 << j;
        let k_hi = n_max as i64 / width; // last shift whose support starts inside
        for k in -3..=k_hi {
            candidates.push(WaveletBasisFn { kind: WaveletKind::Wavelet, scale: j, shift: k });
            if j == j_max {
                candidates.push(WaveletBasisFn { kind: WaveletKind::Scaling, scale: j, shift: k });
            }
        }
    }
    if candidates.len() < cfg.d_model {
        return Err(Error::config(
            "d_model",
            format!("only {} wavelet basis candidates for n_max={n_max}, J={j_max}; need {}", candidates.len(), cfg.d_model),
        ));
    }
    candidates.sort_by(|a, b| {
        b.coverage(n_max)
            .partial_cmp(&a.coverage(n_max))
            .unwrap()
            .then(a.scale.cmp(&b.scale))
            .then(a.shift.cmp(&b.shift))
            .then((a.kind == WaveletKind::Wavelet).cmp(&(b.kind == WaveletKind::Wavelet)))
    });
    candidates.truncate(cfg.d_model);
    Ok(candidates)
}

/// Wavelet encoding matrix: row `pos` stacks the selected basis evaluations
/// at `pos`, then is normalized to unit Euclidean norm. A row that is
/// entirely zero before normalization (every kept support ends before `pos`)
/// is left as the zero vector.
pub fn wavelet_pe(n: usize, cfg: &SchemeConfig, tables: &WaveletTables) -> Result<PEMatrix> {
    let expected_j = (cfg.n_max as f64).log2().floor() as usize;
    if cfg.max_scale() != expected_j {
        return Err(Error::config(
            "wavelet_max_scale",
            format!("must equal floor(log2(n_max)) = {expected_j}, got {}", cfg.max_scale()),
        ));
    }
    let basis = select_wavelet_basis(cfg)?;
    let mut values = Matrix::zeros(n, cfg.d_model);
    for pos in 0..n {
        let row = values.row_mut(pos);
        for (slot, b) in row.iter_mut().zip(&basis) {
            *slot = b.eval(tables, pos as f64);
        }
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in row.iter_mut() {
                *v /= norm;
            }
        }
    }
    Ok(PEMatrix { values })
}
