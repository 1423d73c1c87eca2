//! Clipped relative bias (Shaw-style, reduced to one scalar per distance).
//!
//! The table holds `2K + 1` trainable scalars `r_k` for signed distances
//! `k in [-K, K]`; a pair `(i, j)` reads `r_{clamp(i-j, -K, K)}`, so all
//! distances beyond the clip share one entry in each direction.

use crate::encodings::BiasMatrix;
use crate::error::{Error, Result};
use crate::numkit::{Matrix, SplitMix64};

#[derive(Clone, Debug, PartialEq)]
pub struct RelativeTable {
    /// 1 x (2K+1); entry `k + K` holds `r_k`.
    pub values: Matrix,
    pub clip_k: usize,
}

impl RelativeTable {
    pub fn init(clip_k: usize, std: f64, rng: &mut SplitMix64) -> Self {
        RelativeTable {
            values: Matrix::from_fn(1, 2 * clip_k + 1, |_, _| std * rng.next_normal()),
            clip_k,
        }
    }

    /// Build the table `r_k = f(k)` over `k in [-K, K]`.
    pub fn from_fn(clip_k: usize, f: impl Fn(i64) -> f64) -> Self {
        RelativeTable {
            values: Matrix::from_fn(1, 2 * clip_k + 1, |_, c| f(c as i64 - clip_k as i64)),
            clip_k,
        }
    }

    /// Table index read by a (query, key) pair at signed distance `delta`.
    pub fn index_for(clip_k: usize, delta: i64) -> usize {
        let k = clip_k as i64;
        (delta.clamp(-k, k) + k) as usize
    }

    pub fn bias_for_len(&self, n: usize) -> BiasMatrix {
        let values = Matrix::from_fn(n, n, |i, j| {
            let idx = Self::index_for(self.clip_k, i as i64 - j as i64);
            self.values.get(0, idx)
        });
        BiasMatrix { values }
    }
}

/// Bias matrix `values[i][j] = r_{clamp(i-j, -K, K)}`.
pub fn relative_bias(n: usize, table: &RelativeTable, clip_k: usize) -> Result<BiasMatrix> {
    if table.clip_k != clip_k || table.values.cols() != 2 * clip_k + 1 {
        return Err(Error::config(
            "clip_k",
            format!("table has {} entries, expected {}", table.values.cols(), 2 * clip_k + 1),
        ));
    }
    Ok(table.bias_for_len(n))
}
