//! ALiBi extrapolation gap against its Lipschitz bound.
//!
//! A probe logit `mu + b` competes with `context_len - 1` zero logits; the
//! softmax weight it receives is a pure function `A(mu, b)`. Because the
//! derivative of a softmax output with respect to a single logit is bounded
//! by 1, `|A(mu, -alpha*d) - A(mu, -alpha*n_max)| <= alpha * (d - n_max)`
//! for any `d > n_max`; this report measures the gap and tabulates it next
//! to that bound.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct BiasGapRow {
    /// Probe distance.
    pub d: usize,
    pub measured_gap: f64,
    /// `alpha * (d - n_max)`, the Lipschitz bound with constant 1.
    pub bound: f64,
}

#[derive(Clone, Debug)]
pub struct BiasGapReport {
    pub mu: f64,
    pub alpha: f64,
    pub n_max: usize,
    pub context_len: usize,
    pub rows: Vec<BiasGapRow>,
}

/// Softmax weight of a probe logit `mu + bias` against `context_len - 1`
/// zero logits.
pub fn probe_attention_weight(mu: f64, bias: f64, context_len: usize) -> f64 {
    let z = (mu + bias).exp();
    z / (z + (context_len - 1) as f64)
}

/// Measure `|A(mu, -alpha*d) - A(mu, -alpha*n_max)|` for every distance in
/// `(n_max, context_len]`.
pub fn alibi_weight_gap(mu: f64, alpha: f64, n_max: usize, context_len: usize) -> Result<BiasGapReport> {
    if n_max < 2 {
        return Err(Error::config("n_max", "must be >= 2"));
    }
    if context_len <= n_max {
        return Err(Error::config("context_len", format!("must exceed n_max = {n_max}")));
    }
    let at_train_edge = probe_attention_weight(mu, -alpha * n_max as f64, context_len);
    let rows = (n_max + 1..=context_len)
        .map(|d| {
            let a = probe_attention_weight(mu, -alpha * d as f64, context_len);
            BiasGapRow { d, measured_gap: (a - at_train_edge).abs(), bound: alpha * (d - n_max) as f64 }
        })
        .collect();
    Ok(BiasGapReport { mu, alpha, n_max, context_len, rows })
}
