//! Forward pass and loss.

use crate::encodings::{BiasMatrix, PEMatrix};
use crate::error::{Error, Result};
use crate::model::params::{EncoderParams, LayerParams};
use crate::numkit::Matrix;

/// Activations one attention block needs for its backward pass.
#[derive(Clone, Debug)]
pub struct AttnCache {
    pub z_in: Matrix,   // N x d_model
    pub q: Matrix,      // N x d_k
    pub k: Matrix,      // N x d_k
    pub v: Matrix,      // N x d_k
    pub weights: Matrix, // N x N, post-softmax
    pub av: Matrix,     // N x d_k, weights * v
}

#[derive(Clone, Debug)]
pub struct LayerCache {
    pub attn: AttnCache,
    pub z_mid: Matrix, // z_in + attention output; FFN input
    pub h_pre: Matrix, // N x d_ff, pre-ReLU
    pub h_act: Matrix, // N x d_ff, post-ReLU
}

/// Everything `encoder_backward` replays.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    pub x: Matrix,
    pub layers: Vec<LayerCache>,
    pub z_final: Matrix,
    /// For the learned scheme: the table row each position read.
    pub pe_rows: Option<Vec<usize>>,
    /// For the relative scheme: clipping distance for routing bias grads.
    pub bias_clip_k: Option<usize>,
    pub causal: bool,
}

fn add_row_broadcast(m: &mut Matrix, bias_row: &Matrix) {
    let cols = m.cols();
    for r in 0..m.rows() {
        let row = m.row_mut(r);
        for (v, &b) in row.iter_mut().zip(&bias_row.data()[..cols]) {
            *v += b;
        }
    }
}

/// Single-head scaled dot-product attention with optional logit bias and
/// optional causal mask:
///
/// ```text
/// logits  = (z Wq)(z Wk)^T / sqrt(d_k) + bias    (j > i masked if causal)
/// output  = softmax_rows(logits) (z Wv) Wo
/// ```
pub fn attention_forward(
    z: &Matrix,
    layer: &LayerParams,
    bias: Option<&BiasMatrix>,
    causal: bool,
) -> Result<(Matrix, AttnCache)> {
    let n = z.rows();
    if let Some(b) = bias {
        if b.values.shape() != (n, n) {
            return Err(Error::dimension(
                "attention_forward",
                format!("bias is {:?}, sequence length is {n}", b.values.shape()),
            ));
        }
    }
    let q = z.matmul(&layer.w_q)?;
    let k = z.matmul(&layer.w_k)?;
    let v = z.matmul(&layer.w_v)?;
    let d_k = layer.w_q.cols() as f64;
    let mut logits = q.matmul_nt(&k)?.scale(d_k.sqrt().recip());
    if let Some(b) = bias {
        logits.add_assign(&b.values)?;
    }
    if causal {
        for i in 0..n {
            for j in (i + 1)..n {
                logits.set(i, j, f64::NEG_INFINITY);
            }
        }
    }
    let weights = logits.softmax_rows();
    let av = weights.matmul(&v)?;
    let out = av.matmul(&layer.w_o)?;
    let cache = AttnCache { z_in: z.clone(), q, k, v, weights, av };
    Ok((out, cache))
}

/// Full encoder: scalar inputs projected to `d_model`, plus the additive
/// encoding when present, then two attention/FFN blocks with residual
/// connections, then the scalar readout.
pub fn encoder_forward(
    x: &Matrix,
    pe: Option<&PEMatrix>,
    bias: Option<&BiasMatrix>,
    params: &EncoderParams,
    causal: bool,
) -> Result<(Matrix, ForwardCache)> {
    let n = x.rows();
    if x.cols() != 1 {
        return Err(Error::dimension("encoder_forward", format!("input must be Nx1, got {:?}", x.shape())));
    }
    let mut z = x.matmul(&params.w_in)?;
    if let Some(pe) = pe {
        if pe.values.shape() != z.shape() {
            return Err(Error::dimension(
                "encoder_forward",
                format!("pe is {:?}, embeddings are {:?}", pe.values.shape(), z.shape()),
            ));
        }
        z.add_assign(&pe.values)?;
    }

    let mut layer_caches = Vec::with_capacity(params.layers.len());
    for layer in &params.layers {
        let (attn_out, attn) = attention_forward(&z, layer, bias, causal)?;
        let z_mid = z.add(&attn_out)?;
        let mut h_pre = z_mid.matmul(&layer.w_ff1)?;
        add_row_broadcast(&mut h_pre, &layer.b_ff1);
        let h_act = h_pre.map(|v| v.max(0.0));
        let mut ffn_out = h_act.matmul(&layer.w_ff2)?;
        add_row_broadcast(&mut ffn_out, &layer.b_ff2);
        z = z_mid.add(&ffn_out)?;
        layer_caches.push(LayerCache { attn, z_mid, h_pre, h_act });
    }

    let pred = z.matmul(&params.w_out)?;
    let pe_rows = params
        .learned_table
        .as_ref()
        .map(|t| (0..n).map(|pos| t.clipped_index(pos)).collect());
    let bias_clip_k = params.relative_table.as_ref().map(|t| t.clip_k);
    let cache = ForwardCache { x: x.clone(), layers: layer_caches, z_final: z, pe_rows, bias_clip_k, causal };
    Ok((pred, cache))
}

/// Mean squared error over all entries, with its gradient `2(pred - t)/N`.
pub fn mse_loss(pred: &Matrix, target: &Matrix) -> Result<(f64, Matrix)> {
    if pred.shape() != target.shape() {
        return Err(Error::dimension(
            "mse_loss",
            format!("{:?} vs {:?}", pred.shape(), target.shape()),
        ));
    }
    let n = pred.data().len() as f64;
    let mut loss = 0.0;
    let diff = pred.sub(target)?;
    for &d in diff.data() {
        loss += d * d;
    }
    Ok((loss / n, diff.scale(2.0 / n)))
}
