//! Analytic backward pass.
//!
//! Plain reverse-mode differentiation of the forward graph, block by block.
//! Bias gradients route into the relative table by clipped distance; the
//! additive-encoding gradient routes into the learned table by clipped row.

use crate::encodings::RelativeTable;
use crate::error::{Error, Result};
use crate::model::forward::{ForwardCache, LayerCache};
use crate::model::params::{EncoderParams, LayerParams};
use crate::numkit::Matrix;

/// Gradient of the loss with respect to every trainable tensor, given the
/// forward cache and the loss gradient at the predictions.
pub fn encoder_backward(
    params: &EncoderParams,
    cache: &ForwardCache,
    loss_grad: &Matrix,
) -> Result<EncoderParams> {
    let n = cache.x.rows();
    if loss_grad.shape() != (n, 1) {
        return Err(Error::dimension(
            "encoder_backward",
            format!("loss gradient is {:?}, expected ({n}, 1)", loss_grad.shape()),
        ));
    }
    if cache.layers.len() != params.layers.len() || cache.z_final.cols() != params.d_model() {
        return Err(Error::Usage {
            detail: "forward cache does not match these parameters".into(),
        });
    }

    let mut grads = params.zeros_like();

    // Readout: pred = z_final * w_out.
    grads.w_out = cache.z_final.matmul_tn(loss_grad)?;
    let mut dz = loss_grad.matmul_nt(&params.w_out)?;

    for (layer_idx, (layer, lc)) in params.layers.iter().zip(&cache.layers).enumerate().rev() {
        let glayer = &mut grads.layers[layer_idx];
        dz = backward_block(layer, glayer, lc, &dz, cache, &mut grads.relative_table)?;
    }

    // Embedding: z0 = x * w_in (+ pe).
    grads.w_in = cache.x.matmul_tn(&dz)?;
    if let (Some(table_grad), Some(rows)) = (&mut grads.learned_table, &cache.pe_rows) {
        for (pos, &row) in rows.iter().enumerate() {
            for (t, &s) in table_grad.values.row_mut(row).iter_mut().zip(dz.row(pos)) {
                *t += s;
            }
        }
    }
    Ok(grads)
}

/// One attention + FFN block; returns the gradient at the block input.
fn backward_block(
    layer: &LayerParams,
    glayer: &mut LayerParams,
    lc: &LayerCache,
    dz_out: &Matrix,
    cache: &ForwardCache,
    relative_grad: &mut Option<RelativeTable>,
) -> Result<Matrix> {
    // FFN: z_out = z_mid + relu(z_mid W1 + b1) W2 + b2.
    glayer.w_ff2.add_assign(&lc.h_act.matmul_tn(dz_out)?)?;
    glayer.b_ff2.add_assign(&dz_out.col_sums())?;
    let dh_act = dz_out.matmul_nt(&layer.w_ff2)?;
    let mut dh_pre = dh_act;
    for (g, &pre) in dh_pre.data_mut().iter_mut().zip(lc.h_pre.data()) {
        if pre <= 0.0 {
            *g = 0.0;
        }
    }
    glayer.w_ff1.add_assign(&lc.z_mid.matmul_tn(&dh_pre)?)?;
    glayer.b_ff1.add_assign(&dh_pre.col_sums())?;
    let mut dz_mid = dz_out.add(&dh_pre.matmul_nt(&layer.w_ff1)?)?;

    // Attention: z_mid = z_in + softmax(logits) (z_in Wv) Wo.
    let at = &lc.attn;
    glayer.w_o.add_assign(&at.av.matmul_tn(&dz_mid)?)?;
    let dav = dz_mid.matmul_nt(&layer.w_o)?;
    let dweights = dav.matmul_nt(&at.v)?;
    let dv = at.weights.matmul_tn(&dav)?;

    // Softmax rows: dlogit[i][j] = w[i][j] * (dw[i][j] - sum_k dw[i][k] w[i][k]).
    // Masked entries have zero weight, so their logit gradient vanishes.
    let n = at.weights.rows();
    let mut dlogits = Matrix::zeros(n, n);
    for i in 0..n {
        let w_row = at.weights.row(i);
        let dw_row = dweights.row(i);
        let dot: f64 = w_row.iter().zip(dw_row).map(|(&w, &dw)| w * dw).sum();
        let out_row = dlogits.row_mut(i);
        for j in 0..n {
            out_row[j] = w_row[j] * (dw_row[j] - dot);
        }
    }

    // The bias enters the logits additively, so its gradient is dlogits;
    // accumulate per clipped distance when the relative table is active.
    if let (Some(table_grad), Some(clip_k)) = (relative_grad.as_mut(), cache.bias_clip_k) {
        for i in 0..n {
            let row = dlogits.row(i);
            for (j, &g) in row.iter().enumerate() {
                let idx = RelativeTable::index_for(clip_k, i as i64 - j as i64);
                let slot = table_grad.values.row_mut(0);
                slot[idx] += g;
            }
        }
    }

    let inv_scale = (layer.w_q.cols() as f64).sqrt().recip();
    let dq = dlogits.matmul(&at.k)?.scale(inv_scale);
    let dk = dlogits.matmul_tn(&at.q)?.scale(inv_scale);
    glayer.w_q.add_assign(&at.z_in.matmul_tn(&dq)?)?;
    glayer.w_k.add_assign(&at.z_in.matmul_tn(&dk)?)?;
    glayer.w_v.add_assign(&at.z_in.matmul_tn(&dv)?)?;

    dz_mid.add_assign(&dq.matmul_nt(&layer.w_q)?)?;
    dz_mid.add_assign(&dk.matmul_nt(&layer.w_k)?)?;
    dz_mid.add_assign(&dv.matmul_nt(&layer.w_v)?)?;
    Ok(dz_mid)
}
