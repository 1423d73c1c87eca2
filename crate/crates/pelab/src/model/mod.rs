//! Minimal 2-layer, single-head transformer encoder with hand-written
//! forward and backward passes.
//!
//! Blocks are `attention -> residual add -> ReLU feed-forward -> residual
//! add`, with no layer normalization and no dropout. Input scalars enter
//! through a trainable 1 x d_model projection; predictions leave through a
//! d_model x 1 readout. `d_k = d_model` (single head).

mod backward;
mod checkpoint;
mod forward;
mod params;
mod train;

pub use backward::encoder_backward;
pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointMeta};
pub use forward::{attention_forward, encoder_forward, mse_loss, AttnCache, ForwardCache};
pub use params::{EncoderParams, LayerParams, N_LAYERS};
pub use train::{train, TrainConfig, TrainOutcome};

use crate::encodings::{build_encoding, BuiltEncoding, SchemeConfig};
use crate::error::Result;
use crate::numkit::Matrix;

/// Encoding the model contributes for a length-`n` forward pass, reading the
/// trainable tables out of `params` when the scheme has them.
pub fn encoding_for(params: &EncoderParams, cfg: &SchemeConfig, n: usize) -> Result<BuiltEncoding> {
    build_encoding(n, cfg, params.learned_table.as_ref(), params.relative_table.as_ref())
}

/// Forward pass that first materializes the scheme's encoding from the
/// current parameters. Convenience for evaluation, tests, and the
/// finite-difference oracle; the training loop caches static encodings
/// instead.
pub fn forward_with_scheme(
    params: &EncoderParams,
    cfg: &SchemeConfig,
    x: &Matrix,
    causal: bool,
) -> Result<(Matrix, ForwardCache)> {
    let enc = encoding_for(params, cfg, x.rows())?;
    encoder_forward(x, enc.pe.as_ref(), enc.bias.as_ref(), params, causal)
}

/// Scalar MSE of the scheme-aware forward pass; the closure handed to
/// `finite_diff_grad` when checking backward passes.
pub fn loss_with_scheme(
    params: &EncoderParams,
    cfg: &SchemeConfig,
    x: &Matrix,
    target: &Matrix,
    causal: bool,
) -> Result<f64> {
    let (pred, _) = forward_with_scheme(params, cfg, x, causal)?;
    let (loss, _) = mse_loss(&pred, target)?;
    Ok(loss)
}
