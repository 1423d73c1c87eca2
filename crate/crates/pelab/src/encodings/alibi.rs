//! ALiBi: attention logits biased by `-alpha * |i - j|`.

use crate::encodings::BiasMatrix;
use crate::error::{Error, Result};
use crate::numkit::Matrix;

pub fn alibi_bias(n: usize, alpha: f64) -> Result<BiasMatrix> {
    if !(alpha > 0.0) {
        return Err(Error::config("alpha", format!("must be > 0, got {alpha}")));
    }
    let values = Matrix::from_fn(n, n, |i, j| {
        let dist = i.abs_diff(j) as f64;
        -alpha * dist
    });
    Ok(BiasMatrix { values })
}
