//! Positional-encoding schemes.
//!
//! Additive schemes (sinusoidal, learned, wavelet, Legendre) produce a
//! [`PEMatrix`] that is added to the input embeddings; bias schemes (ALiBi,
//! clipped relative) produce a [`BiasMatrix`] that is added to attention
//! logits. [`build_encoding`] unifies the two behind one interface returning
//! an optional matrix of each kind.

mod alibi;
mod config;
mod learned;
mod legendre;
mod relative;
mod sinusoidal;
mod wavelet;

pub use alibi::alibi_bias;
pub use config::{Scheme, SchemeConfig};
pub use learned::{learned_pe_lookup, LearnedTable};
pub use legendre::legendre_pe;
pub use relative::{relative_bias, RelativeTable};
pub use sinusoidal::sinusoidal_pe;
pub use wavelet::{daubechies4_tables, select_wavelet_basis, wavelet_pe, WaveletBasisFn, WaveletKind, WaveletTables};

use crate::error::{Error, Result};
use crate::numkit::Matrix;

/// Per-position encoding vectors: one row per position, `d_model` columns.
#[derive(Clone, Debug, PartialEq)]
pub struct PEMatrix {
    pub values: Matrix,
}

impl PEMatrix {
    pub fn positions(&self) -> usize {
        self.values.rows()
    }

    pub fn dim(&self) -> usize {
        self.values.cols()
    }

    pub fn row(&self, pos: usize) -> &[f64] {
        self.values.row(pos)
    }
}

/// Attention-logit bias, one entry per (query, key) position pair.
#[derive(Clone, Debug, PartialEq)]
pub struct BiasMatrix {
    pub values: Matrix,
}

impl BiasMatrix {
    pub fn size(&self) -> usize {
        self.values.rows()
    }
}

/// What a scheme contributes to the model: additive encodings, logit
/// biases, or (never, in this artifact) both.
#[derive(Clone, Debug)]
pub struct BuiltEncoding {
    pub pe: Option<PEMatrix>,
    pub bias: Option<BiasMatrix>,
}

/// Construct the encoding a scheme contributes for sequences of length `n`.
///
/// Learned and relative schemes read their trainable tables, which the
/// caller owns (they live in the encoder parameters during training).
pub fn build_encoding(
    n: usize,
    cfg: &SchemeConfig,
    learned: Option<&LearnedTable>,
    relative: Option<&RelativeTable>,
) -> Result<BuiltEncoding> {
    cfg.validate()?;
    let built = match cfg.scheme {
        Scheme::Sinusoidal => BuiltEncoding { pe: Some(sinusoidal_pe(n, cfg.d_model)?), bias: None },
        Scheme::Learned => {
            let table = learned.ok_or_else(|| Error::Usage {
                detail: "learned scheme needs a LearnedTable".into(),
            })?;
            BuiltEncoding { pe: Some(table.pe_for_len(n)), bias: None }
        }
        Scheme::Relative => {
            let table = relative.ok_or_else(|| Error::Usage {
                detail: "relative scheme needs a RelativeTable".into(),
            })?;
            BuiltEncoding { pe: None, bias: Some(relative_bias(n, table, cfg.clip_k)?) }
        }
        Scheme::Alibi => BuiltEncoding { pe: None, bias: Some(alibi_bias(n, cfg.alpha)?) },
        Scheme::Wavelet => {
            let tables = daubechies4_tables(cfg.refinement_levels)?;
            BuiltEncoding { pe: Some(wavelet_pe(n, cfg, &tables)?), bias: None }
        }
        Scheme::Legendre => BuiltEncoding { pe: Some(legendre_pe(n, cfg)?), bias: None },
    };
    Ok(built)
}
