//! Empirical verification of the bound-level claims: extrapolation decay
//! curves, the ALiBi attention-gap bound, encoding-norm reports, and the
//! wavelet Gram matrix.

mod bias_gap;
mod decay;
mod gram;
mod norms;

pub use bias_gap::{alibi_weight_gap, probe_attention_weight, BiasGapReport, BiasGapRow};
pub use decay::{extrapolation_curve, fit_decay_rate, DecayCurve, DecayFit, DecayFitOutcome};
pub use gram::{gram_report, GramReport};
pub use norms::{norm_report, NormReport};
