//! Positional-encoding laboratory.
//!
//! Six positional-encoding schemes (sinusoidal, learned, clipped-relative,
//! ALiBi, Daubechies-4 wavelet, Legendre polynomial), a minimal 2-layer
//! single-head transformer encoder with hand-written forward/backward passes,
//! the running-sum synthetic task, and diagnostics that measure how each
//! scheme behaves when sequences grow past the training length.
//!
//! Everything is dense `f64` and deterministic given a seed.

pub mod diagnostics;
pub mod encodings;
pub mod error;
pub mod model;
pub mod numkit;
pub mod tasks;

pub use encodings::{BiasMatrix, PEMatrix, Scheme, SchemeConfig};
pub use error::{Error, Result};
pub use model::{EncoderParams, TrainConfig};
pub use numkit::{AdamState, Matrix, SplitMix64};
pub use tasks::Dataset;
