//! Scheme identifiers and their shared configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Sinusoidal,
    Learned,
    Relative,
    Alibi,
    Wavelet,
    Legendre,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Sinusoidal,
        Scheme::Learned,
        Scheme::Relative,
        Scheme::Alibi,
        Scheme::Wavelet,
        Scheme::Legendre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Sinusoidal => "sinusoidal",
            Scheme::Learned => "learned",
            Scheme::Relative => "relative",
            Scheme::Alibi => "alibi",
            Scheme::Wavelet => "wavelet",
            Scheme::Legendre => "legendre",
        }
    }

    /// Bias schemes contribute attention-logit biases and no encoding rows.
    pub fn is_bias_only(self) -> bool {
        matches!(self, Scheme::Alibi | Scheme::Relative)
    }

    /// Schemes whose tables receive gradients during training.
    pub fn is_trainable(self) -> bool {
        matches!(self, Scheme::Learned | Scheme::Relative)
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sch| sch.name() == s)
            .ok_or_else(|| Error::config("scheme", format!("unknown scheme `{s}`")))
    }
}

/// Everything needed to construct any of the six schemes.
///
/// `alpha` is the ALiBi slope, `gamma` the Legendre tanh scale, `clip_k`
/// the relative-bias clipping distance K, `wavelet_max_scale` the coarsest
/// wavelet scale J (defaults to `floor(log2(n_max))`), and
/// `refinement_levels` the cascade depth for the wavelet tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    #[serde(default = "default_d_model")]
    pub d_model: usize,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_clip_k")]
    pub clip_k: usize,
    #[serde(default)]
    pub wavelet_max_scale: Option<usize>,
    #[serde(default = "default_refinement_levels")]
    pub refinement_levels: usize,
}

fn default_d_model() -> usize {
    64
}
fn default_n_max() -> usize {
    50
}
fn default_alpha() -> f64 {
    // 0.1 / N_train with the default training length of 50.
    0.002
}
fn default_gamma() -> f64 {
    1.0
}
fn default_clip_k() -> usize {
    16
}
fn default_refinement_levels() -> usize {
    10
}

impl SchemeConfig {
    pub fn new(scheme: Scheme) -> Self {
        SchemeConfig {
            scheme,
            d_model: default_d_model(),
            n_max: default_n_max(),
            alpha: default_alpha(),
            gamma: default_gamma(),
            clip_k: default_clip_k(),
            wavelet_max_scale: None,
            refinement_levels: default_refinement_levels(),
        }
    }

    /// Coarsest wavelet scale: configured value, or `floor(log2(n_max))`.
    pub fn max_scale(&self) -> usize {
        self.wavelet_max_scale.unwrap_or_else(|| (self.n_max as f64).log2().floor() as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_model < 1 {
            return Err(Error::config("d_model", "must be >= 1"));
        }
        if self.scheme == Scheme::Sinusoidal && self.d_model % 2 != 0 {
            return Err(Error::config("d_model", format!("sinusoidal needs an even d_model, got {}", self.d_model)));
        }
        if self.n_max < 2 {
            return Err(Error::config("n_max", "must be >= 2"));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::config("alpha", format!("must be > 0, got {}", self.alpha)));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::config("gamma", format!("must be > 0, got {}", self.gamma)));
        }
        if self.clip_k < 1 {
            return Err(Error::config("clip_k", "must be >= 1"));
        }
        Ok(())
    }
}
