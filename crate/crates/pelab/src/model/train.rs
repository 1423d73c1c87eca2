//! Mini-batch Adam training loop.

use crate::encodings::{BuiltEncoding, SchemeConfig};
use crate::error::{Error, Result};
use crate::model::forward::{encoder_forward, mse_loss};
use crate::model::params::EncoderParams;
use crate::model::{backward::encoder_backward, encoding_for};
use crate::numkit::{adam_step, AdamState, SplitMix64, ADAM_BETA1, ADAM_BETA2, ADAM_EPS};
use crate::tasks::Dataset;

/// RNG stream tags: one experiment seed drives init and shuffling without
/// the streams overlapping (dataset generation has its own stream).
const STREAM_INIT: u64 = 1;
const STREAM_SHUFFLE: u64 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub n_train_samples: usize,
    pub seq_len: usize,
    pub epochs: usize,
    pub lr: f64,
    pub batch_size: usize,
    pub seed: u64,
    pub scheme: SchemeConfig,
    pub d_ff: usize,
    pub causal: bool,
}

impl TrainConfig {
    /// Library defaults; the CLI profiles override counts.
    pub fn new(scheme: SchemeConfig) -> Self {
        TrainConfig {
            n_train_samples: 10_000,
            seq_len: 50,
            epochs: 20,
            lr: 1e-3,
            batch_size: 32,
            seed: 1,
            scheme,
            d_ff: 128,
            causal: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if self.n_train_samples < 1 || self.seq_len < 1 || self.epochs < 1 || self.batch_size < 1 {
            return Err(Error::config("train", "all counts must be >= 1"));
        }
        if !(self.lr > 0.0) {
            return Err(Error::config("lr", format!("must be > 0, got {}", self.lr)));
        }
        if self.d_ff < 1 {
            return Err(Error::config("d_ff", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub params: EncoderParams,
    /// Mean training loss per epoch.
    pub loss_history: Vec<f64>,
}

/// Train from a fresh seeded initialization.
///
/// Deterministic given the config: initialization, shuffling, and updates
/// all derive from `cfg.seed`. Fails with a divergence error naming the
/// epoch and batch if the loss ever becomes non-finite.
pub fn train(cfg: &TrainConfig, data: &Dataset) -> Result<TrainOutcome> {
    if data.seq_len != cfg.seq_len {
        return Err(Error::Usage {
            detail: format!("dataset seq_len {} != config seq_len {}", data.seq_len, cfg.seq_len),
        });
    }
    if data.is_empty() {
        return Err(Error::Usage { detail: "empty dataset".into() });
    }

    let mut init_rng = SplitMix64::stream(cfg.seed, STREAM_INIT);
    let mut params = EncoderParams::init(&cfg.scheme, cfg.d_ff, &mut init_rng);
    let mut shuffle_rng = SplitMix64::stream(cfg.seed, STREAM_SHUFFLE);

    // Static schemes build their encoding once; trainable ones rebuild per
    // batch from the current table.
    let static_encoding: Option<BuiltEncoding> = if cfg.scheme.scheme.is_trainable() {
        None
    } else {
        Some(encoding_for(&params, &cfg.scheme, cfg.seq_len)?)
    };

    let mut adam = {
        let entries = params.entries();
        let refs: Vec<&crate::numkit::Matrix> = entries.iter().map(|(_, m)| *m).collect();
        AdamState::new(&refs)
    };

    let n = data.len().min(cfg.n_train_samples);
    let mut order: Vec<usize> = (0..n).collect();
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        shuffle_rng.shuffle(&mut order);
        let mut epoch_loss = 0.0;
        let mut seen = 0usize;
        for (batch_idx, batch) in order.chunks(cfg.batch_size).enumerate() {
            let rebuilt;
            let encoding = match &static_encoding {
                Some(enc) => enc,
                None => {
                    rebuilt = encoding_for(&params, &cfg.scheme, cfg.seq_len)?;
                    &rebuilt
                }
            };
            let mut grads = params.zeros_like();
            let mut batch_loss = 0.0;
            for &idx in batch {
                let (pred, cache) = encoder_forward(
                    &data.inputs[idx],
                    encoding.pe.as_ref(),
                    encoding.bias.as_ref(),
                    &params,
                    cfg.causal,
                )?;
                let (loss, dloss) = mse_loss(&pred, &data.targets[idx])?;
                batch_loss += loss;
                let g = encoder_backward(&params, &cache, &dloss)?;
                grads.add_assign(&g)?;
            }
            let scale = (batch.len() as f64).recip();
            batch_loss *= scale;
            if !batch_loss.is_finite() {
                return Err(Error::Diverged { epoch, batch: batch_idx });
            }
            grads.scale_in_place(scale);

            let mut param_entries = params.entries_mut();
            let grad_entries = grads.entries();
            let mut p_refs: Vec<&mut crate::numkit::Matrix> =
                param_entries.iter_mut().map(|(_, m)| &mut **m).collect();
            let g_refs: Vec<&crate::numkit::Matrix> = grad_entries.iter().map(|(_, m)| *m).collect();
            adam_step(&mut p_refs, &g_refs, &mut adam, cfg.lr, ADAM_BETA1, ADAM_BETA2, ADAM_EPS)?;

            epoch_loss += batch_loss * batch.len() as f64;
            seen += batch.len();
        }
        let mean = epoch_loss / seen as f64;
        if !mean.is_finite() || !params.all_finite() {
            return Err(Error::Diverged { epoch, batch: 0 });
        }
        history.push(mean);
    }

    Ok(TrainOutcome { params, loss_history: history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::Scheme;
    use crate::tasks::gen_running_sum;

    fn tiny_cfg(scheme: Scheme) -> TrainConfig {
        let mut sc = SchemeConfig::new(scheme);
        sc.d_model = 8;
        sc.n_max = 8;
        sc.clip_k = 4;
        let mut cfg = TrainConfig::new(sc);
        cfg.n_train_samples = 64;
        cfg.seq_len = 8;
        cfg.epochs = 3;
        cfg.batch_size = 16;
        cfg.d_ff = 16;
        cfg
    }

    #[test]
    fn loss_decreases_on_running_sum() {
        let cfg = tiny_cfg(Scheme::Sinusoidal);
        let data = gen_running_sum(cfg.n_train_samples, cfg.seq_len, cfg.seed);
        let out = train(&cfg, &data).unwrap();
        assert_eq!(out.loss_history.len(), 3);
        assert!(out.loss_history.iter().all(|l| l.is_finite()));
        assert!(
            out.loss_history.last().unwrap() < out.loss_history.first().unwrap(),
            "history {:?}",
            out.loss_history
        );
    }

    #[test]
    fn zero_learning_rate_keeps_initialization() {
        let mut cfg = tiny_cfg(Scheme::Sinusoidal);
        cfg.lr = 0.0;
        cfg.epochs = 2;
        let data = gen_running_sum(cfg.n_train_samples, cfg.seq_len, cfg.seed);
        let out = train(&cfg, &data).unwrap();
        let mut rng = SplitMix64::stream(cfg.seed, STREAM_INIT);
        let fresh = EncoderParams::init(&cfg.scheme, cfg.d_ff, &mut rng);
        assert_eq!(out.params, fresh);
    }

    #[test]
    fn same_seed_gives_bit_identical_history() {
        let cfg = tiny_cfg(Scheme::Relative);
        let data = gen_running_sum(cfg.n_train_samples, cfg.seq_len, cfg.seed);
        let a = train(&cfg, &data).unwrap();
        let b = train(&cfg, &data).unwrap();
        assert_eq!(a.loss_history, b.loss_history);
        assert_eq!(a.params, b.params);
    }

    #[test]
    fn absurd_learning_rate_reports_divergence() {
        let mut cfg = tiny_cfg(Scheme::Sinusoidal);
        cfg.lr = 1e18;
        cfg.epochs = 30;
        let data = gen_running_sum(cfg.n_train_samples, cfg.seq_len, cfg.seed);
        match train(&cfg, &data) {
            Err(Error::Diverged { .. }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_seq_len_is_usage_error() {
        let cfg = tiny_cfg(Scheme::Sinusoidal);
        let data = gen_running_sum(8, 9, 1);
        assert!(matches!(train(&cfg, &data), Err(Error::Usage { .. })));
    }
}
