//! Trainable parameters and their canonical flat ordering.

use crate::encodings::{LearnedTable, RelativeTable, Scheme, SchemeConfig};
use crate::error::{Error, Result};
use crate::numkit::{Matrix, SplitMix64};

pub const N_LAYERS: usize = 2;

/// Standard deviation for learned/relative table initialization.
const TABLE_INIT_STD: f64 = 0.02;

#[derive(Clone, Debug, PartialEq)]
pub struct LayerParams {
    pub w_q: Matrix,  // d_model x d_k
    pub w_k: Matrix,  // d_model x d_k
    pub w_v: Matrix,  // d_model x d_k
    pub w_o: Matrix,  // d_k x d_model
    pub w_ff1: Matrix, // d_model x d_ff
    pub b_ff1: Matrix, // 1 x d_ff
    pub w_ff2: Matrix, // d_ff x d_model
    pub b_ff2: Matrix, // 1 x d_model
}

/// All trainable state of the encoder, including the learned/relative
/// encoding tables when those schemes are active. Gradients reuse this
/// struct shape-for-shape.
#[derive(Clone, Debug, PartialEq)]
pub struct EncoderParams {
    pub w_in: Matrix,  // 1 x d_model
    pub layers: Vec<LayerParams>,
    pub w_out: Matrix, // d_model x 1
    pub learned_table: Option<LearnedTable>,
    pub relative_table: Option<RelativeTable>,
}

impl EncoderParams {
    /// Zero-mean init with std `1/sqrt(fan_in)` for weights, zeros for
    /// biases, std 0.02 for encoding tables.
    pub fn init(cfg: &SchemeConfig, d_ff: usize, rng: &mut SplitMix64) -> Self {
        let d = cfg.d_model;
        let mut normal = |rows: usize, cols: usize, fan_in: usize| {
            let std = (fan_in as f64).sqrt().recip();
            Matrix::from_fn(rows, cols, |_, _| std * rng.next_normal())
        };
        let mut layers = Vec::with_capacity(N_LAYERS);
        for _ in 0..N_LAYERS {
            layers.push(LayerParams {
                w_q: normal(d, d, d),
                w_k: normal(d, d, d),
                w_v: normal(d, d, d),
                w_o: normal(d, d, d),
                w_ff1: normal(d, d_ff, d),
                b_ff1: Matrix::zeros(1, d_ff),
                w_ff2: normal(d_ff, d, d_ff),
                b_ff2: Matrix::zeros(1, d),
            });
        }
        let w_in = normal(1, d, 1);
        let w_out = normal(d, 1, d);
        let learned_table = (cfg.scheme == Scheme::Learned)
            .then(|| LearnedTable::init(cfg.n_max, d, TABLE_INIT_STD, rng));
        let relative_table = (cfg.scheme == Scheme::Relative)
            .then(|| RelativeTable::init(cfg.clip_k, TABLE_INIT_STD, rng));
        EncoderParams { w_in, layers, w_out, learned_table, relative_table }
    }

    /// Gradient accumulator with the same structure, all zeros.
    pub fn zeros_like(&self) -> Self {
        let zero = |m: &Matrix| Matrix::zeros(m.rows(), m.cols());
        EncoderParams {
            w_in: zero(&self.w_in),
            layers: self
                .layers
                .iter()
                .map(|l| LayerParams {
                    w_q: zero(&l.w_q),
                    w_k: zero(&l.w_k),
                    w_v: zero(&l.w_v),
                    w_o: zero(&l.w_o),
                    w_ff1: zero(&l.w_ff1),
                    b_ff1: zero(&l.b_ff1),
                    w_ff2: zero(&l.w_ff2),
                    b_ff2: zero(&l.b_ff2),
                })
                .collect(),
            w_out: zero(&self.w_out),
            learned_table: self
                .learned_table
                .as_ref()
                .map(|t| LearnedTable { values: zero(&t.values) }),
            relative_table: self
                .relative_table
                .as_ref()
                .map(|t| RelativeTable { values: zero(&t.values), clip_k: t.clip_k }),
        }
    }

    pub fn d_model(&self) -> usize {
        self.w_in.cols()
    }

    pub fn d_ff(&self) -> usize {
        self.layers[0].w_ff1.cols()
    }

    /// Canonical (name, tensor) list; the order fixes the Adam slot layout
    /// and the checkpoint payload layout.
    pub fn entries(&self) -> Vec<(String, &Matrix)> {
        let mut out: Vec<(String, &Matrix)> = vec![("w_in".into(), &self.w_in)];
        for (i, l) in self.layers.iter().enumerate() {
            out.push((format!("layer{i}.w_q"), &l.w_q));
            out.push((format!("layer{i}.w_k"), &l.w_k));
            out.push((format!("layer{i}.w_v"), &l.w_v));
            out.push((format!("layer{i}.w_o"), &l.w_o));
            out.push((format!("layer{i}.w_ff1"), &l.w_ff1));
            out.push((format!("layer{i}.b_ff1"), &l.b_ff1));
            out.push((format!("layer{i}.w_ff2"), &l.w_ff2));
            out.push((format!("layer{i}.b_ff2"), &l.b_ff2));
        }
        out.push(("w_out".into(), &self.w_out));
        if let Some(t) = &self.learned_table {
            out.push(("learned_table".into(), &t.values));
        }
        if let Some(t) = &self.relative_table {
            out.push(("relative_table".into(), &t.values));
        }
        out
    }

    /// Mutable view in the same canonical order.
    pub fn entries_mut(&mut self) -> Vec<(String, &mut Matrix)> {
        let mut out: Vec<(String, &mut Matrix)> = vec![("w_in".into(), &mut self.w_in)];
        for (i, l) in self.layers.iter_mut().enumerate() {
            out.push((format!("layer{i}.w_q"), &mut l.w_q));
            out.push((format!("layer{i}.w_k"), &mut l.w_k));
            out.push((format!("layer{i}.w_v"), &mut l.w_v));
            out.push((format!("layer{i}.w_o"), &mut l.w_o));
            out.push((format!("layer{i}.w_ff1"), &mut l.w_ff1));
            out.push((format!("layer{i}.b_ff1"), &mut l.b_ff1));
            out.push((format!("layer{i}.w_ff2"), &mut l.w_ff2));
            out.push((format!("layer{i}.b_ff2"), &mut l.b_ff2));
        }
        out.push(("w_out".into(), &mut self.w_out));
        if let Some(t) = &mut self.learned_table {
            out.push(("learned_table".into(), &mut t.values));
        }
        if let Some(t) = &mut self.relative_table {
            out.push(("relative_table".into(), &mut t.values));
        }
        out
    }

    /// Accumulate `other` (a gradient of identical structure) into `self`.
    pub fn add_assign(&mut self, other: &EncoderParams) -> Result<()> {
        let mut mine = self.entries_mut();
        let theirs = other.entries();
        if mine.len() != theirs.len() {
            return Err(Error::Usage { detail: "gradient structure mismatch".into() });
        }
        for ((name_a, a), (name_b, b)) in mine.iter_mut().zip(&theirs) {
            if name_a != name_b {
                return Err(Error::Usage { detail: format!("gradient slot {name_a} vs {name_b}") });
            }
            a.add_assign(b)?;
        }
        Ok(())
    }

    pub fn scale_in_place(&mut self, s: f64) {
        for (_, m) in self.entries_mut() {
            for v in m.data_mut() {
                *v *= s;
            }
        }
    }

    pub fn all_finite(&self) -> bool {
        self.entries().iter().all(|(_, m)| m.all_finite())
    }
}
