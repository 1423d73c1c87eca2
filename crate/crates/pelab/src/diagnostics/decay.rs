//! Extrapolation decay curves and their log-domain exponential fits.

use crate::encodings::{build_encoding, LearnedTable, Scheme, SchemeConfig};
use crate::error::{Error, Result};
use crate::numkit::SplitMix64;

/// Distances `||PE(pos) - PE(n_max - 1)||_2` for positions past the
/// training range. The reference is the last in-range position.
#[derive(Clone, Debug)]
pub struct DecayCurve {
    pub scheme: Scheme,
    pub n_max: usize,
    /// `(pos, distance)`, pos strictly increasing, all `pos > n_max - 1`.
    pub points: Vec<(usize, f64)>,
}

/// Least-squares fit of `log(distance)` against `pos - n_max`.
#[derive(Clone, Copy, Debug)]
pub struct DecayFit {
    /// Magnitude of the fitted slope (the measured decay exponent).
    pub rate: f64,
    pub amplitude: f64,
    /// RMS residual of the log-domain fit.
    pub residual: f64,
}

/// Outcome of a fit; a curve that is identically zero (the learned scheme's
/// clipped lookup) is reported as degenerate rather than fitted.
#[derive(Clone, Copy, Debug)]
pub enum DecayFitOutcome {
    Fit(DecayFit),
    AllZero,
}

/// Build the scheme's encoding over `[0, max_pos)` with the training
/// horizon fixed at `cfg.n_max`, and record the distance from each
/// out-of-range position to the last trained one.
///
/// Bias-only schemes (ALiBi, relative) have no encoding vectors; their
/// extrapolation behavior is measured by [`alibi_weight_gap`] instead.
///
/// [`alibi_weight_gap`]: crate::diagnostics::alibi_weight_gap
pub fn extrapolation_curve(cfg: &SchemeConfig, max_pos: usize) -> Result<DecayCurve> {
    if cfg.scheme.is_bias_only() {
        return Err(Error::UnsupportedScheme { scheme: cfg.scheme.name(), op: "extrapolation_curve" });
    }
    if max_pos <= cfg.n_max {
        return Err(Error::config("max_pos", format!("must exceed n_max = {}", cfg.n_max)));
    }
    // The learned scheme needs a table; any table gives the same (zero)
    // curve because every out-of-range lookup clips to the last row.
    let learned = (cfg.scheme == Scheme::Learned).then(|| {
        let mut rng = SplitMix64::stream(0, 0xDECA);
        LearnedTable::init(cfg.n_max, cfg.d_model, 0.02, &mut rng)
    });
    let built = build_encoding(max_pos, cfg, learned.as_ref(), None)?;
    let pe = built.pe.expect("additive scheme produces a PE matrix");
    let reference = pe.row(cfg.n_max - 1).to_vec();
    let mut points = Vec::with_capacity(max_pos - cfg.n_max);
    for pos in cfg.n_max..max_pos {
        let dist = pe
            .row(pos)
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        points.push((pos, dist));
    }
    Ok(DecayCurve { scheme: cfg.scheme, n_max: cfg.n_max, points })
}

/// Fit `distance ~ amplitude * exp(-rate * (pos - n_max))` in the log
/// domain over the points with positive distance.
pub fn fit_decay_rate(curve: &DecayCurve) -> Result<DecayFitOutcome> {
    let positive: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|(_, d)| *d > 0.0)
        .map(|&(pos, d)| (pos as f64 - curve.n_max as f64, d.ln()))
        .collect();
    if positive.is_empty() {
        return Ok(DecayFitOutcome::AllZero);
    }
    if positive.len() < 3 {
        return Err(Error::Usage {
            detail: format!("decay fit needs >= 3 positive-distance points, got {}", positive.len()),
        });
    }
    let n = positive.len() as f64;
    let sum_t: f64 = positive.iter().map(|(t, _)| t).sum();
    let sum_y: f64 = positive.iter().map(|(_, y)| y).sum();
    let mean_t = sum_t / n;
    let mean_y = sum_y / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(t, y) in &positive {
        sxx += (t - mean_t) * (t - mean_t);
        sxy += (t - mean_t) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_t;
    let mut ss = 0.0;
    for &(t, y) in &positive {
        let r = y - (intercept + slope * t);
        ss += r * r;
    }
    Ok(DecayFitOutcome::Fit(DecayFit {
        rate: slope.abs(),
        amplitude: intercept.exp(),
        residual: (ss / n).sqrt(),
    }))
}
