//! Hedge weights on the probability simplex, kept in the log domain.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Mixing weights `theta` over the `K` loss sequences.
///
/// Only log-weights are updated; the probabilities are recomputed from them
/// with a log-sum-exp normalization, so no update can overflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexWeights {
    log_weights: Vec<f64>,
    log_probs: Vec<f64>,
    probs: Vec<f64>,
}

pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

impl SimplexWeights {
    /// Uniform weights `w_1 = 1`.
    pub fn uniform(k: usize) -> Result<Self> {
        Self::from_log_weights(vec![0.0; k])
    }

    pub fn from_log_weights(log_weights: Vec<f64>) -> Result<Self> {
        if log_weights.is_empty() {
            return Err(Error::Empty("log weights"));
        }
        ensure_finite(&log_weights, "log weights")?;
        let lse = log_sum_exp(&log_weights);
        let log_probs: Vec<f64> = log_weights.iter().map(|w| w - lse).collect();
        let probs = log_probs.iter().map(|l| l.exp()).collect();
        Ok(Self {
            log_weights,
            log_probs,
            probs,
        })
    }

    /// Point mass on coordinate `index`.
    pub fn indicator(k: usize, index: usize) -> Result<Self> {
        if index >= k {
            return Err(Error::InvalidParameter(format!(
                "indicator index {index} out of range for K = {k}"
            )));
        }
        let mut probs = vec![0.0; k];
        probs[index] = 1.0;
        let log_probs = probs
            .iter()
            .map(|p: &f64| if *p > 0.0 { 0.0 } else { f64::NEG_INFINITY })
            .collect::<Vec<_>>();
        Ok(Self {
            log_weights: log_probs.clone(),
            log_probs,
            probs,
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn log_probs(&self) -> &[f64] {
        &self.log_probs
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Gains-version Hedge step: `w_i <- w_i exp(eta * gain_i)`, then renormalize.
    pub fn hedge_update(&self, gains: &[f64], eta: f64) -> Result<Self> {
        if gains.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: gains.len(),
            });
        }
        ensure_finite(gains, "hedge gains")?;
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hedge step {eta} must be >= 0"
            )));
        }
        // Shifting by the normalizer keeps log-weights bounded for any horizon.
        let shifted: Vec<f64> = self
            .log_probs
            .iter()
            .zip(gains)
            .map(|(l, g)| l + eta * g)
            .collect();
        Self::from_log_weights(shifted)
    }

    /// `sum_i theta_i v_i`.
    pub fn dot(&self, values: &[f64]) -> f64 {
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }

    pub fn l1_distance(&self, other: &Self) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// `KL(self || other)` computed from log-probabilities.
    ///
    /// Uses `sum_i p_i (r_i - 1 - ln r_i)` with `r = q / p`, which equals the
    /// divergence because `sum_i p_i (r_i - 1) = 0` and has no cancellation
    /// between terms when the two distributions are close.
    pub fn kl_divergence(&self, other: &Self) -> f64 {
        self.probs
            .iter()
            .zip(self.log_probs.iter().zip(&other.log_probs))
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, (lp, lq))| p * exp_m1_minus_identity(lq - lp))
            .sum()
    }

    /// Lowest index attaining the largest probability.
    pub fn argmax(&self) -> usize {
        argmax_lowest(&self.probs)
    }
}

/// `e^d - 1 - d`, accurate for small `|d|`.
fn exp_m1_minus_identity(d: f64) -> f64 {
    if d.abs() < 1e-3 {
        d * d * (0.5 + d * (1.0 / 6.0 + d * (1.0 / 24.0 + d / 120.0)))
    } else {
        d.exp_m1() - d
    }
}

/// Index of the maximum entry, ties broken toward the lowest index.
pub fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
