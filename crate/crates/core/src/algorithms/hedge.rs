use crate::error::{Error, Result};
use crate::sum::accurate_sum;
use crate::weights::SimplexWeights;

/// Standalone Hedge over `N` experts, gains version, with a fixed step.
#[derive(Debug, Clone)]
pub struct Hedge {
    weights: SimplexWeights,
    eta: f64,
}

impl Hedge {
    pub fn new(experts: usize, eta: f64) -> Result<Self> {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hedge step {eta} must be >= 0"
            )));
        }
        Ok(Self {
            weights: SimplexWeights::uniform(experts)?,
            eta,
        })
    }

    /// `eta = sqrt(2 ln N / T)`.
    pub fn tuned(experts: usize, horizon: usize) -> Result<Self> {
        Self::new(
            experts,
            (2.0 * (experts as f64).ln() / horizon as f64).sqrt(),
        )
    }

    pub fn probabilities(&self) -> &[f64] {
        self.weights.probs()
    }

    pub fn update(&mut self, gains: &[f64]) -> Result<()> {
        self.weights = self.weights.hedge_update(gains, self.eta)?;
        Ok(())
    }

    /// Plays the whole gain sequence and returns
    /// `max_i sum_t g_{t,i} - sum_t <p_t, g_t>`.
    pub fn regret(&mut self, gains: &[Vec<f64>]) -> Result<f64> {
        let n = self.weights.len();
        let mut earned = Vec::with_capacity(gains.len());
        for g in gains {
            earned.push(self.weights.dot(g));
            self.update(g)?;
        }
        let best = (0..n)
            .map(|i| accurate_sum(gains.iter().map(|g| g[i])))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(best - accurate_sum(earned))
    }
}
