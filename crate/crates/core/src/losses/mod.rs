//! Loss oracles: per-round bundles of `K` convex functions and their generators.

mod function;
mod generators;

use serde::{Deserialize, Serialize};

pub use function::{evaluate_all, sigmoid, softplus, ConvexFn, LogisticBatch};
pub use generators::{
    AdversarialPair, ExpertLosses, FairClassification, RandomLinear, RandomQuadratic,
    SwitchingShift, QUADRATIC_CENTERS,
};

use crate::error::Result;
use crate::rng::RandomSource;
use crate::set::FeasibleSet;

/// `lambda_t(x)`, with gradients only under full-information feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct LossBundle {
    pub values: Vec<f64>,
    pub grads: Option<Vec<Vec<f64>>>,
}

impl LossBundle {
    pub fn evaluate(fns: &[ConvexFn], x: &[f64], with_grads: bool) -> Self {
        if with_grads {
            let (values, grads) = fns.iter().map(|f| f.value_and_gradient(x)).unzip();
            Self {
                values,
                grads: Some(grads),
            }
        } else {
            Self {
                values: evaluate_all(fns, x),
                grads: None,
            }
        }
    }
}

/// A stream of loss bundles indexed by round `t >= 1`.
///
/// Implementations are pure in `(seed, t)`: asking for the same round twice
/// returns identical functions, whatever the query order.
pub trait LossOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn num_objectives(&self) -> usize;

    /// Declared `B` with `|f_t^k(x)| <= B` on the feasible set.
    fn value_bound(&self) -> f64;

    /// Declared `G` with `||grad f_t^k(x)|| <= G` on the feasible set.
    fn lipschitz_bound(&self) -> f64;

    /// The `K` functions revealed at round `t`.
    fn round(&self, t: usize) -> Vec<ConvexFn>;

    /// `mu(x) = E[lambda_t(x)]` as functions, when available in closed form.
    fn closed_form_mean(&self) -> Option<Vec<ConvexFn>> {
        None
    }

    /// Whether rounds are i.i.d. draws.
    fn is_iid(&self) -> bool {
        true
    }

    fn descriptor(&self) -> GeneratorDescriptor;
}

/// Serializable description of a generator, enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum GeneratorDescriptor {
    RandomLinear {
        dim: usize,
        objectives: usize,
        seed: u64,
    },
    RandomQuadratic {
        objectives: usize,
        seed: u64,
    },
    Experts {
        objectives: usize,
        low: f64,
        high: f64,
        seed: u64,
    },
    FairClassification {
        dim: usize,
        objectives: usize,
        batch: usize,
        kappa: f64,
        sigma: f64,
        seed: u64,
        switching: Option<SwitchingShift>,
    },
    AdversarialPair,
}

impl GeneratorDescriptor {
    pub fn build(&self, set: &FeasibleSet) -> Result<Box<dyn LossOracle>> {
        Ok(match *self {
            GeneratorDescriptor::RandomLinear {
                dim,
                objectives,
                seed,
            } => Box::new(RandomLinear::new(dim, objectives, set, seed)?),
            GeneratorDescriptor::RandomQuadratic { objectives, seed } => {
                Box::new(RandomQuadratic::new(objectives, set, seed)?)
            }
            GeneratorDescriptor::Experts {
                objectives,
                low,
                high,
                seed,
            } => Box::new(ExpertLosses::new(objectives, low, high, set, seed)?),
            GeneratorDescriptor::FairClassification {
                dim,
                objectives,
                batch,
                kappa,
                sigma,
                seed,
                switching,
            } => Box::new(FairClassification::new(
                dim, objectives, batch, kappa, sigma, switching, set, seed,
            )?),
            GeneratorDescriptor::AdversarialPair => Box::new(AdversarialPair::new(set)?),
        })
    }
}

/// Rounds reserved for Monte-Carlo mean estimation start here, far beyond any
/// horizon an experiment plays.
const MONTE_CARLO_OFFSET: usize = 1 << 40;

/// Estimate of `mu(x) = E[lambda_t(x)]`.
#[derive(Debug, Clone)]
pub enum MeanLossEstimate {
    ClosedForm(Vec<ConvexFn>),
    MonteCarlo {
        mean: Vec<ConvexFn>,
        samples: Vec<Vec<ConvexFn>>,
    },
}

impl MeanLossEstimate {
    /// Closed form when the generator provides one, otherwise Monte-Carlo.
    pub fn estimate(oracle: &dyn LossOracle, samples: usize, rng: &mut RandomSource) -> Self {
        match oracle.closed_form_mean() {
            Some(mean) => MeanLossEstimate::ClosedForm(mean),
            None => Self::monte_carlo(oracle, samples, rng),
        }
    }

    /// Empirical mean over `samples` fresh rounds.
    pub fn monte_carlo(oracle: &dyn LossOracle, samples: usize, rng: &mut RandomSource) -> Self {
        let samples = samples.max(2);
        let start = MONTE_CARLO_OFFSET + (rng.next_u64() >> 30) as usize;
        let rounds: Vec<Vec<ConvexFn>> = (0..samples).map(|i| oracle.round(start + i)).collect();
        let k = oracle.num_objectives();
        let w = 1.0 / samples as f64;
        let mean = (0..k)
            .map(|j| {
                let mut acc = ConvexFn::zero(oracle.dim());
                for r in &rounds {
                    acc.add_scaled(&r[j], w);
                }
                acc
            })
            .collect();
        MeanLossEstimate::MonteCarlo {
            mean,
            samples: rounds,
        }
    }

    pub fn functions(&self) -> &[ConvexFn] {
        match self {
            MeanLossEstimate::ClosedForm(f) => f,
            MeanLossEstimate::MonteCarlo { mean, .. } => mean,
        }
    }

    pub fn sample_count(&self) -> usize {
        match self {
            MeanLossEstimate::ClosedForm(_) => 0,
            MeanLossEstimate::MonteCarlo { samples, .. } => samples.len(),
        }
    }

    pub fn value(&self, x: &[f64]) -> Vec<f64> {
        evaluate_all(self.functions(), x)
    }

    /// Per-coordinate standard error at `x`; zero for closed forms.
    pub fn standard_error(&self, x: &[f64]) -> Vec<f64> {
        match self {
            MeanLossEstimate::ClosedForm(f) => vec![0.0; f.len()],
            MeanLossEstimate::MonteCarlo { samples, mean } => {
                let n = samples.len() as f64;
                (0..mean.len())
                    .map(|j| {
                        let vals: Vec<f64> = samples.iter().map(|r| r[j].value(x)).collect();
                        let m = vals.iter().sum::<f64>() / n;
                        let var = vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
                        (var / n).sqrt()
                    })
                    .collect()
            }
        }
    }
}
