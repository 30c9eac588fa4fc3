use crate::benchmark::{minimize_max, SolverOptions};
use crate::error::Result;
use crate::losses::{evaluate_all, ConvexFn};
use crate::rng::RandomSource;
use crate::set::FeasibleSet;
use crate::weights::SimplexWeights;

use super::{OnlineAlgorithm, StepRecord};

/// Plays the single-round min-max point `argmin_x max_k f_t^k(x)`.
///
/// This baseline sees the current round's functions before acting.
#[derive(Debug, Clone)]
pub struct Greedy {
    set: FeasibleSet,
    uniform: SimplexWeights,
    options: SolverOptions,
}

impl Greedy {
    pub fn new(set: FeasibleSet, objectives: usize) -> Result<Self> {
        Ok(Self {
            set,
            uniform: SimplexWeights::uniform(objectives)?,
            options: SolverOptions::default(),
        })
    }
}

impl OnlineAlgorithm for Greedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn step(&mut self, _t: usize, fns: &[ConvexFn], _rng: &mut RandomSource) -> Result<StepRecord> {
        let sol = minimize_max(fns, &self.set, None, &self.options)?;
        Ok(StepRecord {
            losses: evaluate_all(fns, &sol.x),
            action: sol.x,
            theta: self.uniform.clone(),
            eta_x: 0.0,
            eta_theta: 0.0,
        })
    }

    fn weights(&self) -> SimplexWeights {
        self.uniform.clone()
    }
}
