use crate::benchmark::{minimize_max, SolverOptions};
use crate::error::Result;
use crate::losses::{evaluate_all, ConvexFn};
use crate::rng::RandomSource;
use crate::set::{Action, FeasibleSet};
use crate::weights::SimplexWeights;

use super::{OnlineAlgorithm, StepRecord};

/// Follow the regularized leader on the max of cumulative losses:
/// `x_t = argmin_x max_k sum_{s<t} f_s^k(x) + (scale/2) ||x||^2`.
#[derive(Debug, Clone)]
pub struct Ftrl {
    set: FeasibleSet,
    cumulative: Vec<ConvexFn>,
    rounds: usize,
    regularizer: ConvexFn,
    x: Action,
    uniform: SimplexWeights,
    options: SolverOptions,
}

impl Ftrl {
    pub const DEFAULT_SCALE: f64 = 1.0;
    pub const TOLERANCE: f64 = 1e-6;

    pub fn new(set: FeasibleSet, objectives: usize, regularizer_scale: f64) -> Result<Self> {
        if !(regularizer_scale.is_finite() && regularizer_scale >= 0.0) {
            return Err(crate::Error::InvalidParameter(format!(
                "regularizer scale {regularizer_scale} must be finite and nonnegative"
            )));
        }
        let dim = set.dim();
        Ok(Self {
            regularizer: ConvexFn::squared_distance(&vec![0.0; dim], 0.5 * regularizer_scale),
            cumulative: vec![ConvexFn::zero(dim); objectives],
            rounds: 0,
            x: set.project(&vec![0.0; dim])?,
            uniform: SimplexWeights::uniform(objectives)?,
            options: SolverOptions::with_tolerance(Self::TOLERANCE),
            set,
        })
    }

    /// Leader for the history absorbed so far.
    pub fn leader(&self, warm_start: &[f64]) -> Result<Action> {
        if self.rounds == 0 {
            return self.set.project(&vec![0.0; self.set.dim()]);
        }
        let objective: Vec<ConvexFn> = self
            .cumulative
            .iter()
            .map(|f| {
                let mut g = f.clone();
                g.add(&self.regularizer);
                g
            })
            .collect();
        Ok(
            minimize_max(&objective, &self.set, Some(warm_start), &self.options)?
                .require_converged()?
                .x,
        )
    }

    pub fn absorb(&mut self, fns: &[ConvexFn]) {
        self.rounds += 1;
        for (c, f) in self.cumulative.iter_mut().zip(fns) {
            c.add(f);
        }
    }
}

impl OnlineAlgorithm for Ftrl {
    fn name(&self) -> &'static str {
        "ftrl"
    }

    fn step(&mut self, _t: usize, fns: &[ConvexFn], _rng: &mut RandomSource) -> Result<StepRecord> {
        self.x = self.leader(&self.x)?;
        let record = StepRecord {
            action: self.x.clone(),
            theta: self.uniform.clone(),
            losses: evaluate_all(fns, &self.x),
            eta_x: 0.0,
            eta_theta: 0.0,
        };
        self.absorb(fns);
        Ok(record)
    }

    fn weights(&self) -> SimplexWeights {
        self.uniform.clone()
    }
}
