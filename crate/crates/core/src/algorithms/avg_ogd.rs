use crate::error::Result;
use crate::losses::{ConvexFn, LossBundle};
use crate::rng::RandomSource;
use crate::schedule::Schedules;
use crate::set::{Action, FeasibleSet};
use crate::weights::SimplexWeights;

use super::{ogd_update, Feedback, OnlineAlgorithm, StepRecord, WeightedLoss};

/// Projected OGD on the plain average `(1/K) sum_k f_t^k`.
///
/// Same lagged step and schedule as the OGD half of Hedge+OGD, with the
/// weights frozen at uniform.
#[derive(Debug, Clone)]
pub struct AverageOgd {
    set: FeasibleSet,
    schedules: Schedules,
    x: Action,
    uniform: SimplexWeights,
    previous: Option<LossBundle>,
}

impl AverageOgd {
    pub fn new(
        set: FeasibleSet,
        objectives: usize,
        schedules: Schedules,
        start: Option<Action>,
    ) -> Result<Self> {
        schedules.x.validate()?;
        let x = match start {
            Some(s) => set.project(&s)?,
            None => set.center(),
        };
        Ok(Self {
            uniform: SimplexWeights::uniform(objectives)?,
            set,
            schedules,
            x,
            previous: None,
        })
    }

    pub fn observe(&mut self, feedback: Feedback) -> Result<()> {
        self.previous = Some(feedback.into_full()?);
        Ok(())
    }
}

impl OnlineAlgorithm for AverageOgd {
    fn name(&self) -> &'static str {
        "avg-ogd"
    }

    fn step(&mut self, t: usize, fns: &[ConvexFn], _rng: &mut RandomSource) -> Result<StepRecord> {
        let eta_x = self.schedules.x.at(t);
        if let Some(prev) = &self.previous {
            let w = WeightedLoss::from_bundle(prev, self.uniform.probs())?;
            self.x = ogd_update(&self.set, &self.x, &w.gradient, eta_x)?;
        }
        let bundle = LossBundle::evaluate(fns, &self.x, true);
        let record = StepRecord {
            action: self.x.clone(),
            theta: self.uniform.clone(),
            losses: bundle.values.clone(),
            eta_x,
            eta_theta: 0.0,
        };
        self.observe(Feedback::Full(bundle))?;
        Ok(record)
    }

    fn weights(&self) -> SimplexWeights {
        self.uniform.clone()
    }
}
