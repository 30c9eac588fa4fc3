use crate::error::Result;
use crate::losses::{ConvexFn, LossBundle};
use crate::rng::RandomSource;
use crate::schedule::Schedules;
use crate::set::{Action, FeasibleSet};
use crate::weights::SimplexWeights;

use super::{ogd_update, Feedback, OnlineAlgorithm, StepRecord, WeightedLoss};

/// Hedge over the `K` sequences combined with projected OGD on the
/// theta-weighted loss.
///
/// The OGD step at round `t` uses the gradients revealed at round `t - 1`,
/// weighted by the current `theta_t`, so the first step is idle.
#[derive(Debug, Clone)]
pub struct HedgeOgd {
    set: FeasibleSet,
    schedules: Schedules,
    x: Action,
    theta: SimplexWeights,
    previous: Option<LossBundle>,
}

impl HedgeOgd {
    pub fn new(
        set: FeasibleSet,
        objectives: usize,
        schedules: Schedules,
        start: Option<Action>,
    ) -> Result<Self> {
        schedules.validate()?;
        let x = match start {
            Some(s) => set.project(&s)?,
            None => set.center(),
        };
        Ok(Self {
            theta: SimplexWeights::uniform(objectives)?,
            set,
            schedules,
            x,
            previous: None,
        })
    }

    pub fn action(&self) -> &[f64] {
        &self.x
    }

    /// Consumes the feedback for the round just played and updates `theta`.
    pub fn observe(&mut self, feedback: Feedback, eta_theta: f64) -> Result<()> {
        let bundle = feedback.into_full()?;
        self.theta = self.theta.hedge_update(&bundle.values, eta_theta)?;
        self.previous = Some(bundle);
        Ok(())
    }
}

impl OnlineAlgorithm for HedgeOgd {
    fn name(&self) -> &'static str {
        "hedge-ogd"
    }

    fn step(&mut self, t: usize, fns: &[ConvexFn], _rng: &mut RandomSource) -> Result<StepRecord> {
        let eta_x = self.schedules.x.at(t);
        let eta_theta = self.schedules.theta.at(t);
        if let Some(prev) = &self.previous {
            let w = WeightedLoss::from_bundle(prev, self.theta.probs())?;
            self.x = ogd_update(&self.set, &self.x, &w.gradient, eta_x)?;
        }
        let bundle = LossBundle::evaluate(fns, &self.x, true);
        let record = StepRecord {
            action: self.x.clone(),
            theta: self.theta.clone(),
            losses: bundle.values.clone(),
            eta_x,
            eta_theta,
        };
        self.observe(Feedback::Full(bundle), eta_theta)?;
        Ok(record)
    }

    fn weights(&self) -> SimplexWeights {
        self.theta.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::StepSchedule;

    fn constant(eta: f64) -> Schedules {
        Schedules {
            x: StepSchedule::Constant { value: eta },
            theta: StepSchedule::Constant { value: 0.3 },
            smoothing: None,
        }
    }

    #[test]
    fn first_round_is_idle() {
        let set = FeasibleSet::interval(0.0, 1.0).unwrap();
        let mut algo = HedgeOgd::new(set, 2, constant(0.1), Some(vec![0.5])).unwrap();
        let fns = vec![
            ConvexFn::linear(vec![-0.2], 1.2),
            ConvexFn::linear(vec![1.0], 0.0),
        ];
        let rec = algo.step(1, &fns, &mut RandomSource::new(0)).unwrap();
        assert_eq!(rec.action, vec![0.5]);
        assert!((rec.losses[0] - 1.1).abs() < 1e-15 && (rec.losses[1] - 0.5).abs() < 1e-15);
        assert_eq!(rec.theta.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn bandit_feedback_rejected() {
        let set = FeasibleSet::interval(0.0, 1.0).unwrap();
        let mut algo = HedgeOgd::new(set, 1, constant(0.1), None).unwrap();
        assert!(algo.observe(Feedback::OnePoint(vec![0.0]), 0.1).is_err());
    }
}
