use crate::error::{Error, Result};
use crate::losses::{evaluate_all, ConvexFn};
use crate::rng::{sample_unit_sphere, RandomSource};
use crate::schedule::{Schedules, Smoothing};
use crate::set::{Action, FeasibleSet};
use crate::weights::SimplexWeights;

use super::{ogd_update, Feedback, OnlineAlgorithm, StepRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BanditMode {
    OnePoint,
    TwoPoint,
}

impl BanditMode {
    fn smoothing(self) -> Smoothing {
        match self {
            BanditMode::OnePoint => Smoothing::OnePoint,
            BanditMode::TwoPoint => Smoothing::TwoPoint,
        }
    }
}

/// `(d / delta) * value * u`.
pub fn one_point_estimate(value: f64, u: &[f64], delta: f64) -> Vec<f64> {
    let scale = u.len() as f64 / delta * value;
    u.iter().map(|v| scale * v).collect()
}

/// `(d / (2 delta)) * (plus - minus) * u`.
pub fn two_point_estimate(plus: f64, minus: f64, u: &[f64], delta: f64) -> Vec<f64> {
    let scale = u.len() as f64 / (2.0 * delta) * (plus - minus);
    u.iter().map(|v| scale * v).collect()
}

/// Gradient-free Hedge+OGD.
///
/// One-point mode plays `Proj(x + delta u)` and is charged there. Two-point
/// mode probes `x +- delta u` (unprojected) and is charged at `x`. In both
/// modes the Hedge gains are the values at the updated point `x_t`.
#[derive(Debug, Clone)]
pub struct BanditHedgeOgd {
    set: FeasibleSet,
    schedules: Schedules,
    mode: BanditMode,
    smoothing: Smoothing,
    x: Action,
    theta: SimplexWeights,
}

impl BanditHedgeOgd {
    pub fn new(
        set: FeasibleSet,
        objectives: usize,
        schedules: Schedules,
        mode: BanditMode,
        start: Option<Action>,
    ) -> Result<Self> {
        schedules.validate()?;
        let smoothing = match schedules.smoothing {
            Some(s) if s == mode.smoothing() => s,
            other => {
                return Err(Error::Feedback(format!(
                    "{mode:?} feedback needs {:?} smoothing, schedules carry {other:?}",
                    mode.smoothing()
                )))
            }
        };
        let x = match start {
            Some(s) => set.project(&s)?,
            None => set.center(),
        };
        Ok(Self {
            theta: SimplexWeights::uniform(objectives)?,
            set,
            schedules,
            mode,
            smoothing,
            x,
        })
    }

    fn estimate(&self, feedback: &Feedback, u: &[f64], delta: f64) -> Result<Vec<f64>> {
        match (self.mode, feedback) {
            (BanditMode::OnePoint, Feedback::OnePoint(values)) => {
                Ok(one_point_estimate(self.theta.dot(values), u, delta))
            }
            (BanditMode::TwoPoint, Feedback::TwoPoint { plus, minus }) => Ok(two_point_estimate(
                self.theta.dot(plus),
                self.theta.dot(minus),
                u,
                delta,
            )),
            (mode, fb) => Err(Error::Feedback(format!(
                "{mode:?} learner received {} feedback",
                fb.mode_name()
            ))),
        }
    }
}

impl OnlineAlgorithm for BanditHedgeOgd {
    fn name(&self) -> &'static str {
        match self.mode {
            BanditMode::OnePoint => "hedge-ogd-bandit1",
            BanditMode::TwoPoint => "hedge-ogd-bandit2",
        }
    }

    fn step(&mut self, t: usize, fns: &[ConvexFn], rng: &mut RandomSource) -> Result<StepRecord> {
        let eta_x = self.schedules.x.at(t);
        let eta_theta = self.schedules.theta.at(t);
        let delta = self.smoothing.at(t);
        let u = sample_unit_sphere(rng, self.set.dim())?;
        let shifted = |sign: f64| -> Vec<f64> {
            self.x
                .iter()
                .zip(&u)
                .map(|(a, b)| a + sign * delta * b)
                .collect()
        };
        let (feedback, charged, charged_losses) = match self.mode {
            BanditMode::OnePoint => {
                let played = self.set.project(&shifted(1.0))?;
                let values = evaluate_all(fns, &played);
                (Feedback::OnePoint(values.clone()), played, values)
            }
            BanditMode::TwoPoint => {
                let feedback = Feedback::TwoPoint {
                    plus: evaluate_all(fns, &shifted(1.0)),
                    minus: evaluate_all(fns, &shifted(-1.0)),
                };
                let losses = evaluate_all(fns, &self.x);
                (feedback, self.x.clone(), losses)
            }
        };
        let grad = self.estimate(&feedback, &u, delta)?;
        let record = StepRecord {
            action: charged,
            theta: self.theta.clone(),
            losses: charged_losses,
            eta_x,
            eta_theta,
        };
        self.x = ogd_update(&self.set, &self.x, &grad, eta_x)?;
        let gains = evaluate_all(fns, &self.x);
        self.theta = self.theta.hedge_update(&gains, eta_theta)?;
        Ok(record)
    }

    fn weights(&self) -> SimplexWeights {
        self.theta.clone()
    }
}
