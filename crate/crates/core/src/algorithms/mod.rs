//! Online learners for the min-max problem and the runner that plays them.

mod avg_ogd;
mod bandit;
mod ftrl;
mod greedy;
mod hedge;
mod hedge_ogd;
mod multi;

pub use avg_ogd::AverageOgd;
pub use bandit::{one_point_estimate, two_point_estimate, BanditHedgeOgd, BanditMode};
pub use ftrl::Ftrl;
pub use greedy::Greedy;
pub use hedge::Hedge;
pub use hedge_ogd::HedgeOgd;
pub use multi::Multi;

use crate::error::{ensure_finite, Error, Result};
use crate::losses::{ConvexFn, LossBundle, LossOracle};
use crate::rng::RandomSource;
use crate::set::{Action, FeasibleSet};
use crate::sum::CompensatedSum;
use crate::weights::SimplexWeights;

/// What the learner observes after acting.
#[derive(Debug, Clone, PartialEq)]
pub enum Feedback {
    /// Values and gradients at the played point.
    Full(LossBundle),
    /// Values at the single played point.
    OnePoint(Vec<f64>),
    /// Values at the two query points `x + delta u` and `x - delta u`.
    TwoPoint { plus: Vec<f64>, minus: Vec<f64> },
}

impl Feedback {
    pub fn into_full(self) -> Result<LossBundle> {
        match self {
            Feedback::Full(b) if b.grads.is_some() => Ok(b),
            other => Err(Error::Feedback(format!(
                "gradient step needs full-information feedback, got {}",
                other.mode_name()
            ))),
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            Feedback::Full(_) => "full",
            Feedback::OnePoint(_) => "one-point",
            Feedback::TwoPoint { .. } => "two-point",
        }
    }
}

/// `Lambda(x, theta) = sum_k theta_k f^k(x)` and its gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedLoss {
    pub value: f64,
    pub gradient: Vec<f64>,
}

impl WeightedLoss {
    pub fn from_bundle(bundle: &LossBundle, theta: &[f64]) -> Result<Self> {
        let grads = bundle
            .grads
            .as_ref()
            .ok_or_else(|| Error::Feedback("weighted gradient needs gradients".into()))?;
        if theta.len() != bundle.values.len() {
            return Err(Error::DimensionMismatch {
                expected: bundle.values.len(),
                got: theta.len(),
            });
        }
        let value = theta.iter().zip(&bundle.values).map(|(w, v)| w * v).sum();
        let dim = grads.first().map_or(0, Vec::len);
        let mut gradient = vec![0.0; dim];
        for (w, g) in theta.iter().zip(grads) {
            for (a, b) in gradient.iter_mut().zip(g) {
                *a += w * b;
            }
        }
        ensure_finite(&gradient, "weighted gradient")?;
        Ok(Self { value, gradient })
    }
}

/// Projected step `Proj(x - eta g)`.
pub fn ogd_update(set: &FeasibleSet, x: &[f64], gradient: &[f64], eta: f64) -> Result<Action> {
    ensure_finite(gradient, "gradient")?;
    let y: Vec<f64> = x.iter().zip(gradient).map(|(a, g)| a - eta * g).collect();
    set.project(&y)
}

/// One round as seen by the bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// The action charged with this round's losses.
    pub action: Action,
    /// Mixing weights in force during the round.
    pub theta: SimplexWeights,
    /// `lambda_t` at the charged action.
    pub losses: Vec<f64>,
    pub eta_x: f64,
    pub eta_theta: f64,
}

pub trait OnlineAlgorithm {
    fn name(&self) -> &'static str;

    /// Plays round `t >= 1` against the round's functions.
    ///
    /// Implementations only read the functions through the feedback their
    /// information model allows; the greedy baseline alone sees them first.
    fn step(&mut self, t: usize, fns: &[ConvexFn], rng: &mut RandomSource) -> Result<StepRecord>;

    /// Weights for the next round (uniform for learners without weights).
    fn weights(&self) -> SimplexWeights;
}

/// Completed run: everything the regret decomposition needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub actions: Vec<Action>,
    /// `theta_1 .. theta_{T+1}`.
    pub thetas: Vec<SimplexWeights>,
    pub losses: Vec<Vec<f64>>,
    pub eta_x: Vec<f64>,
    pub eta_theta: Vec<f64>,
    /// `max_k S_k` after each round.
    pub max_cumulative: Vec<f64>,
    /// `S_k = sum_t f_t^k(x_t)`.
    pub cumulative: Vec<f64>,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.actions.len()
    }

    /// `C_A = max_k S_k`.
    pub fn cost(&self) -> f64 {
        self.cumulative
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Plays `algo` for `horizon` rounds of `oracle`.
pub fn run(
    algo: &mut dyn OnlineAlgorithm,
    oracle: &dyn LossOracle,
    set: &FeasibleSet,
    horizon: usize,
    rng: &mut RandomSource,
) -> Result<Trajectory> {
    let k = oracle.num_objectives();
    let mut sums = vec![CompensatedSum::new(); k];
    let mut traj = Trajectory {
        actions: Vec::with_capacity(horizon),
        thetas: Vec::with_capacity(horizon + 1),
        losses: Vec::with_capacity(horizon),
        eta_x: Vec::with_capacity(horizon),
        eta_theta: Vec::with_capacity(horizon),
        max_cumulative: Vec::with_capacity(horizon),
        cumulative: vec![0.0; k],
    };
    for t in 1..=horizon {
        let fns = oracle.round(t);
        let rec = algo.step(t, &fns, rng)?;
        if !set.contains(&rec.action, crate::set::MEMBERSHIP_TOL) {
            return Err(Error::InvalidParameter(format!(
                "{} played an infeasible action at round {t}",
                algo.name()
            )));
        }
        if rec.losses.len() != k {
            return Err(Error::LengthMismatch {
                what: "round losses",
                expected: k,
                got: rec.losses.len(),
            });
        }
        ensure_finite(&rec.losses, "round losses")?;
        for (s, v) in sums.iter_mut().zip(&rec.losses) {
            s.add(*v);
        }
        traj.max_cumulative.push(
            sums.iter()
                .map(CompensatedSum::value)
                .fold(f64::NEG_INFINITY, f64::max),
        );
        traj.actions.push(rec.action);
        traj.thetas.push(rec.theta);
        traj.losses.push(rec.losses);
        traj.eta_x.push(rec.eta_x);
        traj.eta_theta.push(rec.eta_theta);
    }
    traj.thetas.push(algo.weights());
    traj.cumulative = sums.iter().map(CompensatedSum::value).collect();
    Ok(traj)
}
