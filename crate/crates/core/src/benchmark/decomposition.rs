use crate::algorithms::Trajectory;
use crate::error::{Error, Result};
use crate::losses::{ConvexFn, LossOracle};
use crate::set::{Action, FeasibleSet};
use crate::sum::accurate_sum;

use super::offline::{single_round_value, solve_cumulative, SaddlePoint};
use super::solver::{minimize_max, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DecompositionOptions {
    pub solver: SolverOptions,
    /// Also compute the per-slot benchmark (one solve per round).
    pub per_slot: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: usize,
    pub max_cum_loss: f64,
    pub theta: Vec<f64>,
    pub eta_x: f64,
    pub eta_theta: f64,
}

/// Regret of a run split into a Hedge term, an OGD term and a benchmark
/// mismatch term.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    /// `C_A = max_k S_k`.
    pub c_alg: f64,
    pub c_opt: f64,
    pub regret: f64,
    /// `max_k S_k - sum_t <theta_t, lambda_t(x_t)>`.
    pub r1: f64,
    /// `sum_t <theta_t, lambda_t(x_t)> - min_x sum_t <theta_t, lambda_t(x)>`.
    pub r2: f64,
    /// `min_x sum_t <theta_t, lambda_t(x)> - C_OPT`.
    pub r3: f64,
    /// `sum_t <theta_t, lambda_t(x_t)>`.
    pub weighted_cost: f64,
    /// `min_x sum_t <theta_t, lambda_t(x)>`, shared by `r2` and `r3`.
    pub weighted_min: f64,
    pub weighted_minimizer: Action,
    pub saddle: SaddlePoint,
    pub per_slot_benchmark: Option<f64>,
    pub trace: Vec<TraceRow>,
}

impl RegretReport {
    /// `|r1 + r2 + r3 - (c_alg - c_opt)|` relative to the larger side.
    pub fn identity_error(&self) -> f64 {
        let lhs = self.r1 + self.r2 + self.r3;
        let rhs = self.c_alg - self.c_opt;
        let scale = lhs.abs().max(rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / scale
        }
    }
}

fn check_lengths(traj: &Trajectory, horizon: usize) -> Result<()> {
    let t = traj.horizon();
    for (what, got, expected) in [
        ("rounds", horizon, t),
        ("theta sequence", traj.thetas.len(), t + 1),
        ("loss sequence", traj.losses.len(), t),
    ] {
        if got != expected {
            return Err(Error::LengthMismatch {
                what,
                expected,
                got,
            });
        }
    }
    if t == 0 {
        return Err(Error::Empty("trajectory"));
    }
    Ok(())
}

/// Decomposes the regret of `traj` against rounds replayed from `oracle`.
pub fn decompose_regret(
    traj: &Trajectory,
    oracle: &dyn LossOracle,
    set: &FeasibleSet,
    opts: &DecompositionOptions,
) -> Result<RegretReport> {
    decompose_with(traj, traj.horizon(), |t| oracle.round(t), set, opts)
}

/// Same as [`decompose_regret`] with explicit rounds `rounds[t-1]`.
pub fn decompose_rounds(
    traj: &Trajectory,
    rounds: &[Vec<ConvexFn>],
    set: &FeasibleSet,
    opts: &DecompositionOptions,
) -> Result<RegretReport> {
    decompose_with(traj, rounds.len(), |t| rounds[t - 1].clone(), set, opts)
}

fn decompose_with(
    traj: &Trajectory,
    horizon: usize,
    round: impl Fn(usize) -> Vec<ConvexFn>,
    set: &FeasibleSet,
    opts: &DecompositionOptions,
) -> Result<RegretReport> {
    check_lengths(traj, horizon)?;
    let k = traj.cumulative.len();
    let mut cumulative = vec![ConvexFn::zero(set.dim()); k];
    let mut weighted = ConvexFn::zero(set.dim());
    let mut per_slot = Vec::new();
    for t in 1..=horizon {
        let fns = round(t);
        if fns.len() != k {
            return Err(Error::LengthMismatch {
                what: "round bundle",
                expected: k,
                got: fns.len(),
            });
        }
        let theta = traj.thetas[t - 1].probs();
        for ((c, f), w) in cumulative.iter_mut().zip(&fns).zip(theta) {
            c.add(f);
            weighted.add_scaled(f, *w);
        }
        if opts.per_slot {
            per_slot.push(single_round_value(&fns, set, &opts.solver)?);
        }
    }

    // Each minimizer is offered to the other problem as a candidate, so both
    // values are at least as good as the best point either solve found.
    let weighted_fns = [weighted];
    let wsol = minimize_max(&weighted_fns, set, None, &opts.solver)?;
    let saddle = solve_cumulative(&cumulative, set, &[&wsol.x], &opts.solver)?;
    let at_saddle = weighted_fns[0].value(&saddle.x);
    let (weighted_min, weighted_minimizer) = if at_saddle < wsol.value {
        (at_saddle, saddle.x.clone())
    } else {
        (wsol.value, wsol.x)
    };

    let c_alg = traj.cost();
    let weighted_cost = accurate_sum(
        traj.losses
            .iter()
            .zip(&traj.thetas)
            .map(|(l, th)| th.dot(l)),
    );
    let c_opt = saddle.value;
    let trace = (0..horizon)
        .map(|i| TraceRow {
            t: i + 1,
            max_cum_loss: traj.max_cumulative[i],
            theta: traj.thetas[i].probs().to_vec(),
            eta_x: traj.eta_x[i],
            eta_theta: traj.eta_theta[i],
        })
        .collect();
    Ok(RegretReport {
        c_alg,
        c_opt,
        regret: c_alg - c_opt,
        r1: c_alg - weighted_cost,
        r2: weighted_cost - weighted_min,
        r3: weighted_min - c_opt,
        weighted_cost,
        weighted_min,
        weighted_minimizer,
        saddle,
        per_slot_benchmark: opts.per_slot.then(|| accurate_sum(per_slot)),
        trace,
    })
}

/// `ln K / eta_T + sum_t eta_t B^2 / 2`.
pub fn hedge_regret_bound(objectives: usize, eta_theta: &[f64], value_bound: f64) -> f64 {
    let last = *eta_theta.last().unwrap_or(&f64::INFINITY);
    (objectives as f64).ln() / last
        + accurate_sum(eta_theta.iter().copied()) * value_bound * value_bound / 2.0
}

/// `D^2 / (2 eta_T) + sum_t eta_t G^2 / 2`.
pub fn ogd_regret_bound(diameter: f64, lipschitz: f64, eta_x: &[f64]) -> f64 {
    let last = *eta_x.last().unwrap_or(&f64::INFINITY);
    diameter * diameter / (2.0 * last)
        + accurate_sum(eta_x.iter().copied()) * lipschitz * lipschitz / 2.0
}

/// Per-run stability of the weight sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityDiagnostics {
    /// `max_t (||theta_{t+1} - theta_t||_1 - eta_t B)`; nonpositive when every step obeys the bound.
    pub max_step_excess: f64,
    /// `max_t (||theta_{t+1} - theta_t||_1 - sqrt(2 KL(theta_t || theta_{t+1})))`.
    pub max_pinsker_excess: f64,
    /// `sum_t ||theta_{t+1} - theta_t||_1`.
    pub total_variation: f64,
    /// `sum_t ||theta_t - mean theta||_1`.
    pub deviation_from_mean: f64,
    pub sum_eta_theta: f64,
    pub horizon: usize,
}

impl StabilityDiagnostics {
    pub fn compute(traj: &Trajectory, value_bound: f64) -> Self {
        let t = traj.horizon();
        let k = traj.thetas.first().map_or(0, |th| th.len());
        let mut max_step_excess = f64::NEG_INFINITY;
        let mut max_pinsker_excess = f64::NEG_INFINITY;
        let mut steps = Vec::with_capacity(t);
        for i in 0..t {
            let (a, b) = (&traj.thetas[i], &traj.thetas[i + 1]);
            let tv = a.l1_distance(b);
            steps.push(tv);
            max_step_excess = max_step_excess.max(tv - traj.eta_theta[i] * value_bound);
            max_pinsker_excess = max_pinsker_excess.max(tv - (2.0 * a.kl_divergence(b)).sqrt());
        }
        let mean: Vec<f64> = (0..k)
            .map(|j| accurate_sum(traj.thetas[..t].iter().map(|th| th.probs()[j])) / t as f64)
            .collect();
        let deviation_from_mean = accurate_sum(traj.thetas[..t].iter().map(|th| {
            th.probs()
                .iter()
                .zip(&mean)
                .map(|(p, m)| (p - m).abs())
                .sum::<f64>()
        }));
        Self {
            max_step_excess,
            max_pinsker_excess,
            total_variation: accurate_sum(steps),
            deviation_from_mean,
            sum_eta_theta: accurate_sum(traj.eta_theta.iter().copied()),
            horizon: t,
        }
    }

    /// `2 B^2 T sum_t eta_t`.
    pub fn step_size_bound(&self, value_bound: f64) -> f64 {
        2.0 * value_bound * value_bound * self.horizon as f64 * self.sum_eta_theta
    }

    /// `B sum_t ||theta_t - mean theta||_1`.
    pub fn deviation_bound(&self, value_bound: f64) -> f64 {
        value_bound * self.deviation_from_mean
    }

    /// `2 B T sum_t ||theta_{t+1} - theta_t||_1`.
    pub fn variation_bound(&self, value_bound: f64) -> f64 {
        2.0 * value_bound * self.horizon as f64 * self.total_variation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{run, Greedy, HedgeOgd};
    use crate::losses::AdversarialPair;
    use crate::rng::RandomSource;
    use crate::schedule::{ProblemBounds, Schedules};
    use crate::weights::SimplexWeights;

    fn fixed_trajectory(x: f64, theta: SimplexWeights, rounds: &[Vec<ConvexFn>]) -> Trajectory {
        let k = theta.len();
        let losses: Vec<Vec<f64>> = rounds
            .iter()
            .map(|r| r.iter().map(|f| f.value(&[x])).collect())
            .collect();
        let cumulative: Vec<f64> = (0..k)
            .map(|j| accurate_sum(losses.iter().map(|l| l[j])))
            .collect();
        let mut running = vec![0.0; k];
        let max_cumulative = losses
            .iter()
            .map(|l| {
                running.iter_mut().zip(l).for_each(|(r, v)| *r += v);
                running.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        Trajectory {
            actions: vec![vec![x]; rounds.len()],
            thetas: vec![theta; rounds.len() + 1],
            losses,
            eta_x: vec![0.0; rounds.len()],
            eta_theta: vec![0.0; rounds.len()],
            max_cumulative,
            cumulative,
        }
    }

    #[test]
    fn saddle_play_sums_to_zero() {
        let set = FeasibleSet::interval(0.0, 1.0).unwrap();
        let o = AdversarialPair::new(&set).unwrap();
        let rounds: Vec<_> = (1..=20).map(|t| o.round(t)).collect();
        let theta = SimplexWeights::indicator(2, 0).unwrap();
        let traj = fixed_trajectory(0.0, theta, &rounds);
        let rep = decompose_rounds(&traj, &rounds, &set, &DecompositionOptions::default()).unwrap();
        assert!(rep.r1.abs() < 1e-12);
        assert!(rep.r2 >= -1e-12);
        assert!(rep.r3 <= 1e-12);
        assert!((rep.r1 + rep.r2 + rep.r3).abs() < 1e-9);
        assert!(rep.regret.abs() < 1e-9);
    }

    #[test]
    fn greedy_on_the_pair() {
        let set = FeasibleSet::interval(0.0, 1.0).unwrap();
        let o = AdversarialPair::new(&set).unwrap();
        let mut g = Greedy::new(set.clone(), 2).unwrap();
        let traj = run(&mut g, &o, &set, 200, &mut RandomSource::new(0)).unwrap();
        let opts = DecompositionOptions {
            per_slot: true,
            ..Default::default()
        };
        let rep = decompose_regret(&traj, &o, &set, &opts).unwrap();
        assert!((rep.c_alg - 180.0).abs() < 1e-9);
        assert!((rep.c_opt - 120.0).abs() < 1e-9);
        assert!((rep.per_slot_benchmark.unwrap() - 180.0).abs() < 1e-9);
        assert!(rep.identity_error() <= 1e-9);
    }

    #[test]
    fn single_objective_has_no_hedge_term() {
        let set = FeasibleSet::interval(0.0, 1.0).unwrap();
        let rounds: Vec<Vec<ConvexFn>> = (0..50)
            .map(|i| vec![ConvexFn::linear(vec![(i % 3) as f64 - 1.0], 0.5)])
            .collect();
        let traj = fixed_trajectory(0.3, SimplexWeights::uniform(1).unwrap(), &rounds);
        let rep = decompose_rounds(&traj, &rounds, &set, &DecompositionOptions::default()).unwrap();
        assert_eq!(rep.r1, 0.0);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let set = FeasibleSet::interval(0.0, 1.0).unwrap();
        let o = AdversarialPair::new(&set).unwrap();
        let rounds: Vec<_> = (1..=4).map(|t| o.round(t)).collect();
        let traj = fixed_trajectory(0.5, SimplexWeights::uniform(2).unwrap(), &rounds);
        let err = decompose_rounds(&traj, &rounds[..3], &set, &DecompositionOptions::default());
        assert!(matches!(err, Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn hedge_ogd_run_satisfies_its_bounds() {
        let set = FeasibleSet::interval(0.0, 1.0).unwrap();
        let o = AdversarialPair::new(&set).unwrap();
        let b = ProblemBounds::new(1.2, 1.0, 1.0).unwrap();
        let mut algo =
            HedgeOgd::new(set.clone(), 2, Schedules::full_information(&b, 2), None).unwrap();
        let traj = run(&mut algo, &o, &set, 500, &mut RandomSource::new(0)).unwrap();
        let rep = decompose_regret(&traj, &o, &set, &DecompositionOptions::default()).unwrap();
        assert!(rep.identity_error() <= 1e-9);
        assert!(rep.r1 >= 0.0);
        assert!(rep.r1 <= hedge_regret_bound(2, &traj.eta_theta, 1.2));
        let st = StabilityDiagnostics::compute(&traj, 1.2);
        assert!(st.max_step_excess <= 1e-12);
        assert!(rep.r3 <= st.deviation_bound(1.2) + 1e-9);
        assert!(st.deviation_bound(1.2) <= st.variation_bound(1.2) + 1e-9);
        assert!(rep.r3 <= st.step_size_bound(1.2));
    }
}
