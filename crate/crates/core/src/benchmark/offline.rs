use crate::error::{Error, Result};
use crate::losses::{ConvexFn, LossOracle, MeanLossEstimate};
use crate::rng::RandomSource;
use crate::set::{Action, FeasibleSet};
use crate::sum::accurate_sum;
use crate::weights::{argmax_lowest, SimplexWeights};

use super::solver::{minimize_max, MinMaxSolution, SolverOptions};

/// Solution of `min_x max_theta theta^T F(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddlePoint {
    pub x: Action,
    /// Indicator of the lowest-index maximal coordinate of `F(x)`.
    pub theta: SimplexWeights,
    pub value: f64,
    /// `F_k(x)` for every objective.
    pub objective_values: Vec<f64>,
    pub iterations: usize,
    pub gap: f64,
    /// Set when the solver hit its iteration cap.
    pub approximate: bool,
}

impl SaddlePoint {
    fn from_solution(sol: MinMaxSolution) -> Result<Self> {
        let (theta, value) = max_over_simplex(&sol.values)?;
        Ok(Self {
            x: sol.x,
            theta,
            value,
            objective_values: sol.values,
            iterations: sol.iterations,
            gap: sol.gap,
            approximate: !sol.converged,
        })
    }
}

/// `max_{theta in simplex} <theta, s>`: the lowest-index maximal coordinate.
pub fn max_over_simplex(cumulative: &[f64]) -> Result<(SimplexWeights, f64)> {
    if cumulative.is_empty() {
        return Err(Error::Empty("cumulative loss vector"));
    }
    let k = argmax_lowest(cumulative);
    Ok((
        SimplexWeights::indicator(cumulative.len(), k)?,
        cumulative[k],
    ))
}

/// `sum_t f_t^k` for every `k`, over rounds `1..=horizon`.
pub fn cumulative_losses(oracle: &dyn LossOracle, horizon: usize) -> Vec<ConvexFn> {
    let mut acc = vec![ConvexFn::zero(oracle.dim()); oracle.num_objectives()];
    for t in 1..=horizon {
        for (a, f) in acc.iter_mut().zip(oracle.round(t)) {
            a.add(&f);
        }
    }
    acc
}

/// Minimizes `max_k cumulative[k](x)` and evaluates the extra candidate points,
/// keeping whichever is best.
pub fn solve_cumulative(
    cumulative: &[ConvexFn],
    set: &FeasibleSet,
    candidates: &[&[f64]],
    opts: &SolverOptions,
) -> Result<SaddlePoint> {
    let mut sol = minimize_max(cumulative, set, None, opts)?;
    for c in candidates {
        let x = set.project(c)?;
        let values: Vec<f64> = cumulative.iter().map(|f| f.value(&x)).collect();
        let v = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if v < sol.value {
            sol.x = x;
            sol.value = v;
            sol.values = values;
        }
    }
    SaddlePoint::from_solution(sol)
}

/// `C_OPT = min_x max_k sum_t f_t^k(x)` over the given rounds.
pub fn solve_offline_minmax(
    rounds: &[Vec<ConvexFn>],
    set: &FeasibleSet,
    opts: &SolverOptions,
) -> Result<SaddlePoint> {
    let first = rounds.first().ok_or(Error::Empty("rounds"))?;
    let mut acc = vec![ConvexFn::zero(set.dim()); first.len()];
    for r in rounds {
        if r.len() != acc.len() {
            return Err(Error::LengthMismatch {
                what: "round bundle",
                expected: acc.len(),
                got: r.len(),
            });
        }
        for (a, f) in acc.iter_mut().zip(r) {
            a.add(f);
        }
    }
    solve_cumulative(&acc, set, &[], opts)
}

/// Single-round min-max value `min_x max_k f_t^k(x)`.
pub fn single_round_value(
    fns: &[ConvexFn],
    set: &FeasibleSet,
    opts: &SolverOptions,
) -> Result<f64> {
    Ok(minimize_max(fns, set, None, opts)?.value)
}

/// `W_L^T = sum_t min_x max_k f_t^k(x)`.
pub fn per_slot_benchmark(
    oracle: &dyn LossOracle,
    horizon: usize,
    set: &FeasibleSet,
    opts: &SolverOptions,
) -> Result<f64> {
    let values = (1..=horizon)
        .map(|t| single_round_value(&oracle.round(t), set, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(accurate_sum(values))
}

/// Per-round expected benchmark `min_x max_k mu_k(x)` with the Monte-Carlo
/// standard error of the mean at the minimizer (zero for closed forms).
pub fn expected_benchmark(
    oracle: &dyn LossOracle,
    set: &FeasibleSet,
    samples: usize,
    rng: &mut RandomSource,
    opts: &SolverOptions,
) -> Result<(SaddlePoint, f64)> {
    if !oracle.is_iid() {
        return Err(Error::InvalidParameter(
            "the expected benchmark needs i.i.d. rounds".into(),
        ));
    }
    let mean = MeanLossEstimate::estimate(oracle, samples, rng);
    let saddle = solve_cumulative(mean.functions(), set, &[], opts)?;
    let k = saddle.theta.argmax();
    let se = mean.standard_error(&saddle.x)[k];
    Ok((saddle, se))
}
