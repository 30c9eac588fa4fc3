//! Minimization of `phi(x) = max_k F_k(x)` over a feasible set.
//!
//! One-dimensional sets use golden-section search. Higher dimensions run
//! projected subgradient descent on the lowest-index active function, then
//! polish the best iterate with projected gradient steps on a log-sum-exp
//! smoothing of the max whose temperature is driven toward zero.

use crate::error::{Error, Result};
use crate::losses::{evaluate_all, ConvexFn};
use crate::set::{dot, norm2, Action, FeasibleSet};
use crate::weights::{argmax_lowest, log_sum_exp};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative best-value improvement below which the subgradient phase stops.
    pub tolerance: f64,
    /// Iterations over which the improvement is measured.
    pub window: usize,
    pub max_iterations: usize,
    /// Final bracket width of the golden-section search.
    pub golden_tolerance: f64,
    /// Iterations per temperature of the smoothed polishing phase; 0 disables it.
    pub polish_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            window: 200,
            max_iterations: 50_000,
            golden_tolerance: 1e-10,
            polish_iterations: 400,
        }
    }
}

impl SolverOptions {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxSolution {
    pub x: Action,
    pub value: f64,
    /// `F_k(x)` for every `k`.
    pub values: Vec<f64>,
    pub iterations: usize,
    /// Final bracket width (1-D), otherwise the smaller of the last-window
    /// improvement and the certified suboptimality bound.
    pub gap: f64,
    pub converged: bool,
}

impl MinMaxSolution {
    /// Turns a capped, unconverged run into an error carrying the best iterate.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                best: self.x,
                value: self.value,
                iterations: self.iterations,
                gap: self.gap,
            })
        }
    }
}

fn max_value(fns: &[ConvexFn], x: &[f64]) -> (f64, Vec<f64>) {
    let values = evaluate_all(fns, x);
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (m, values)
}

/// Minimizes `max_k fns[k](x)` over `set`, starting from `start` when given.
pub fn minimize_max(
    fns: &[ConvexFn],
    set: &FeasibleSet,
    start: Option<&[f64]>,
    opts: &SolverOptions,
) -> Result<MinMaxSolution> {
    if fns.is_empty() {
        return Err(Error::Empty("objective functions"));
    }
    for f in fns {
        if f.dim() != set.dim() {
            return Err(Error::DimensionMismatch {
                expected: set.dim(),
                got: f.dim(),
            });
        }
    }
    if set.dim() == 1 {
        golden_section(fns, set, opts)
    } else {
        let x0 = match start {
            Some(s) => set.project(s)?,
            None => set.center(),
        };
        let mut sol = subgradient(fns, set, x0, opts)?;
        if opts.polish_iterations > 0 {
            polish(fns, set, &mut sol, opts)?;
        }
        let certified = duality_gap(fns, set, &sol.x, sol.value);
        sol.gap = sol.gap.min(certified);
        if certified <= opts.tolerance * sol.value.abs().max(1.0) {
            sol.converged = true;
        }
        Ok(sol)
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

fn golden_section(
    fns: &[ConvexFn],
    set: &FeasibleSet,
    opts: &SolverOptions,
) -> Result<MinMaxSolution> {
    let (lo, hi) = set.bounding_box();
    let (mut a, mut b) = (lo[0], hi[0]);
    let phi = |x: f64| max_value(fns, &[x]).0;
    let mut iterations = 0;
    if b > a {
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let (mut fc, mut fd) = (phi(c), phi(d));
        while b - a > opts.golden_tolerance && iterations < opts.max_iterations {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = phi(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = phi(d);
            }
            iterations += 1;
        }
    }
    // Kinks of piecewise-linear objectives often sit on the boundary, where the
    // bracket midpoint is only 1e-10 accurate; the endpoints are exact.
    let mid = 0.5 * (a + b);
    let mut best = (mid, phi(mid));
    for x in [lo[0], hi[0]] {
        let v = phi(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    let (value, values) = max_value(fns, &[best.0]);
    Ok(MinMaxSolution {
        x: vec![best.0],
        value,
        values,
        iterations,
        gap: b - a,
        converged: b - a <= opts.golden_tolerance,
    })
}

struct Probe {
    value: f64,
    values: Vec<f64>,
    grad: Vec<f64>,
}

fn probe(fns: &[ConvexFn], x: &[f64]) -> Probe {
    let values = evaluate_all(fns, x);
    let k = argmax_lowest(&values);
    Probe {
        value: values[k],
        grad: fns[k].gradient(x),
        values,
    }
}

fn subgradient(
    fns: &[ConvexFn],
    set: &FeasibleSet,
    mut x: Action,
    opts: &SolverOptions,
) -> Result<MinMaxSolution> {
    let diameter = set.diameter().max(f64::MIN_POSITIVE);
    let mut p = probe(fns, &x);
    let mut best = MinMaxSolution {
        x: x.clone(),
        value: p.value,
        values: p.values.clone(),
        iterations: 0,
        gap: f64::INFINITY,
        converged: false,
    };
    let mut grad_bound = norm2(&p.grad);
    let mut history = vec![best.value];
    for s in 1..=opts.max_iterations {
        let gnorm = norm2(&p.grad);
        if gnorm == 0.0 {
            best.converged = true;
            best.gap = 0.0;
            best.iterations = s - 1;
            return Ok(best);
        }
        grad_bound = grad_bound.max(gnorm);
        let step = diameter / grad_bound / (s as f64).sqrt();
        let y: Vec<f64> = x
            .iter()
            .zip(&p.grad)
            .map(|(xi, gi)| xi - step * gi)
            .collect();
        x = set.project(&y)?;
        p = probe(fns, &x);
        if p.value < best.value {
            best.x.clone_from(&x);
            best.value = p.value;
            best.values.clone_from(&p.values);
        }
        history.push(best.value);
        best.iterations = s;
        if s >= opts.window {
            let improvement = history[s - opts.window] - best.value;
            best.gap = improvement;
            if improvement < opts.tolerance * best.value.abs().max(1.0) {
                best.converged = true;
                return Ok(best);
            }
        }
    }
    Ok(best)
}

/// Upper bound on `max_k F_k(x) - min_y max_k F_k(y)`.
///
/// For any weights `w`, linearizing `sum_k w_k F_k` at `x` and minimizing the
/// linear model over the set gives a lower bound on the optimum. Weights are
/// tried at a ladder of softmax temperatures and the tightest bound is kept.
pub fn duality_gap(fns: &[ConvexFn], set: &FeasibleSet, x: &[f64], value: f64) -> f64 {
    let pairs: Vec<(f64, Vec<f64>)> = fns.iter().map(|f| f.value_and_gradient(x)).collect();
    let spread = pairs
        .iter()
        .map(|(_, g)| norm2(g))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
        * set.diameter().max(f64::MIN_POSITIVE);
    let mut best = f64::INFINITY;
    let mut mu = spread;
    while mu > 1e-16 * spread {
        let scaled: Vec<f64> = pairs.iter().map(|(v, _)| v / mu).collect();
        let lse = log_sum_exp(&scaled);
        let mut weighted = 0.0;
        let mut grad = vec![0.0; x.len()];
        for ((v, g), s) in pairs.iter().zip(&scaled) {
            let w = (s - lse).exp();
            weighted += w * v;
            for (a, b) in grad.iter_mut().zip(g) {
                *a += w * b;
            }
        }
        let lower = weighted + set.min_linear(&grad) - dot(&grad, x);
        best = best.min(value - lower);
        mu *= 0.1;
    }
    best.max(0.0)
}

/// `mu * log sum_k exp(F_k / mu)` and its gradient.
fn smoothed(fns: &[ConvexFn], x: &[f64], mu: f64) -> (f64, Vec<f64>, Vec<f64>) {
    let pairs: Vec<(f64, Vec<f64>)> = fns.iter().map(|f| f.value_and_gradient(x)).collect();
    let values: Vec<f64> = pairs.iter().map(|(v, _)| *v).collect();
    let scaled: Vec<f64> = values.iter().map(|v| v / mu).collect();
    let lse = log_sum_exp(&scaled);
    let mut grad = vec![0.0; x.len()];
    for ((_, g), s) in pairs.iter().zip(&scaled) {
        let w = (s - lse).exp();
        for (a, b) in grad.iter_mut().zip(g) {
            *a += w * b;
        }
    }
    (mu * lse, grad, values)
}

fn polish(
    fns: &[ConvexFn],
    set: &FeasibleSet,
    best: &mut MinMaxSolution,
    opts: &SolverOptions,
) -> Result<()> {
    let diameter = set.diameter().max(f64::MIN_POSITIVE);
    let grad_scale = fns
        .iter()
        .map(|f| norm2(&f.gradient(&best.x)))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let spread = grad_scale * diameter;
    let mut x = best.x.clone();
    let mut lipschitz = grad_scale / diameter;
    let mut mu = 1e-2 * spread;
    let floor = 1e-12 * spread.max(best.value.abs());
    let consider = |x: &[f64], values: &[f64], best: &mut MinMaxSolution| {
        let v = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if v < best.value {
            best.x = x.to_vec();
            best.value = v;
            best.values = values.to_vec();
        }
    };
    while mu > floor {
        let (mut fx, mut gx, values) = smoothed(fns, &x, mu);
        consider(&x, &values, best);
        for _ in 0..opts.polish_iterations {
            let mut accepted = None;
            for _ in 0..60 {
                let step = 1.0 / lipschitz;
                let y: Vec<f64> = x.iter().zip(&gx).map(|(a, g)| a - step * g).collect();
                let xn = set.project(&y)?;
                let diff: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
                let (fy, gy, vy) = smoothed(fns, &xn, mu);
                let model = fx
                    + gx.iter().zip(&diff).map(|(g, d)| g * d).sum::<f64>()
                    + 0.5 * lipschitz * diff.iter().map(|d| d * d).sum::<f64>();
                if fy <= model + 1e-15 * fx.abs() {
                    accepted = Some((xn, fy, gy, vy, norm2(&diff)));
                    break;
                }
                lipschitz *= 2.0;
            }
            let Some((xn, fy, gy, vy, moved)) = accepted else {
                break;
            };
            consider(&xn, &vy, best);
            let stalled = fx - fy <= 1e-16 * fx.abs().max(1.0);
            x = xn;
            fx = fy;
            gx = gy;
            lipschitz /= 1.5;
            if moved <= 1e-14 * diameter || stalled {
                break;
            }
        }
        mu *= 0.1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(c: &[f64], c0: f64) -> ConvexFn {
        ConvexFn::linear(c.to_vec(), c0)
    }

    #[test]
    fn golden_section_hits_exact_endpoints() {
        let set = FeasibleSet::interval(0.0, 1.0).unwrap();
        let opts = SolverOptions::default();
        let odd = minimize_max(&[lin(&[-0.2], 1.2), lin(&[1.0], 0.0)], &set, None, &opts).unwrap();
        assert_eq!((odd.x[0], odd.value), (1.0, 1.0));
        let even = minimize_max(&[lin(&[1.0], 0.0), lin(&[0.2], 0.8)], &set, None, &opts).unwrap();
        assert_eq!((even.x[0], even.value), (0.0, 0.8));
    }

    #[test]
    fn crossing_parabolas() {
        let set = FeasibleSet::interval(0.0, 2.0).unwrap();
        let fns = [
            ConvexFn::squared_distance(&[0.0], 1.0),
            ConvexFn::squared_distance(&[2.0], 1.0),
        ];
        let sol = minimize_max(&fns, &set, None, &SolverOptions::default()).unwrap();
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.value - 1.0).abs() < 1e-9);
        // Grid oracle.
        let grid = (0..=200_000)
            .map(|i| {
                let x = i as f64 * 1e-5;
                (x * x).max((x - 2.0) * (x - 2.0))
            })
            .fold(f64::INFINITY, f64::min);
        assert!((sol.value - grid).abs() < 1e-9);
    }

    #[test]
    fn linear_on_ball_matches_closed_form() {
        // min over the unit ball of <a, x> is -||a||.
        let set = FeasibleSet::origin_ball(4, 1.0).unwrap();
        let a = [3.0, -1.0, 0.5, 2.0];
        let sol = minimize_max(&[lin(&a, 1.0)], &set, None, &SolverOptions::default()).unwrap();
        assert!(
            (sol.value - (1.0 - norm2(&a))).abs() < 1e-9,
            "{}",
            sol.value
        );
    }

    #[test]
    fn two_linear_pieces_on_ball() {
        // min_x max(<a,x>, <b,x>) over the unit ball equals
        // -min_{theta} ||theta a + (1 - theta) b||.
        let set = FeasibleSet::origin_ball(3, 2.0).unwrap();
        let a = [1.0, 2.0, 0.0];
        let b = [-1.0, 1.0, 1.0];
        let sol = minimize_max(
            &[lin(&a, 0.0), lin(&b, 0.0)],
            &set,
            None,
            &SolverOptions::default(),
        )
        .unwrap();
        let mut dual = f64::INFINITY;
        for i in 0..=1_000_000 {
            let th = i as f64 * 1e-6;
            let v: Vec<f64> = a
                .iter()
                .zip(&b)
                .map(|(p, q)| th * p + (1.0 - th) * q)
                .collect();
            dual = dual.min(norm2(&v));
        }
        assert!(
            (sol.value + 2.0 * dual).abs() < 1e-7,
            "{} vs {}",
            sol.value,
            -2.0 * dual
        );
    }

    #[test]
    fn experts_closed_form() {
        // min over the simplex of max_k x_k l_k is 1 / sum_k (1 / l_k).
        let l = [0.3, 0.5, 0.7, 0.45];
        let fns: Vec<ConvexFn> = (0..4)
            .map(|k| {
                let mut c = vec![0.0; 4];
                c[k] = l[k];
                lin(&c, 0.0)
            })
            .collect();
        let set = FeasibleSet::simplex(4).unwrap();
        let sol = minimize_max(&fns, &set, None, &SolverOptions::default()).unwrap();
        let exact = 1.0 / l.iter().map(|v| 1.0 / v).sum::<f64>();
        assert!((sol.value - exact).abs() < 1e-9, "{} vs {exact}", sol.value);
    }

    #[test]
    fn unconverged_runs_report_best_iterate() {
        let set = FeasibleSet::origin_ball(2, 1.0).unwrap();
        let opts = SolverOptions {
            max_iterations: 3,
            polish_iterations: 0,
            ..SolverOptions::default()
        };
        let fns = [lin(&[1.0, 0.0], 0.0), lin(&[-1.0, 0.5], 0.0)];
        let sol = minimize_max(&fns, &set, None, &opts).unwrap();
        assert!(!sol.converged);
        match sol.require_converged() {
            Err(Error::NotConverged { iterations, .. }) => assert_eq!(iterations, 3),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_and_mismatched_input() {
        let set = FeasibleSet::origin_ball(2, 1.0).unwrap();
        let opts = SolverOptions::default();
        assert!(minimize_max(&[], &set, None, &opts).is_err());
        assert!(minimize_max(&[lin(&[1.0], 0.0)], &set, None, &opts).is_err());
    }
}
