use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::function::{sigmoid, softplus, ConvexFn, LogisticBatch};
use super::{GeneratorDescriptor, LossOracle};
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::set::{norm2, FeasibleSet};

const TAG_LINEAR: u64 = 1;
const TAG_QUADRATIC: u64 = 2;
const TAG_EXPERTS: u64 = 3;
const TAG_FAIR_GROUP: u64 = 4;
const TAG_FAIR_ROUND: u64 = 5;

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidParameter(format!(
            "{name} must be at least 1"
        )))
    } else {
        Ok(())
    }
}

fn check_dim(set: &FeasibleSet, dim: usize) -> Result<()> {
    if set.dim() != dim {
        Err(Error::DimensionMismatch {
            expected: dim,
            got: set.dim(),
        })
    } else {
        Ok(())
    }
}

/// `f_t^k(x) = <a_{t,k}, x>` with `a_{t,k}` uniform on `[0,1]^d`.
#[derive(Debug, Clone)]
pub struct RandomLinear {
    dim: usize,
    objectives: usize,
    seed: u64,
    value_bound: f64,
}

impl RandomLinear {
    pub fn new(dim: usize, objectives: usize, set: &FeasibleSet, seed: u64) -> Result<Self> {
        positive("dimension", dim)?;
        positive("objective count", objectives)?;
        check_dim(set, dim)?;
        Ok(Self {
            dim,
            objectives,
            seed,
            // |<a, x>| <= ||a||_inf ||x||_1 <= sup ||x||_1.
            value_bound: set.max_l1_norm().max(f64::MIN_POSITIVE),
        })
    }

    pub fn coefficients(&self, t: usize, k: usize) -> Vec<f64> {
        let mut rng = RandomSource::keyed(self.seed, TAG_LINEAR, t as u64, k as u64);
        (0..self.dim).map(|_| rng.uniform()).collect()
    }
}

impl LossOracle for RandomLinear {
    fn dim(&self) -> usize {
        self.dim
    }
    fn num_objectives(&self) -> usize {
        self.objectives
    }
    fn value_bound(&self) -> f64 {
        self.value_bound
    }
    fn lipschitz_bound(&self) -> f64 {
        (self.dim as f64).sqrt()
    }
    fn round(&self, t: usize) -> Vec<ConvexFn> {
        (0..self.objectives)
            .map(|k| ConvexFn::linear(self.coefficients(t, k), 0.0))
            .collect()
    }
    fn closed_form_mean(&self) -> Option<Vec<ConvexFn>> {
        Some(vec![
            ConvexFn::linear(vec![0.5; self.dim], 0.0);
            self.objectives
        ])
    }
    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::RandomLinear {
            dim: self.dim,
            objectives: self.objectives,
            seed: self.seed,
        }
    }
}

/// Centers of the quadratic family `(x - a)^2`.
pub const QUADRATIC_CENTERS: std::ops::RangeInclusive<i32> = -9..=9;

/// `f_t^k(x) = (x - a)^2` with `a` uniform over the integers `-9..=9`.
#[derive(Debug, Clone)]
pub struct RandomQuadratic {
    objectives: usize,
    seed: u64,
    low: f64,
    high: f64,
}

impl RandomQuadratic {
    pub fn new(objectives: usize, set: &FeasibleSet, seed: u64) -> Result<Self> {
        positive("objective count", objectives)?;
        let (low, high) = match set {
            FeasibleSet::Interval { low, high } => (*low, *high),
            _ => {
                return Err(Error::InvalidSet(
                    "random quadratic losses need an interval".into(),
                ))
            }
        };
        Ok(Self {
            objectives,
            seed,
            low,
            high,
        })
    }

    pub fn center(&self, t: usize, k: usize) -> f64 {
        let mut rng = RandomSource::keyed(self.seed, TAG_QUADRATIC, t as u64, k as u64);
        let n = QUADRATIC_CENTERS.clone().count();
        (*QUADRATIC_CENTERS.start() + rng.below(n) as i32) as f64
    }

    fn max_offset(&self) -> f64 {
        let (amin, amax) = (
            *QUADRATIC_CENTERS.start() as f64,
            *QUADRATIC_CENTERS.end() as f64,
        );
        [
            self.high - amin,
            amax - self.low,
            self.low - amin,
            amax - self.high,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl LossOracle for RandomQuadratic {
    fn dim(&self) -> usize {
        1
    }
    fn num_objectives(&self) -> usize {
        self.objectives
    }
    fn value_bound(&self) -> f64 {
        self.max_offset().powi(2)
    }
    fn lipschitz_bound(&self) -> f64 {
        2.0 * self.max_offset()
    }
    fn round(&self, t: usize) -> Vec<ConvexFn> {
        (0..self.objectives)
            .map(|k| ConvexFn::squared_distance(&[self.center(t, k)], 1.0))
            .collect()
    }
    fn closed_form_mean(&self) -> Option<Vec<ConvexFn>> {
        // E[(x - a)^2] = x^2 - 2 x E[a] + E[a^2].
        let n = QUADRATIC_CENTERS.clone().count() as f64;
        let mean_a = QUADRATIC_CENTERS.clone().map(f64::from).sum::<f64>() / n;
        let mean_sq = QUADRATIC_CENTERS
            .clone()
            .map(|a| f64::from(a * a))
            .sum::<f64>()
            / n;
        let mut f = ConvexFn::squared_distance(&[0.0], 1.0);
        f.add(&ConvexFn::linear(vec![-2.0 * mean_a], mean_sq));
        Some(vec![f; self.objectives])
    }
    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::RandomQuadratic {
            objectives: self.objectives,
            seed: self.seed,
        }
    }
}

/// Global experts reduction: `f_t^k(x) = x_k l_{t,k}` with `l_{t,k} ~ U(low, high)`.
#[derive(Debug, Clone)]
pub struct ExpertLosses {
    objectives: usize,
    low: f64,
    high: f64,
    seed: u64,
}

impl ExpertLosses {
    pub fn new(
        objectives: usize,
        low: f64,
        high: f64,
        set: &FeasibleSet,
        seed: u64,
    ) -> Result<Self> {
        positive("expert count", objectives)?;
        if !(0.0 <= low && low < high && high <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "expert loss range [{low}, {high}] must satisfy 0 <= a < b <= 1"
            )));
        }
        match set {
            FeasibleSet::Simplex { dim } if *dim == objectives => {}
            _ => {
                return Err(Error::InvalidSet(format!(
                    "experts need the probability simplex with {objectives} coordinates"
                )))
            }
        }
        Ok(Self {
            objectives,
            low,
            high,
            seed,
        })
    }

    pub fn expert_losses(&self, t: usize) -> Vec<f64> {
        (0..self.objectives)
            .map(|k| {
                let mut rng = RandomSource::keyed(self.seed, TAG_EXPERTS, t as u64, k as u64);
                rng.uniform_in(self.low, self.high)
            })
            .collect()
    }
}

fn coordinate_fn(dim: usize, k: usize, scale: f64) -> ConvexFn {
    let mut coef = vec![0.0; dim];
    coef[k] = scale;
    ConvexFn::linear(coef, 0.0)
}

impl LossOracle for ExpertLosses {
    fn dim(&self) -> usize {
        self.objectives
    }
    fn num_objectives(&self) -> usize {
        self.objectives
    }
    fn value_bound(&self) -> f64 {
        self.high
    }
    fn lipschitz_bound(&self) -> f64 {
        self.high
    }
    fn round(&self, t: usize) -> Vec<ConvexFn> {
        self.expert_losses(t)
            .into_iter()
            .enumerate()
            .map(|(k, l)| coordinate_fn(self.objectives, k, l))
            .collect()
    }
    fn closed_form_mean(&self) -> Option<Vec<ConvexFn>> {
        let m = 0.5 * (self.low + self.high);
        Some(
            (0..self.objectives)
                .map(|k| coordinate_fn(self.objectives, k, m))
                .collect(),
        )
    }
    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::Experts {
            objectives: self.objectives,
            low: self.low,
            high: self.high,
            seed: self.seed,
        }
    }
}

/// Every `interval` rounds the hard objective moves to the next group
/// (round-robin from the first) and its feature mean is shifted by
/// `magnitude` in every coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchingShift {
    pub interval: usize,
    pub magnitude: f64,
}

impl SwitchingShift {
    /// Zero-based index of the shifted objective at round `t >= 1`.
    pub fn hard_objective(&self, t: usize, objectives: usize) -> usize {
        ((t.max(1) - 1) / self.interval) % objectives
    }
}

/// Noise vectors are clipped to norm `sigma * (sqrt(d) + NOISE_CLIP)`, which
/// makes the declared bounds hold surely. A chi variable with `d` degrees of
/// freedom essentially never reaches that far.
const NOISE_CLIP: f64 = 6.0;

/// Fair classification: per-group averaged logistic loss with L2 regularization.
#[derive(Debug, Clone)]
pub struct FairClassification {
    dim: usize,
    objectives: usize,
    batch: usize,
    kappa: f64,
    sigma: f64,
    seed: u64,
    switching: Option<SwitchingShift>,
    hidden: Vec<Vec<f64>>,
    means: Vec<Vec<f64>>,
    radius: f64,
    feature_bound: f64,
}

impl FairClassification {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dim: usize,
        objectives: usize,
        batch: usize,
        kappa: f64,
        sigma: f64,
        switching: Option<SwitchingShift>,
        set: &FeasibleSet,
        seed: u64,
    ) -> Result<Self> {
        positive("dimension", dim)?;
        positive("group count", objectives)?;
        positive("batch size", batch)?;
        check_dim(set, dim)?;
        if !(kappa > 0.0 && sigma > 0.0 && kappa.is_finite() && sigma.is_finite()) {
            return Err(Error::InvalidParameter(
                "kappa and sigma must be positive".into(),
            ));
        }
        if let Some(s) = switching {
            positive("switch interval", s.interval)?;
            if !(s.magnitude.is_finite() && s.magnitude >= 0.0) {
                return Err(Error::InvalidParameter(
                    "shift magnitude must be finite and nonnegative".into(),
                ));
            }
        }
        let (hidden, means): (Vec<_>, Vec<_>) = (0..objectives)
            .map(|k| {
                let mut rng = RandomSource::keyed(seed, TAG_FAIR_GROUP, 0, k as u64);
                let w = rng.gaussian_vec(dim);
                let mu = rng.gaussian_vec(dim);
                (w, mu)
            })
            .unzip();
        let shift_norm = switching.map_or(0.0, |s| s.magnitude * (dim as f64).sqrt());
        let max_mean = means.iter().map(|m| norm2(m)).fold(0.0, f64::max);
        let feature_bound = max_mean + shift_norm + sigma * ((dim as f64).sqrt() + NOISE_CLIP);
        Ok(Self {
            dim,
            objectives,
            batch,
            kappa,
            sigma,
            seed,
            switching,
            hidden,
            means,
            radius: set.max_l2_norm(),
            feature_bound,
        })
    }

    pub fn hidden_parameters(&self, k: usize) -> &[f64] {
        &self.hidden[k]
    }

    /// Feature mean of group `k` at round `t`, including any active shift.
    pub fn feature_mean(&self, t: usize, k: usize) -> Vec<f64> {
        let mut mu = self.means[k].clone();
        if let Some(s) = self.switching {
            if s.hard_objective(t, self.objectives) == k {
                mu.iter_mut().for_each(|v| *v += s.magnitude);
            }
        }
        mu
    }

    pub fn sample_batch(&self, t: usize, k: usize) -> LogisticBatch {
        let mut rng = RandomSource::keyed(self.seed, TAG_FAIR_ROUND, t as u64, k as u64);
        let mu = self.feature_mean(t, k);
        let clip = (self.dim as f64).sqrt() + NOISE_CLIP;
        let mut features = Vec::with_capacity(self.batch * self.dim);
        let mut labels = Vec::with_capacity(self.batch);
        for _ in 0..self.batch {
            let mut noise = rng.gaussian_vec(self.dim);
            let n = norm2(&noise);
            if n > clip {
                noise.iter_mut().for_each(|v| *v *= clip / n);
            }
            let z: Vec<f64> = mu
                .iter()
                .zip(&noise)
                .map(|(m, e)| m + self.sigma * e)
                .collect();
            let p = sigmoid(crate::set::dot(&self.hidden[k], &z));
            labels.push(if rng.uniform() < p { 1.0 } else { -1.0 });
            features.extend_from_slice(&z);
        }
        LogisticBatch::new(self.dim, features, labels)
    }
}

impl LossOracle for FairClassification {
    fn dim(&self) -> usize {
        self.dim
    }
    fn num_objectives(&self) -> usize {
        self.objectives
    }
    fn value_bound(&self) -> f64 {
        softplus(self.radius * self.feature_bound) + self.kappa * self.radius * self.radius
    }
    fn lipschitz_bound(&self) -> f64 {
        self.feature_bound + 2.0 * self.kappa * self.radius
    }
    fn round(&self, t: usize) -> Vec<ConvexFn> {
        (0..self.objectives)
            .map(|k| ConvexFn::logistic(Arc::new(self.sample_batch(t, k)), self.kappa))
            .collect()
    }
    fn is_iid(&self) -> bool {
        self.switching.is_none()
    }
    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::FairClassification {
            dim: self.dim,
            objectives: self.objectives,
            batch: self.batch,
            kappa: self.kappa,
            sigma: self.sigma,
            seed: self.seed,
            switching: self.switching,
        }
    }
}

/// The deterministic alternating pair on `[0, 1]`:
/// odd rounds `f = 1.2 - 0.2x, g = x`; even rounds `f = x, g = 0.8 + 0.2x`.
#[derive(Debug, Clone)]
pub struct AdversarialPair;

impl AdversarialPair {
    pub fn new(set: &FeasibleSet) -> Result<Self> {
        let (low, high) = set.bounding_box();
        let ok = set.dim() == 1
            && matches!(set, FeasibleSet::Interval { .. } | FeasibleSet::Box { .. })
            && low[0] == 0.0
            && high[0] == 1.0;
        if !ok {
            return Err(Error::InvalidSet(
                "the adversarial pair is defined on [0, 1]".into(),
            ));
        }
        Ok(Self)
    }
}

impl LossOracle for AdversarialPair {
    fn dim(&self) -> usize {
        1
    }
    fn num_objectives(&self) -> usize {
        2
    }
    fn value_bound(&self) -> f64 {
        1.2
    }
    fn lipschitz_bound(&self) -> f64 {
        1.0
    }
    fn round(&self, t: usize) -> Vec<ConvexFn> {
        if t % 2 == 1 {
            vec![
                ConvexFn::linear(vec![-0.2], 1.2),
                ConvexFn::linear(vec![1.0], 0.0),
            ]
        } else {
            vec![
                ConvexFn::linear(vec![1.0], 0.0),
                ConvexFn::linear(vec![0.2], 0.8),
            ]
        }
    }
    fn is_iid(&self) -> bool {
        false
    }
    fn descriptor(&self) -> GeneratorDescriptor {
        GeneratorDescriptor::AdversarialPair
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::{evaluate_all, MeanLossEstimate};
    use crate::set::dot;

    fn linear_box() -> (RandomLinear, FeasibleSet) {
        let set = FeasibleSet::cube(10, 0.0, 1.0).unwrap();
        (RandomLinear::new(10, 3, &set, 9).unwrap(), set)
    }

    #[test]
    fn linear_basics() {
        let (o, _) = linear_box();
        let fns = o.round(4);
        for (k, f) in fns.iter().enumerate() {
            assert_eq!(f.value(&[0.0; 10]), 0.0);
            assert_eq!(f.gradient(&[0.3; 10]), o.coefficients(4, k));
        }
        assert_eq!(o.value_bound(), 10.0);
    }

    #[test]
    fn linear_mean_at_ones() {
        let (o, _) = linear_box();
        let n = 100_000;
        let ones = [1.0; 10];
        let mut sums = [0.0; 3];
        for t in 1..=n {
            for (s, v) in sums.iter_mut().zip(evaluate_all(&o.round(t), &ones)) {
                *s += v;
            }
        }
        for s in sums {
            assert!((s / n as f64 - 5.0).abs() < 0.03, "mean {}", s / n as f64);
        }
        let closed = o.closed_form_mean().unwrap();
        assert_eq!(closed[0].value(&ones), 5.0);
    }

    #[test]
    fn quadratic_values() {
        let set = FeasibleSet::interval(-1.0, 1.0).unwrap();
        let o = RandomQuadratic::new(1, &set, 3).unwrap();
        let f = ConvexFn::squared_distance(&[3.0], 1.0);
        assert_eq!(f.value_and_gradient(&[3.0]), (0.0, vec![0.0]));
        let f = ConvexFn::squared_distance(&[-9.0], 1.0);
        assert_eq!(f.value_and_gradient(&[1.0]), (100.0, vec![20.0]));
        assert_eq!(o.value_bound(), 100.0);
        assert_eq!(o.lipschitz_bound(), 20.0);
    }

    #[test]
    fn quadratic_centers_are_uniform() {
        let set = FeasibleSet::interval(-1.0, 1.0).unwrap();
        let o = RandomQuadratic::new(1, &set, 77).unwrap();
        let n = 100_000;
        let mut counts = [0usize; 19];
        for t in 1..=n {
            counts[(o.center(t, 0) + 9.0) as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 1.0 / 19.0).abs() < 0.005);
        }
        let mean = o.closed_form_mean().unwrap();
        assert!((mean[0].value(&[0.0]) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn experts_basics() {
        let set = FeasibleSet::simplex(4).unwrap();
        let o = ExpertLosses::new(4, 0.2, 0.8, &set, 1).unwrap();
        let fns = o.round(7);
        let l = o.expert_losses(7);
        let mut e1 = vec![0.0; 4];
        e1[1] = 1.0;
        assert_eq!(fns[2].value(&e1), 0.0);
        let uniform = [0.25; 4];
        for (f, lk) in fns.iter().zip(&l) {
            assert!((f.value(&uniform) - lk / 4.0).abs() < 1e-15);
            assert!(*lk >= 0.2 && *lk < 0.8);
        }
        assert!(
            ExpertLosses::new(4, 0.2, 0.8, &FeasibleSet::cube(4, 0.0, 1.0).unwrap(), 1).is_err()
        );
        assert!(ExpertLosses::new(4, 0.8, 0.2, &set, 1).is_err());
    }

    #[test]
    fn experts_mean_agrees_with_monte_carlo() {
        let set = FeasibleSet::simplex(3).unwrap();
        let o = ExpertLosses::new(3, 0.2, 0.8, &set, 5).unwrap();
        let closed = MeanLossEstimate::estimate(&o, 0, &mut RandomSource::new(0));
        let mc = MeanLossEstimate::monte_carlo(&o, 20_000, &mut RandomSource::new(1));
        for k in 0..3 {
            let mut e = vec![0.0; 3];
            e[k] = 1.0;
            let c = closed.value(&e)[k];
            assert!((c - 0.5).abs() < 1e-15);
            let m = mc.value(&e)[k];
            let se = mc.standard_error(&e)[k];
            assert!((m - c).abs() <= 3.0 * se, "{m} vs {c} (se {se})");
        }
        assert_eq!(closed.standard_error(&[1.0, 0.0, 0.0]), vec![0.0; 3]);
    }

    fn fair(switching: Option<SwitchingShift>, k: usize) -> FairClassification {
        let set = FeasibleSet::origin_ball(6, 2.5).unwrap();
        FairClassification::new(6, k, 20, 1e-3, 1.0, switching, &set, 42).unwrap()
    }

    #[test]
    fn fair_value_at_origin_is_log_two() {
        let o = fair(None, 3);
        for f in o.round(11) {
            assert!((f.value(&[0.0; 6]) - 2f64.ln()).abs() < 1e-15);
        }
        let reg = ConvexFn::squared_distance(&[0.0; 6], 1e-3);
        let x = [0.1, -0.2, 0.3, 0.0, 1.0, -1.0];
        let g = reg.gradient(&x);
        for (a, b) in g.iter().zip(&x) {
            assert!((a - 2e-3 * b).abs() < 1e-18);
        }
    }

    #[test]
    fn fair_gradients_match_finite_differences() {
        let o = fair(None, 2);
        let mut rng = RandomSource::new(3);
        for i in 0..20 {
            let f = &o.round(i + 1)[i % 2];
            let x: Vec<f64> = (0..6).map(|_| rng.uniform_in(-0.4, 0.4)).collect();
            let g = f.gradient(&x);
            let h = 1e-6;
            for j in 0..6 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let fd = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
                let rel = (fd - g[j]).abs() / g[j].abs().max(1e-3);
                assert!(rel <= 1e-5, "rel err {rel}");
            }
        }
    }

    #[test]
    fn switching_rotates_round_robin() {
        let s = SwitchingShift {
            interval: 100,
            magnitude: 5.0,
        };
        assert_eq!(s.hard_objective(1, 3), 0);
        assert_eq!(s.hard_objective(100, 3), 0);
        assert_eq!(s.hard_objective(101, 3), 1);
        assert_eq!(s.hard_objective(200, 3), 1);
        assert_eq!(s.hard_objective(301, 3), 0);
    }

    #[test]
    fn zero_shift_matches_plain_generator() {
        let plain = fair(None, 3);
        let shifted = fair(
            Some(SwitchingShift {
                interval: 10,
                magnitude: 0.0,
            }),
            3,
        );
        let x = [0.2; 6];
        for t in [1, 15, 250] {
            assert_eq!(
                evaluate_all(&plain.round(t), &x),
                evaluate_all(&shifted.round(t), &x)
            );
        }
    }

    #[test]
    fn shifted_group_is_harder() {
        let o = fair(
            Some(SwitchingShift {
                interval: 100,
                magnitude: 5.0,
            }),
            3,
        );
        let x = [0.4, -0.3, 0.2, 0.5, -0.1, 0.3];
        // Rounds 1..=100 shift group 0; compare against the other two groups.
        let (mut hard, mut easy) = (0.0, 0.0);
        for t in 1..=1000 {
            let vals = evaluate_all(&o.round(t), &x);
            let h = ((t - 1) / 100) % 3;
            for (k, v) in vals.iter().enumerate() {
                if k == h {
                    hard += v / 1000.0;
                } else {
                    easy += v / 2000.0;
                }
            }
        }
        assert!(hard > easy, "shifted {hard} vs unshifted {easy}");
    }

    #[test]
    fn adversarial_pair_values() {
        let set = FeasibleSet::interval(0.0, 1.0).unwrap();
        let o = AdversarialPair::new(&set).unwrap();
        for x in [0.0, 0.3, 1.0] {
            let odd = evaluate_all(&o.round(1), &[x]);
            let even = evaluate_all(&o.round(2), &[x]);
            assert!((odd[0] + even[0] - (1.2 + 0.8 * x)).abs() < 1e-15);
            assert!((odd[1] + even[1] - (0.8 + 1.2 * x)).abs() < 1e-15);
        }
        assert!(AdversarialPair::new(&FeasibleSet::interval(0.0, 2.0).unwrap()).is_err());
    }

    #[test]
    fn descriptors_rebuild_identical_oracles() {
        let set = FeasibleSet::origin_ball(4, 1.0).unwrap();
        let o = RandomLinear::new(4, 2, &set, 17).unwrap();
        let rebuilt = o.descriptor().build(&set).unwrap();
        let x = [0.1, 0.2, -0.3, 0.4];
        assert_eq!(
            evaluate_all(&o.round(9), &x),
            evaluate_all(&rebuilt.round(9), &x)
        );
    }

    #[test]
    fn rounds_are_order_independent() {
        let (o, _) = linear_box();
        let late_first = o.round(500);
        let _ = o.round(1);
        assert_eq!(late_first, o.round(500));
        let x = vec![0.5; 10];
        let a = dot(&o.coefficients(3, 1), &x);
        assert_eq!(a, o.round(3)[1].value(&x));
    }
}
