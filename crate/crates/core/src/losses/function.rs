use std::sync::Arc;

use crate::set::dot;

/// A mini-batch of labelled samples for an averaged logistic loss.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticBatch {
    dim: usize,
    /// Row-major `m x d` feature matrix.
    features: Vec<f64>,
    /// Labels in `{-1, +1}`.
    labels: Vec<f64>,
}

impl LogisticBatch {
    pub fn new(dim: usize, features: Vec<f64>, labels: Vec<f64>) -> Self {
        assert_eq!(features.len(), dim * labels.len(), "feature matrix shape");
        Self {
            dim,
            features,
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.features
            .chunks_exact(self.dim)
            .zip(self.labels.iter().copied())
    }
}

/// `log(1 + exp(u))` without overflow.
pub fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

pub fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct WeightedBatch {
    weight: f64,
    batch: Arc<LogisticBatch>,
}

/// A convex function of the form
///
/// `q ||x||^2 + <c, x> + c0 + sum_b w_b (1/m_b) sum_i log(1 + exp(-y_i <x, z_i>))`
///
/// with `q >= 0` and `w_b >= 0`. The family is closed under nonnegative
/// combinations, so cumulative and theta-weighted sums over many rounds stay
/// in the same representation. Polynomial parts collapse exactly; logistic
/// batches are shared by reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexFn {
    quad: f64,
    lin: Vec<f64>,
    constant: f64,
    logistic: Vec<WeightedBatch>,
}

impl ConvexFn {
    pub fn zero(dim: usize) -> Self {
        Self {
            quad: 0.0,
            lin: vec![0.0; dim],
            constant: 0.0,
            logistic: Vec::new(),
        }
    }

    /// `<coef, x> + constant`.
    pub fn linear(coef: Vec<f64>, constant: f64) -> Self {
        Self {
            quad: 0.0,
            lin: coef,
            constant,
            logistic: Vec::new(),
        }
    }

    /// `scale * ||x - center||^2`.
    pub fn squared_distance(center: &[f64], scale: f64) -> Self {
        assert!(scale >= 0.0, "squared distance scale must be nonnegative");
        Self {
            quad: scale,
            lin: center.iter().map(|c| -2.0 * scale * c).collect(),
            constant: scale * dot(center, center),
            logistic: Vec::new(),
        }
    }

    /// Averaged logistic loss on `batch` plus `kappa ||x||^2`.
    pub fn logistic(batch: Arc<LogisticBatch>, kappa: f64) -> Self {
        assert!(kappa >= 0.0, "regularization must be nonnegative");
        Self {
            quad: kappa,
            lin: vec![0.0; batch.dim],
            constant: 0.0,
            logistic: vec![WeightedBatch { weight: 1.0, batch }],
        }
    }

    pub fn dim(&self) -> usize {
        self.lin.len()
    }

    pub fn quadratic_coefficient(&self) -> f64 {
        self.quad
    }

    pub fn linear_coefficients(&self) -> &[f64] {
        &self.lin
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn has_logistic_terms(&self) -> bool {
        !self.logistic.is_empty()
    }

    /// `self += weight * other`; `weight` must be nonnegative to keep convexity.
    pub fn add_scaled(&mut self, other: &ConvexFn, weight: f64) {
        assert_eq!(self.dim(), other.dim(), "dimension of summed functions");
        assert!(weight >= 0.0, "negative weight would break convexity");
        if weight == 0.0 {
            return;
        }
        self.quad += weight * other.quad;
        for (a, b) in self.lin.iter_mut().zip(&other.lin) {
            *a += weight * b;
        }
        self.constant += weight * other.constant;
        self.logistic
            .extend(other.logistic.iter().map(|wb| WeightedBatch {
                weight: weight * wb.weight,
                batch: Arc::clone(&wb.batch),
            }));
    }

    pub fn add(&mut self, other: &ConvexFn) {
        self.add_scaled(other, 1.0);
    }

    pub fn scaled(&self, weight: f64) -> Self {
        let mut out = ConvexFn::zero(self.dim());
        out.add_scaled(self, weight);
        out
    }

    /// Sum of `weights[i] * fns[i]`.
    pub fn weighted_sum(fns: &[ConvexFn], weights: &[f64]) -> Self {
        let dim = fns.first().map_or(0, ConvexFn::dim);
        let mut out = ConvexFn::zero(dim);
        for (f, w) in fns.iter().zip(weights) {
            out.add_scaled(f, *w);
        }
        out
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let mut v = self.quad * dot(x, x) + dot(&self.lin, x) + self.constant;
        for wb in &self.logistic {
            let m = wb.batch.len() as f64;
            let s: f64 = wb.batch.rows().map(|(z, y)| softplus(-y * dot(x, z))).sum();
            v += wb.weight * s / m;
        }
        v
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.value_and_gradient(x).1
    }

    pub fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let mut v = self.quad * dot(x, x) + dot(&self.lin, x) + self.constant;
        let mut g: Vec<f64> = x
            .iter()
            .zip(&self.lin)
            .map(|(xi, ci)| 2.0 * self.quad * xi + ci)
            .collect();
        for wb in &self.logistic {
            let scale = wb.weight / wb.batch.len() as f64;
            let mut s = 0.0;
            for (z, y) in wb.batch.rows() {
                let margin = y * dot(x, z);
                s += softplus(-margin);
                let coeff = -y * sigmoid(-margin) * scale;
                for (gj, zj) in g.iter_mut().zip(z) {
                    *gj += coeff * zj;
                }
            }
            v += scale * s;
        }
        (v, g)
    }
}

/// Values of every function at `x`.
pub fn evaluate_all(fns: &[ConvexFn], x: &[f64]) -> Vec<f64> {
    fns.iter().map(|f| f.value(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite_difference(f: &ConvexFn, x: &[f64], h: f64) -> Vec<f64> {
        (0..x.len())
            .map(|j| {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[j] += h;
                xm[j] -= h;
                (f.value(&xp) - f.value(&xm)) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn softplus_is_stable() {
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(softplus(1000.0), 1000.0);
        assert!(softplus(-1000.0) >= 0.0 && softplus(-1000.0) < 1e-300);
        assert!((sigmoid(0.0) - 0.5).abs() < 1e-15);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(800.0) <= 1.0);
    }

    #[test]
    fn sums_collapse_polynomial_parts() {
        let a = ConvexFn::linear(vec![1.0, 2.0], 0.5);
        let b = ConvexFn::squared_distance(&[1.0, -1.0], 2.0);
        let mut s = a.clone();
        s.add_scaled(&b, 0.25);
        let x = [0.3, -0.7];
        assert!((s.value(&x) - (a.value(&x) + 0.25 * b.value(&x))).abs() < 1e-14);
    }

    #[test]
    fn logistic_gradient_matches_finite_differences() {
        let batch = Arc::new(LogisticBatch::new(
            3,
            vec![0.5, -1.0, 2.0, 1.5, 0.2, -0.3, -2.0, 0.7, 0.1],
            vec![1.0, -1.0, 1.0],
        ));
        let mut f = ConvexFn::logistic(batch, 1e-3);
        f.add_scaled(&ConvexFn::linear(vec![0.1, 0.0, -0.2], 1.0), 2.0);
        let x = [0.4, -0.2, 0.9];
        let g = f.gradient(&x);
        let fd = finite_difference(&f, &x, 1e-6);
        for (a, b) in g.iter().zip(&fd) {
            assert!((a - b).abs() <= 1e-5 * b.abs().max(1.0));
        }
        let zero_val =
            ConvexFn::logistic(Arc::new(LogisticBatch::new(1, vec![3.0], vec![-1.0])), 0.5)
                .value(&[0.0]);
        assert!((zero_val - 2f64.ln()).abs() < 1e-15);
    }
}
