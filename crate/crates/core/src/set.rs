//! Feasible sets with exact Euclidean projections.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Membership tolerance used for projected points.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// A point of the feasible set, i.e. an action `x_t`.
pub type Action = Vec<f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibleSet {
    Interval {
        low: f64,
        high: f64,
    },
    Box {
        low: Vec<f64>,
        high: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// Probability simplex in `dim` coordinates.
    Simplex {
        dim: usize,
    },
}

impl FeasibleSet {
    pub fn interval(low: f64, high: f64) -> Result<Self> {
        let set = FeasibleSet::Interval { low, high };
        set.validate()?;
        Ok(set)
    }

    pub fn cube(dim: usize, low: f64, high: f64) -> Result<Self> {
        let set = FeasibleSet::Box {
            low: vec![low; dim],
            high: vec![high; dim],
        };
        set.validate()?;
        Ok(set)
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let set = FeasibleSet::Ball { center, radius };
        set.validate()?;
        Ok(set)
    }

    pub fn origin_ball(dim: usize, radius: f64) -> Result<Self> {
        Self::ball(vec![0.0; dim], radius)
    }

    pub fn simplex(dim: usize) -> Result<Self> {
        let set = FeasibleSet::Simplex { dim };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FeasibleSet::Interval { low, high } => {
                if !(low.is_finite() && high.is_finite()) {
                    return Err(Error::InvalidSet("interval bounds must be finite".into()));
                }
                if low > high {
                    return Err(Error::InvalidSet(format!("empty interval [{low}, {high}]")));
                }
            }
            FeasibleSet::Box { low, high } => {
                if low.is_empty() || low.len() != high.len() {
                    return Err(Error::InvalidSet(
                        "box bounds must be nonempty and of equal length".into(),
                    ));
                }
                for (l, u) in low.iter().zip(high) {
                    if !(l.is_finite() && u.is_finite()) || l > u {
                        return Err(Error::InvalidSet(format!("empty box side [{l}, {u}]")));
                    }
                }
            }
            FeasibleSet::Ball { center, radius } => {
                if center.is_empty() {
                    return Err(Error::InvalidSet("ball center must be nonempty".into()));
                }
                ensure_finite(center, "ball center")?;
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidSet(format!(
                        "ball radius {radius} must be positive"
                    )));
                }
            }
            FeasibleSet::Simplex { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidSet(
                        "simplex needs at least one coordinate".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Interval { .. } => 1,
            FeasibleSet::Box { low, .. } => low.len(),
            FeasibleSet::Ball { center, .. } => center.len(),
            FeasibleSet::Simplex { dim } => *dim,
        }
    }

    /// Exact Euclidean diameter.
    pub fn diameter(&self) -> f64 {
        match self {
            FeasibleSet::Interval { low, high } => high - low,
            FeasibleSet::Box { low, high } => low
                .iter()
                .zip(high)
                .map(|(l, u)| (u - l) * (u - l))
                .sum::<f64>()
                .sqrt(),
            FeasibleSet::Ball { radius, .. } => 2.0 * radius,
            FeasibleSet::Simplex { dim } => {
                if *dim >= 2 {
                    std::f64::consts::SQRT_2
                } else {
                    0.0
                }
            }
        }
    }

    /// `sup_{x in set} ||x||_1`.
    pub fn max_l1_norm(&self) -> f64 {
        match self {
            FeasibleSet::Interval { low, high } => low.abs().max(high.abs()),
            FeasibleSet::Box { low, high } => low
                .iter()
                .zip(high)
                .map(|(l, u)| l.abs().max(u.abs()))
                .sum(),
            // sup over the ball of sum_j |c_j + r v_j| is at most ||c||_1 + r sqrt(d),
            // with equality for a centered ball.
            FeasibleSet::Ball { center, radius } => {
                center.iter().map(|c| c.abs()).sum::<f64>() + radius * (center.len() as f64).sqrt()
            }
            FeasibleSet::Simplex { .. } => 1.0,
        }
    }

    /// `sup_{x in set} ||x||_2`.
    pub fn max_l2_norm(&self) -> f64 {
        match self {
            FeasibleSet::Interval { low, high } => low.abs().max(high.abs()),
            FeasibleSet::Box { low, high } => low
                .iter()
                .zip(high)
                .map(|(l, u)| l.abs().max(u.abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            FeasibleSet::Ball { center, radius } => norm2(center) + radius,
            FeasibleSet::Simplex { .. } => 1.0,
        }
    }

    /// Coordinatewise range `[low_j, high_j]` of a bounding box of the set.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            FeasibleSet::Interval { low, high } => (vec![*low], vec![*high]),
            FeasibleSet::Box { low, high } => (low.clone(), high.clone()),
            FeasibleSet::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            FeasibleSet::Simplex { dim } => (vec![0.0; *dim], vec![1.0; *dim]),
        }
    }

    /// Default starting action: the center of the set.
    pub fn center(&self) -> Action {
        match self {
            FeasibleSet::Interval { low, high } => vec![0.5 * (low + high)],
            FeasibleSet::Box { low, high } => {
                low.iter().zip(high).map(|(l, u)| 0.5 * (l + u)).collect()
            }
            FeasibleSet::Ball { center, .. } => center.clone(),
            FeasibleSet::Simplex { dim } => vec![1.0 / *dim as f64; *dim],
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            FeasibleSet::Interval { low, high } => x[0] >= low - tol && x[0] <= high + tol,
            FeasibleSet::Box { low, high } => x
                .iter()
                .zip(low.iter().zip(high))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
            FeasibleSet::Ball { center, radius } => {
                let dist = x
                    .iter()
                    .zip(center)
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum::<f64>()
                    .sqrt();
                dist <= radius + tol
            }
            FeasibleSet::Simplex { .. } => {
                x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
        }
    }

    /// `min_{y in set} <g, y>`.
    pub fn min_linear(&self, g: &[f64]) -> f64 {
        match self {
            FeasibleSet::Interval { low, high } => (g[0] * low).min(g[0] * high),
            FeasibleSet::Box { low, high } => low
                .iter()
                .zip(high)
                .zip(g)
                .map(|((l, u), gi)| (gi * l).min(gi * u))
                .sum(),
            FeasibleSet::Ball { center, radius } => dot(g, center) - radius * norm2(g),
            FeasibleSet::Simplex { .. } => g.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, point: &[f64]) -> Result<Action> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        ensure_finite(point, "projection input")?;
        let projected = match self {
            FeasibleSet::Interval { low, high } => vec![point[0].clamp(*low, *high)],
            FeasibleSet::Box { low, high } => point
                .iter()
                .zip(low.iter().zip(high))
                .map(|(v, (l, u))| v.clamp(*l, *u))
                .collect(),
            FeasibleSet::Ball { center, radius } => {
                let offset: Vec<f64> = point.iter().zip(center).map(|(p, c)| p - c).collect();
                let dist = norm2(&offset);
                if dist <= *radius {
                    point.to_vec()
                } else {
                    let scale = radius / dist;
                    center
                        .iter()
                        .zip(&offset)
                        .map(|(c, o)| c + scale * o)
                        .collect()
                }
            }
            FeasibleSet::Simplex { .. } => project_simplex(point),
        };
        Ok(projected)
    }
}

/// Sort-and-threshold projection onto the probability simplex.
pub fn project_simplex(point: &[f64]) -> Vec<f64> {
    let mut sorted = point.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (i, v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - 1.0) / (i + 1) as f64;
        if v - candidate > 0.0 {
            threshold = candidate;
        }
    }
    point.iter().map(|v| (v - threshold).max(0.0)).collect()
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
