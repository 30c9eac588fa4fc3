//! Problem bounds and step-size schedules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `B` bounds loss values, `G` gradient norms, `D` is the set diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemBounds {
    pub value: f64,
    pub lipschitz: f64,
    pub diameter: f64,
}

impl ProblemBounds {
    pub fn new(value: f64, lipschitz: f64, diameter: f64) -> Result<Self> {
        for (name, v) in [("B", value), ("G", lipschitz), ("D", diameter)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "bound {name} = {v} must be finite and positive"
                )));
            }
        }
        Ok(Self {
            value,
            lipschitz,
            diameter,
        })
    }
}

/// `ln K`, floored at `ln 2`. With `K = 1` the simplex is a single point and
/// any positive Hedge step gives the same weights.
pub fn log_experts(k: usize) -> f64 {
    (k.max(2) as f64).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    /// `sqrt(2 ln K / (B^2 t))`.
    HedgeFull {
        log_k: f64,
        value_bound: f64,
    },
    /// `sqrt(ln K) / (B sqrt(t))`, the Hedge rate paired with bandit feedback.
    HedgeBandit {
        log_k: f64,
        value_bound: f64,
    },
    /// `D / (G sqrt(t))`.
    OgdFull {
        diameter: f64,
        lipschitz: f64,
    },
    /// `D / (G sqrt(d) t^{3/4})`.
    OgdOnePoint {
        diameter: f64,
        lipschitz: f64,
        dim: usize,
    },
    /// `D / (G sqrt(d) sqrt(t))`.
    OgdTwoPoint {
        diameter: f64,
        lipschitz: f64,
        dim: usize,
    },
    /// `c / t`.
    InverseT {
        scale: f64,
    },
    Constant {
        value: f64,
    },
}

impl StepSchedule {
    pub fn at(&self, t: usize) -> f64 {
        let t = t.max(1) as f64;
        match *self {
            StepSchedule::HedgeFull { log_k, value_bound } => {
                (2.0 * log_k / (value_bound * value_bound * t)).sqrt()
            }
            StepSchedule::HedgeBandit { log_k, value_bound } => {
                log_k.sqrt() / (value_bound * t.sqrt())
            }
            StepSchedule::OgdFull {
                diameter,
                lipschitz,
            } => diameter / (lipschitz * t.sqrt()),
            StepSchedule::OgdOnePoint {
                diameter,
                lipschitz,
                dim,
            } => diameter / (lipschitz * (dim as f64).sqrt() * t.powf(0.75)),
            StepSchedule::OgdTwoPoint {
                diameter,
                lipschitz,
                dim,
            } => diameter / (lipschitz * (dim as f64).sqrt() * t.sqrt()),
            StepSchedule::InverseT { scale } => scale / t,
            StepSchedule::Constant { value } => value,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let probe = self.at(1);
        if !(probe.is_finite() && probe > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "schedule {self:?} yields non-positive step {probe}"
            )));
        }
        Ok(())
    }
}

/// Smoothing radius `delta_t` for gradient-free feedback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    /// `t^{-1/4}`.
    OnePoint,
    /// `t^{-1/2}`.
    TwoPoint,
}

impl Smoothing {
    pub fn at(&self, t: usize) -> f64 {
        let t = t.max(1) as f64;
        match self {
            Smoothing::OnePoint => t.powf(-0.25),
            Smoothing::TwoPoint => 1.0 / t.sqrt(),
        }
    }
}

/// The step sizes an algorithm reads each round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedules {
    pub x: StepSchedule,
    pub theta: StepSchedule,
    pub smoothing: Option<Smoothing>,
}

impl Schedules {
    /// `eta_theta = sqrt(2 ln K/(B^2 t))`, `eta_x = D/(G sqrt t)`.
    pub fn full_information(bounds: &ProblemBounds, k: usize) -> Self {
        Self {
            x: StepSchedule::OgdFull {
                diameter: bounds.diameter,
                lipschitz: bounds.lipschitz,
            },
            theta: StepSchedule::HedgeFull {
                log_k: log_experts(k),
                value_bound: bounds.value,
            },
            smoothing: None,
        }
    }

    /// Full information with `eta_x = (D/G)/t`, used for strongly convex losses.
    pub fn strongly_convex(bounds: &ProblemBounds, k: usize) -> Self {
        Self {
            x: StepSchedule::InverseT {
                scale: bounds.diameter / bounds.lipschitz,
            },
            ..Self::full_information(bounds, k)
        }
    }

    pub fn one_point(bounds: &ProblemBounds, k: usize, dim: usize) -> Self {
        Self {
            x: StepSchedule::OgdOnePoint {
                diameter: bounds.diameter,
                lipschitz: bounds.lipschitz,
                dim,
            },
            theta: StepSchedule::HedgeBandit {
                log_k: log_experts(k),
                value_bound: bounds.value,
            },
            smoothing: Some(Smoothing::OnePoint),
        }
    }

    pub fn two_point(bounds: &ProblemBounds, k: usize, dim: usize) -> Self {
        Self {
            x: StepSchedule::OgdTwoPoint {
                diameter: bounds.diameter,
                lipschitz: bounds.lipschitz,
                dim,
            },
            smoothing: Some(Smoothing::TwoPoint),
            ..Self::one_point(bounds, k, dim)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.theta.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_kinds() -> Vec<StepSchedule> {
        vec![
            StepSchedule::HedgeFull {
                log_k: log_experts(10),
                value_bound: 3.0,
            },
            StepSchedule::HedgeBandit {
                log_k: log_experts(1),
                value_bound: 0.5,
            },
            StepSchedule::OgdFull {
                diameter: 2.0,
                lipschitz: 3.0,
            },
            StepSchedule::OgdOnePoint {
                diameter: 2.0,
                lipschitz: 3.0,
                dim: 5,
            },
            StepSchedule::OgdTwoPoint {
                diameter: 2.0,
                lipschitz: 3.0,
                dim: 5,
            },
            StepSchedule::InverseT { scale: 0.5 },
            StepSchedule::Constant { value: 0.1 },
        ]
    }

    #[test]
    fn positive_and_nonincreasing() {
        for s in all_kinds() {
            let mut prev = f64::INFINITY;
            let mut t = 1usize;
            while t <= 1_000_000 {
                let v = s.at(t);
                assert!(v > 0.0 && v <= prev, "{s:?} at {t}");
                prev = v;
                t = if t < 1000 { t + 1 } else { t + 997 };
            }
            assert!(s.at(1_000_000) > 0.0);
        }
    }

    #[test]
    fn closed_forms() {
        let b = ProblemBounds::new(2.0, 4.0, 3.0).unwrap();
        let s = Schedules::full_information(&b, 2);
        assert!((s.theta.at(4) - (2.0 * 2f64.ln() / 16.0).sqrt()).abs() < 1e-15);
        assert!((s.x.at(9) - 3.0 / 12.0).abs() < 1e-15);
        assert!((Smoothing::OnePoint.at(16) - 0.5).abs() < 1e-15);
        assert!((Smoothing::TwoPoint.at(16) - 0.25).abs() < 1e-15);
        let one = Schedules::one_point(&b, 4, 4);
        assert!((one.x.at(16) - 3.0 / (4.0 * 2.0 * 8.0)).abs() < 1e-15);
        assert!((one.theta.at(4) - 4f64.ln().sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn bounds_must_be_positive() {
        assert!(ProblemBounds::new(0.0, 1.0, 1.0).is_err());
        assert!(ProblemBounds::new(1.0, f64::NAN, 1.0).is_err());
        assert!(ProblemBounds::new(1.0, 1.0, -1.0).is_err());
    }
}
