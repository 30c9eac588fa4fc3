//! Min-max multi-objective online convex optimization.
//!
//! A learner plays `x_t` in a convex set while `K` convex loss sequences are
//! revealed; its cost is the largest of the `K` cumulative losses. The crate
//! provides Hedge+OGD and its bandit variants, baselines, an offline min-max
//! benchmark and an exact regret decomposition.

pub mod algorithms;
pub mod benchmark;
pub mod error;
pub mod losses;
pub mod rng;
pub mod schedule;
pub mod set;
pub mod sum;
pub mod weights;

pub use error::{Error, Result};
pub use rng::{sample_unit_sphere, RandomSource};
pub use schedule::{ProblemBounds, Schedules, Smoothing, StepSchedule};
pub use set::{Action, FeasibleSet};
pub use weights::SimplexWeights;
