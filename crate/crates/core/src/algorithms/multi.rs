use crate::error::{Error, Result};
use crate::losses::{evaluate_all, ConvexFn};
use crate::rng::RandomSource;
use crate::weights::SimplexWeights;

use super::{OnlineAlgorithm, StepRecord};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf(usize),
    Split {
        left: Box<Node>,
        right: Box<Node>,
        /// Probability of the left branch.
        p_left: f64,
    },
}

impl Node {
    /// Balanced tree over experts `lo..hi`.
    fn build(lo: usize, hi: usize) -> Node {
        if hi - lo == 1 {
            return Node::Leaf(lo);
        }
        let mid = lo + (hi - lo) / 2;
        Node::Split {
            left: Box::new(Node::build(lo, mid)),
            right: Box::new(Node::build(mid, hi)),
            p_left: 0.5,
        }
    }

    fn fill(&self, mass: f64, out: &mut [f64]) {
        match self {
            Node::Leaf(i) => out[*i] = mass,
            Node::Split {
                left,
                right,
                p_left,
            } => {
                left.fill(mass * p_left, out);
                right.fill(mass * (1.0 - p_left), out);
            }
        }
    }

    /// Applies the pairwise update bottom-up and returns this subtree's loss
    /// under its distribution before the update.
    fn update(&mut self, losses: &[f64], rate: f64) -> f64 {
        match self {
            Node::Leaf(i) => losses[*i],
            Node::Split {
                left,
                right,
                p_left,
            } => {
                let l_left = left.update(losses, rate);
                let l_right = right.update(losses, rate);
                let p = *p_left;
                *p_left = multi_pair_update(p, l_left, l_right, rate);
                p * l_left + (1.0 - p) * l_right
            }
        }
    }
}

/// Two-expert step `x1 <- clip(x1 + (x2 l2 - x1 l1) * rate, 0, 1)`.
pub fn multi_pair_update(x1: f64, l1: f64, l2: f64, rate: f64) -> f64 {
    (x1 + ((1.0 - x1) * l2 - x1 * l1) * rate).clamp(0.0, 1.0)
}

/// Pairwise multiplicative scheme for the global experts problem, applied
/// recursively on a balanced binary tree. The horizon must be known in
/// advance: every node moves at rate `1/sqrt(T)`.
#[derive(Debug, Clone)]
pub struct Multi {
    experts: usize,
    root: Node,
    rate: f64,
    uniform: SimplexWeights,
}

impl Multi {
    pub fn new(experts: usize, horizon: usize) -> Result<Self> {
        if experts == 0 || horizon == 0 {
            return Err(Error::InvalidParameter(
                "multi needs at least one expert and a positive horizon".into(),
            ));
        }
        Ok(Self {
            experts,
            root: Node::build(0, experts),
            rate: 1.0 / (horizon as f64).sqrt(),
            uniform: SimplexWeights::uniform(experts)?,
        })
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.experts];
        self.root.fill(1.0, &mut out);
        out
    }

    /// Feeds the expert losses `l_t in [0, 1]^K`.
    pub fn update(&mut self, losses: &[f64]) -> Result<()> {
        if losses.len() != self.experts {
            return Err(Error::DimensionMismatch {
                expected: self.experts,
                got: losses.len(),
            });
        }
        if let Some(bad) = losses.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::InvalidParameter(format!(
                "multi needs losses in [0, 1], got {bad}"
            )));
        }
        self.root.update(losses, self.rate);
        Ok(())
    }
}

impl OnlineAlgorithm for Multi {
    fn name(&self) -> &'static str {
        "multi"
    }

    fn step(&mut self, _t: usize, fns: &[ConvexFn], _rng: &mut RandomSource) -> Result<StepRecord> {
        let p = self.probabilities();
        // f^k(x) = x_k l_k, so l_k is the k-th partial derivative.
        let expert_losses: Vec<f64> = fns
            .iter()
            .enumerate()
            .map(|(k, f)| f.gradient(&p)[k])
            .collect();
        let record = StepRecord {
            losses: evaluate_all(fns, &p),
            action: p,
            theta: self.uniform.clone(),
            eta_x: self.rate,
            eta_theta: 0.0,
        };
        self.update(&expert_losses)?;
        Ok(record)
    }

    fn weights(&self) -> SimplexWeights {
        self.uniform.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_pair_step() {
        let mut m = Multi::new(2, 100).unwrap();
        m.update(&[1.0, 0.0]).unwrap();
        assert!((m.probabilities()[0] - 0.45).abs() < 1e-15);
    }

    #[test]
    fn equal_losses_leave_the_pair_alone() {
        let mut m = Multi::new(2, 50).unwrap();
        m.update(&[0.3, 0.3]).unwrap();
        assert_eq!(m.probabilities(), vec![0.5, 0.5]);
    }

    #[test]
    fn four_experts_stay_uniform_under_equal_losses() {
        let mut m = Multi::new(4, 1000).unwrap();
        for _ in 0..1000 {
            m.update(&[0.7; 4]).unwrap();
        }
        assert_eq!(m.probabilities(), vec![0.25; 4]);
    }

    #[test]
    fn odd_counts_form_a_distribution() {
        let mut m = Multi::new(5, 400).unwrap();
        for t in 0..400 {
            let l: Vec<f64> = (0..5)
                .map(|k| ((t * 7 + k * 3) % 11) as f64 / 10.0)
                .collect();
            m.update(&l).unwrap();
            let p = m.probabilities();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn rejects_out_of_range_losses() {
        let mut m = Multi::new(2, 10).unwrap();
        assert!(m.update(&[1.5, 0.0]).is_err());
        assert!(m.update(&[-0.1, 0.0]).is_err());
    }
}
