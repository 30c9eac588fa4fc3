//! Experiment configuration, presets and validation.

use std::fmt;
use std::path::PathBuf;

use minmax_oco::algorithms::{
    AverageOgd, BanditHedgeOgd, BanditMode, Ftrl, Greedy, HedgeOgd, Multi, OnlineAlgorithm,
};
use minmax_oco::losses::{GeneratorDescriptor, LossOracle, SwitchingShift};
use minmax_oco::{FeasibleSet, ProblemBounds, Schedules};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Linear,
    Quadratic,
    Experts,
    Fairclf,
    Switching,
    Adversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    HedgeOgd,
    Greedy,
    AvgOgd,
    Ftrl,
    Multi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackMode {
    Full,
    Bandit1,
    Bandit2,
}

macro_rules! display_via_serde {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let s = serde_json::to_value(self).map_err(|_| fmt::Error)?;
                f.write_str(s.as_str().ok_or(fmt::Error)?)
            }
        }
    )*};
}
display_via_serde!(Experiment, Algo, FeedbackMode);

/// Optional replacements for the preset bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsOverride {
    pub value: Option<f64>,
    pub lipschitz: Option<f64>,
    pub diameter: Option<f64>,
}

/// Everything needed to reproduce one experiment. Unset fields fall back to
/// the preset of `experiment`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub algo: Algo,
    pub feedback: FeedbackMode,
    pub horizons: Vec<usize>,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub set: Option<FeasibleSet>,
    pub bounds: BoundsOverride,
    pub seeds: usize,
    pub base_seed: u64,
    pub decompose: bool,
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub batch: Option<usize>,
    pub kappa: Option<f64>,
    pub sigma: Option<f64>,
    pub switch_interval: Option<usize>,
    pub shift_magnitude: Option<f64>,
    pub expert_low: Option<f64>,
    pub expert_high: Option<f64>,
    pub regularizer_scale: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Linear,
            algo: Algo::HedgeOgd,
            feedback: FeedbackMode::Full,
            horizons: vec![1000],
            k: None,
            d: None,
            set: None,
            bounds: BoundsOverride::default(),
            seeds: 10,
            base_seed: 0,
            decompose: false,
            out: None,
            trace: None,
            batch: None,
            kappa: None,
            sigma: None,
            switch_interval: None,
            shift_magnitude: None,
            expert_low: None,
            expert_high: None,
            regularizer_scale: Ftrl::DEFAULT_SCALE,
        }
    }
}

pub const LINEAR_DIM: usize = 10;
pub const QUADRATIC_HALF_WIDTH: f64 = 10.0;
pub const EXPERT_LOW: f64 = 0.2;
pub const EXPERT_HIGH: f64 = 0.8;
pub const FAIR_DIM: usize = 20;
pub const FAIR_GROUPS: usize = 10;
pub const FAIR_BATCH: usize = 50;
pub const FAIR_DIAMETER: f64 = 5.0;
pub const FAIR_KAPPA: f64 = 1e-3;
pub const FAIR_SIGMA: f64 = 1.0;
pub const SWITCH_GROUPS: usize = 3;
pub const SWITCH_INTERVAL: usize = 100;
pub const SWITCH_MAGNITUDE: f64 = 5.0;

/// A validated configuration with presets applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub config: ExperimentConfig,
    pub k: usize,
    pub d: usize,
    pub set: FeasibleSet,
    pub generator: GeneratorTemplate,
}

/// Generator parameters without the seed, which varies per run.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorTemplate {
    Linear,
    Quadratic,
    Experts {
        low: f64,
        high: f64,
    },
    Fair {
        batch: usize,
        kappa: f64,
        sigma: f64,
        switching: Option<SwitchingShift>,
    },
    Adversarial,
}

fn config_error(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn resolve(&self) -> Result<ResolvedConfig, HarnessError> {
        use Experiment::*;
        if self.horizons.is_empty() || self.horizons.contains(&0) {
            return Err(config_error(
                "horizons must be a nonempty list of positive counts",
            ));
        }
        if self.seeds == 0 {
            return Err(config_error("seeds must be at least 1"));
        }
        match (self.algo, self.feedback) {
            (Algo::HedgeOgd, _) | (_, FeedbackMode::Full) => {}
            (algo, fb) => {
                return Err(config_error(format!(
                    "{algo} requires full feedback, got {fb}"
                )))
            }
        }
        if self.algo == Algo::Multi && self.experiment != Experts {
            return Err(config_error("multi requires the experts experiment"));
        }
        let k = match self.experiment {
            Linear | Quadratic => self.k.unwrap_or(10),
            Experts => self.k.unwrap_or(2),
            Fairclf => self.k.unwrap_or(FAIR_GROUPS),
            Switching => self.k.unwrap_or(SWITCH_GROUPS),
            Adversarial => self.k.unwrap_or(2),
        };
        if k == 0 {
            return Err(config_error("K must be at least 1"));
        }
        let d = match self.experiment {
            Linear => self.d.unwrap_or(LINEAR_DIM),
            Quadratic | Adversarial => self.d.unwrap_or(1),
            Experts => self.d.unwrap_or(k),
            Fairclf | Switching => self.d.unwrap_or(FAIR_DIM),
        };
        if d == 0 {
            return Err(config_error("d must be at least 1"));
        }
        let fixed = |what: &str, want: usize, got: usize| {
            if want == got {
                Ok(())
            } else {
                Err(config_error(format!(
                    "{} experiment requires {what} = {want}, got {got}",
                    self.experiment
                )))
            }
        };
        match self.experiment {
            Quadratic => fixed("d", 1, d)?,
            Adversarial => {
                fixed("d", 1, d)?;
                fixed("K", 2, k)?;
            }
            Experts => fixed("d", k, d)?,
            _ => {}
        }
        let preset_set = match self.experiment {
            Linear => FeasibleSet::simplex(d),
            Quadratic => FeasibleSet::interval(-QUADRATIC_HALF_WIDTH, QUADRATIC_HALF_WIDTH),
            Experts => FeasibleSet::simplex(k),
            Fairclf | Switching => FeasibleSet::origin_ball(d, FAIR_DIAMETER / 2.0),
            Adversarial => FeasibleSet::interval(0.0, 1.0),
        }
        .map_err(|e| config_error(e.to_string()))?;
        let set = match &self.set {
            None => preset_set,
            Some(s) => {
                s.validate().map_err(|e| config_error(e.to_string()))?;
                if self.experiment == Experts && *s != preset_set {
                    return Err(config_error("the experts experiment uses simplex(K)"));
                }
                if s.dim() != d {
                    return Err(config_error(format!(
                        "set dimension {} does not match d = {d}",
                        s.dim()
                    )));
                }
                s.clone()
            }
        };
        let generator = match self.experiment {
            Linear => GeneratorTemplate::Linear,
            Quadratic => GeneratorTemplate::Quadratic,
            Experts => GeneratorTemplate::Experts {
                low: self.expert_low.unwrap_or(EXPERT_LOW),
                high: self.expert_high.unwrap_or(EXPERT_HIGH),
            },
            Fairclf | Switching => GeneratorTemplate::Fair {
                batch: self.batch.unwrap_or(FAIR_BATCH),
                kappa: self.kappa.unwrap_or(FAIR_KAPPA),
                sigma: self.sigma.unwrap_or(FAIR_SIGMA),
                switching: (self.experiment == Switching).then(|| SwitchingShift {
                    interval: self.switch_interval.unwrap_or(SWITCH_INTERVAL),
                    magnitude: self.shift_magnitude.unwrap_or(SWITCH_MAGNITUDE),
                }),
            },
            Adversarial => GeneratorTemplate::Adversarial,
        };
        let resolved = ResolvedConfig {
            config: self.clone(),
            k,
            d,
            set,
            generator,
        };
        // Building one oracle and one learner surfaces parameter errors
        // before any run starts.
        let oracle = resolved
            .oracle(self.base_seed)
            .map_err(|e| config_error(e.to_string()))?;
        let bounds = resolved.bounds(oracle.as_ref())?;
        resolved
            .algorithm(&bounds, *self.horizons.iter().max().unwrap_or(&1))
            .map_err(|e| config_error(e.to_string()))?;
        Ok(resolved)
    }
}

impl ResolvedConfig {
    pub fn descriptor(&self, seed: u64) -> GeneratorDescriptor {
        match &self.generator {
            GeneratorTemplate::Linear => GeneratorDescriptor::RandomLinear {
                dim: self.d,
                objectives: self.k,
                seed,
            },
            GeneratorTemplate::Quadratic => GeneratorDescriptor::RandomQuadratic {
                objectives: self.k,
                seed,
            },
            GeneratorTemplate::Experts { low, high } => GeneratorDescriptor::Experts {
                objectives: self.k,
                low: *low,
                high: *high,
                seed,
            },
            GeneratorTemplate::Fair {
                batch,
                kappa,
                sigma,
                switching,
            } => GeneratorDescriptor::FairClassification {
                dim: self.d,
                objectives: self.k,
                batch: *batch,
                kappa: *kappa,
                sigma: *sigma,
                seed,
                switching: *switching,
            },
            GeneratorTemplate::Adversarial => GeneratorDescriptor::AdversarialPair,
        }
    }

    pub fn oracle(&self, seed: u64) -> minmax_oco::Result<Box<dyn LossOracle>> {
        self.descriptor(seed).build(&self.set)
    }

    /// Generator bounds with any configured overrides applied.
    pub fn bounds(&self, oracle: &dyn LossOracle) -> Result<ProblemBounds, HarnessError> {
        let o = &self.config.bounds;
        ProblemBounds::new(
            o.value.unwrap_or_else(|| oracle.value_bound()),
            o.lipschitz.unwrap_or_else(|| oracle.lipschitz_bound()),
            o.diameter.unwrap_or_else(|| self.set.diameter()),
        )
        .map_err(|e| config_error(e.to_string()))
    }

    pub fn schedules(&self, bounds: &ProblemBounds) -> Schedules {
        match self.config.feedback {
            FeedbackMode::Full if self.config.experiment == Experiment::Quadratic => {
                Schedules::strongly_convex(bounds, self.k)
            }
            FeedbackMode::Full => Schedules::full_information(bounds, self.k),
            FeedbackMode::Bandit1 => Schedules::one_point(bounds, self.k, self.d),
            FeedbackMode::Bandit2 => Schedules::two_point(bounds, self.k, self.d),
        }
    }

    pub fn algorithm(
        &self,
        bounds: &ProblemBounds,
        horizon: usize,
    ) -> minmax_oco::Result<Box<dyn OnlineAlgorithm>> {
        let set = self.set.clone();
        let sched = self.schedules(bounds);
        Ok(match (self.config.algo, self.config.feedback) {
            (Algo::HedgeOgd, FeedbackMode::Full) => {
                Box::new(HedgeOgd::new(set, self.k, sched, None)?)
            }
            (Algo::HedgeOgd, FeedbackMode::Bandit1) => Box::new(BanditHedgeOgd::new(
                set,
                self.k,
                sched,
                BanditMode::OnePoint,
                None,
            )?),
            (Algo::HedgeOgd, FeedbackMode::Bandit2) => Box::new(BanditHedgeOgd::new(
                set,
                self.k,
                sched,
                BanditMode::TwoPoint,
                None,
            )?),
            (Algo::Greedy, _) => Box::new(Greedy::new(set, self.k)?),
            (Algo::AvgOgd, _) => Box::new(AverageOgd::new(set, self.k, sched, None)?),
            (Algo::Ftrl, _) => Box::new(Ftrl::new(set, self.k, self.config.regularizer_scale)?),
            (Algo::Multi, _) => Box::new(Multi::new(self.k, horizon)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_encode_the_published_parameters() {
        let fair = ExperimentConfig {
            experiment: Experiment::Fairclf,
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!((fair.d, fair.k), (20, 10));
        assert_eq!(fair.set.diameter(), 5.0);
        assert_eq!(
            fair.generator,
            GeneratorTemplate::Fair {
                batch: 50,
                kappa: 1e-3,
                sigma: 1.0,
                switching: None
            }
        );
        let sw = ExperimentConfig {
            experiment: Experiment::Switching,
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(sw.k, 3);
        assert!(matches!(
            sw.generator,
            GeneratorTemplate::Fair {
                switching: Some(SwitchingShift { interval: 100, magnitude }),
                ..
            } if magnitude == 5.0
        ));
        let ex = ExperimentConfig {
            experiment: Experiment::Experts,
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(
            ex.generator,
            GeneratorTemplate::Experts {
                low: 0.2,
                high: 0.8
            }
        );
        assert_eq!(ex.set, FeasibleSet::simplex(2).unwrap());
        let lin = ExperimentConfig::default().resolve().unwrap();
        assert_eq!(lin.d, 10);
        assert_eq!(lin.generator, GeneratorTemplate::Linear);
        assert_eq!(lin.set, FeasibleSet::simplex(10).unwrap());
    }

    #[test]
    fn invalid_combinations_are_rejected() {
        let bad = [
            ExperimentConfig {
                algo: Algo::Multi,
                ..Default::default()
            },
            ExperimentConfig {
                algo: Algo::Greedy,
                feedback: FeedbackMode::Bandit1,
                ..Default::default()
            },
            ExperimentConfig {
                experiment: Experiment::Adversarial,
                k: Some(3),
                ..Default::default()
            },
            ExperimentConfig {
                experiment: Experiment::Experts,
                set: Some(FeasibleSet::cube(2, 0.0, 1.0).unwrap()),
                ..Default::default()
            },
            ExperimentConfig {
                horizons: vec![],
                ..Default::default()
            },
            ExperimentConfig {
                bounds: BoundsOverride {
                    value: Some(-1.0),
                    ..Default::default()
                },
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(
                matches!(cfg.resolve(), Err(HarnessError::Config(_))),
                "{cfg:?}"
            );
        }
    }

    #[test]
    fn json_uses_snake_case_fields() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"experiment": "experts", "algo": "multi", "horizons": [100], "k": 4, "base_seed": 7}"#,
        )
        .unwrap();
        assert_eq!(cfg.algo, Algo::Multi);
        assert_eq!(cfg.k, Some(4));
        assert_eq!(cfg.base_seed, 7);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus": 1}"#).is_err());
        assert_eq!(Algo::AvgOgd.to_string(), "avg-ogd");
    }
}
