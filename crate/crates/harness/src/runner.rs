//! Multi-seed experiment execution.

use std::time::Instant;

use minmax_oco::algorithms::{run, Trajectory};
use minmax_oco::benchmark::{
    cumulative_losses, decompose_regret, solve_cumulative, DecompositionOptions, SolverOptions,
};
use minmax_oco::RandomSource;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ResolvedConfig};
use crate::error::HarnessError;

/// Stream tag separating the learner's randomness from the oracle's.
const LEARNER_STREAM: u64 = 0x006c_6561_726e_6572;

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub experiment: String,
    pub algo: String,
    pub feedback: String,
    pub seed: u64,
    pub horizon: usize,
    pub k: usize,
    pub d: usize,
    pub c_alg: f64,
    pub c_opt: f64,
    pub regret: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub per_slot_benchmark: f64,
    pub wall_ms: f64,
}

/// One finished run with its record and trajectory.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: RunRecord,
    pub trajectory: Trajectory,
}

/// Runs one seed at one horizon.
pub fn run_single(
    cfg: &ResolvedConfig,
    seed: u64,
    horizon: usize,
) -> Result<RunOutput, HarnessError> {
    let started = Instant::now();
    let oracle = cfg.oracle(seed)?;
    let bounds = cfg.bounds(oracle.as_ref())?;
    let mut algo = cfg.algorithm(&bounds, horizon)?;
    let mut rng = RandomSource::with_stream(seed, LEARNER_STREAM ^ horizon as u64);
    let traj = run(algo.as_mut(), oracle.as_ref(), &cfg.set, horizon, &mut rng)?;
    let (c_opt, r, per_slot) = if cfg.config.decompose {
        let opts = DecompositionOptions {
            per_slot: true,
            ..Default::default()
        };
        let rep = decompose_regret(&traj, oracle.as_ref(), &cfg.set, &opts)?;
        (
            rep.c_opt,
            [rep.r1, rep.r2, rep.r3],
            rep.per_slot_benchmark.unwrap_or(f64::NAN),
        )
    } else {
        let cum = cumulative_losses(oracle.as_ref(), horizon);
        let saddle = solve_cumulative(&cum, &cfg.set, &[], &SolverOptions::default())?;
        (saddle.value, [f64::NAN; 3], f64::NAN)
    };
    let c_alg = traj.cost();
    let c = &cfg.config;
    Ok(RunOutput {
        record: RunRecord {
            experiment: c.experiment.to_string(),
            algo: c.algo.to_string(),
            feedback: c.feedback.to_string(),
            seed,
            horizon,
            k: cfg.k,
            d: cfg.d,
            c_alg,
            c_opt,
            regret: c_alg - c_opt,
            r1: r[0],
            r2: r[1],
            r3: r[2],
            per_slot_benchmark: per_slot,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        },
        trajectory: traj,
    })
}

/// Seeds `base_seed ^ s` for `s` in `0..seeds`.
pub fn run_seeds(config: &ExperimentConfig) -> impl Iterator<Item = u64> + '_ {
    (0..config.seeds as u64).map(move |s| config.base_seed ^ s)
}

/// All (seed, horizon) runs, in seed-major order. Seeds run in parallel.
pub fn run_experiment_outputs(cfg: &ResolvedConfig) -> Result<Vec<RunOutput>, HarnessError> {
    let seeds: Vec<u64> = run_seeds(&cfg.config).collect();
    let per_seed: Vec<Result<Vec<RunOutput>, HarnessError>> = seeds
        .par_iter()
        .map(|&seed| {
            cfg.config
                .horizons
                .iter()
                .map(|&t| run_single(cfg, seed, t))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for r in per_seed {
        out.extend(r?);
    }
    Ok(out)
}

/// Validates `config` and returns one record per (seed, horizon).
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunRecord>, HarnessError> {
    let cfg = config.resolve()?;
    Ok(run_experiment_outputs(&cfg)?
        .into_iter()
        .map(|o| o.record)
        .collect())
}
