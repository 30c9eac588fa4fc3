//! Offline min-max benchmark, per-slot benchmark and regret decomposition.

mod decomposition;
mod offline;
mod solver;

pub use decomposition::{
    decompose_regret, decompose_rounds, hedge_regret_bound, ogd_regret_bound, DecompositionOptions,
    RegretReport, StabilityDiagnostics, TraceRow,
};
pub use offline::{
    cumulative_losses, expected_benchmark, max_over_simplex, per_slot_benchmark,
    single_round_value, solve_cumulative, solve_offline_minmax, SaddlePoint,
};
pub use solver::{duality_gap, minimize_max, MinMaxSolution, SolverOptions};
