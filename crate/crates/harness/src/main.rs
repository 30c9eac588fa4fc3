use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use minmax_oco_harness::config::{Algo, Experiment, ExperimentConfig, FeedbackMode};
use minmax_oco_harness::output::{emit_csv, emit_trace, write_records};
use minmax_oco_harness::{run_experiment_outputs, HarnessError};

#[derive(Parser)]
#[command(
    name = "minmax-oco",
    version,
    about = "Min-max online convex optimization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write one CSV row per (seed, horizon).
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    #[arg(long, value_enum)]
    algo: Option<Algo>,
    #[arg(long, value_enum)]
    feedback: Option<FeedbackMode>,
    /// Horizon; repeat for several.
    #[arg(long = "T")]
    horizons: Vec<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    base_seed: Option<u64>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-round trace of the first seed at the largest horizon.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Compute R1, R2, R3 and the per-slot benchmark.
    #[arg(long)]
    decompose: bool,
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    HarnessError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    HarnessError::Config(format!("invalid config {}: {e}", path.display()))
                })?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.experiment {
            cfg.experiment = v;
        }
        if let Some(v) = self.algo {
            cfg.algo = v;
        }
        if let Some(v) = self.feedback {
            cfg.feedback = v;
        }
        if !self.horizons.is_empty() {
            cfg.horizons = self.horizons;
        }
        cfg.k = self.k.or(cfg.k);
        cfg.d = self.d.or(cfg.d);
        if let Some(v) = self.seeds {
            cfg.seeds = v;
        }
        if let Some(v) = self.base_seed {
            cfg.base_seed = v;
        }
        cfg.out = self.out.or(cfg.out);
        cfg.trace = self.trace.or(cfg.trace);
        cfg.decompose |= self.decompose;
        Ok(cfg)
    }
}

fn execute(args: RunArgs) -> Result<(), HarnessError> {
    let cfg = args.into_config()?.resolve()?;
    let outputs = run_experiment_outputs(&cfg)?;
    let records: Vec<_> = outputs.iter().map(|o| o.record.clone()).collect();
    match &cfg.config.out {
        Some(path) => emit_csv(&records, path)?,
        None => {
            let stdout = std::io::stdout();
            write_records(&records, &mut stdout.lock()).map_err(|source| HarnessError::Io {
                path: "stdout".into(),
                source,
            })?;
        }
    }
    if let Some(path) = &cfg.config.trace {
        let longest = *cfg.config.horizons.iter().max().unwrap_or(&0);
        let traced = outputs
            .iter()
            .find(|o| o.record.horizon == longest)
            .expect("every seed runs every horizon");
        emit_trace(&traced.trajectory, path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => execute(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "minmax-oco: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
