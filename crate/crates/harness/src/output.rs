//! CSV emission.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use minmax_oco::algorithms::Trajectory;

use crate::error::HarnessError;
use crate::runner::RunRecord;

pub const CSV_HEADER: &str =
    "experiment,algo,feedback,seed,T,K,d,C_alg,C_opt,regret,R1,R2,R3,per_slot_benchmark,wall_ms";

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn record_line(r: &RunRecord) -> String {
    let floats = [
        r.c_alg,
        r.c_opt,
        r.regret,
        r.r1,
        r.r2,
        r.r3,
        r.per_slot_benchmark,
        r.wall_ms,
    ]
    .map(format_float)
    .join(",");
    format!(
        "{},{},{},{},{},{},{},{}",
        r.experiment, r.algo, r.feedback, r.seed, r.horizon, r.k, r.d, floats
    )
}

pub fn write_records(records: &[RunRecord], w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", record_line(r))?;
    }
    w.flush()
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes the run records to `path`. An empty list is rejected before the
/// file is created.
pub fn emit_csv(records: &[RunRecord], path: &Path) -> Result<(), HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::Config("no records to write".into()));
    }
    let file = File::create(path).map_err(io_error(path))?;
    write_records(records, &mut BufWriter::new(file)).map_err(io_error(path))
}

pub fn trace_header(k: usize) -> String {
    let thetas: Vec<String> = (0..k).map(|i| format!("theta_{i}")).collect();
    format!(
        "t,max_cum_loss,{},step_eta_x,step_eta_theta",
        thetas.join(",")
    )
}

pub fn write_trace(traj: &Trajectory, w: &mut impl Write) -> std::io::Result<()> {
    let k = traj.cumulative.len();
    writeln!(w, "{}", trace_header(k))?;
    for i in 0..traj.horizon() {
        let thetas: Vec<String> = traj.thetas[i]
            .probs()
            .iter()
            .map(|p| format_float(*p))
            .collect();
        writeln!(
            w,
            "{},{},{},{},{}",
            i + 1,
            format_float(traj.max_cumulative[i]),
            thetas.join(","),
            format_float(traj.eta_x[i]),
            format_float(traj.eta_theta[i])
        )?;
    }
    w.flush()
}

/// Per-round trace: running `max_k S_k`, the weights in force and both step sizes.
pub fn emit_trace(traj: &Trajectory, path: &Path) -> Result<(), HarnessError> {
    if traj.horizon() == 0 {
        return Err(HarnessError::Config("empty trajectory".into()));
    }
    let file = File::create(path).map_err(io_error(path))?;
    write_trace(traj, &mut BufWriter::new(file)).map_err(io_error(path))
}
