//! Persistence: diagnostics CSV, field snapshots, checkpoints, and the
//! per-run check report. The CSV schema is fixed: header
//! `t,mass,grad_sq,lp_norm,mu,F,dudt_l2,residual`, one row per recorded
//! step, 17 significant decimal digits so reloads are bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpec, Field, Grid};
use crate::error::{NormFlowError, Result};
use crate::flow::{FlowState, TrajectoryRecord};

pub const CSV_HEADER: &str = "t,mass,grad_sq,lp_norm,mu,F,dudt_l2,residual";

const CHECKPOINT_VERSION: &str = "1";

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render the trajectory diagnostics as CSV text.
pub fn trajectory_csv(traj: &TrajectoryRecord) -> String {
    let mut out = String::with_capacity(traj.rows.len() * 160 + 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &traj.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt17(row.t),
            fmt17(row.mass),
            fmt17(row.grad_sq),
            fmt17(row.lp_norm),
            fmt17(row.mu),
            fmt17(row.f),
            fmt17(row.dudt_l2),
            fmt17(row.residual),
        );
    }
    out
}

pub fn write_trajectory_csv(traj: &TrajectoryRecord, path: &Path) -> Result<()> {
    fs::write(path, trajectory_csv(traj)).map_err(Into::into)
}

/// One field snapshot: {t, nodes, values}.
#[derive(Debug, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl Snapshot {
    pub fn of(t: f64, u: &Field) -> Self {
        Snapshot { t, nodes: u.grid().nodes.clone(), values: u.values().to_vec() }
    }
}

pub fn write_snapshots(snaps: &[Snapshot], path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(snaps)
        .map_err(|e| NormFlowError::Io(e.to_string()))?;
    fs::write(path, text).map_err(Into::into)
}

/// Checkpoint payload: versioned, with field values as 17-digit decimal
/// strings so the decimal round-trip reproduces every f64 bit-exactly.
#[derive(Debug, Serialize, Deserialize)]
struct CheckpointFile {
    version: String,
    t: f64,
    step_index: u64,
    domain: DomainSpec,
    values: Vec<String>,
}

pub fn save_checkpoint(state: &FlowState, path: &Path) -> Result<()> {
    let payload = CheckpointFile {
        version: CHECKPOINT_VERSION.to_string(),
        t: state.t,
        step_index: state.step_index,
        domain: state.u.grid().spec,
        values: state.u.values().iter().map(|v| fmt17(*v)).collect(),
    };
    let text =
        serde_json::to_string_pretty(&payload).map_err(|e| NormFlowError::Io(e.to_string()))?;
    fs::write(path, text).map_err(Into::into)
}

pub fn load_checkpoint(path: &Path, grid: &Arc<Grid>) -> Result<FlowState> {
    let text = fs::read_to_string(path)
        .map_err(|e| NormFlowError::Io(format!("cannot read checkpoint {path:?}: {e}")))?;
    if text.trim().is_empty() {
        return Err(NormFlowError::Io(format!("checkpoint {path:?} is empty")));
    }
    let payload: CheckpointFile = serde_json::from_str(&text).map_err(|e| {
        NormFlowError::Io(format!(
            "corrupt checkpoint {path:?} at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    if payload.version != CHECKPOINT_VERSION {
        return Err(NormFlowError::Io(format!(
            "checkpoint {path:?} has unknown version tag '{}'",
            payload.version
        )));
    }
    if payload.domain != grid.spec {
        return Err(NormFlowError::Config(format!(
            "checkpoint domain {:?} does not match configured domain {:?}",
            payload.domain, grid.spec
        )));
    }
    let values = payload
        .values
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| NormFlowError::Io(format!("bad value '{s}' in checkpoint: {e}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let u = Field::new(Arc::clone(grid), values)?;
    Ok(FlowState { t: payload.t, u, step_index: payload.step_index, last_mu: f64::NAN })
}

/// Serialized form of a stationary state for the ground-state CLI.
#[derive(Debug, Serialize, Deserialize)]
pub struct StationaryStateFile {
    pub omega: f64,
    pub sigma: f64,
    pub mass: f64,
    pub mu_q: f64,
    pub residual_l2: f64,
    pub provenance: String,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

/// Load a field from a JSON file holding either a snapshot or a bare
/// `{ "values": [...] }` object.
pub fn load_field(path: &Path, grid: &Arc<Grid>) -> Result<Field> {
    #[derive(Deserialize)]
    struct Values {
        values: Vec<f64>,
    }
    let text = fs::read_to_string(path)
        .map_err(|e| NormFlowError::Io(format!("cannot read field file {path:?}: {e}")))?;
    let v: Values = serde_json::from_str(&text)
        .map_err(|e| NormFlowError::Io(format!("bad field file {path:?}: {e}")))?;
    Field::new(Arc::clone(grid), v.values)
}
