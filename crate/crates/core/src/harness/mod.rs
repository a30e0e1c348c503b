//! Orchestration: turn a parsed run configuration into trajectories,
//! stationary states, and artifacts on disk.

pub mod config;
pub mod output;
pub mod profiles;
pub mod verify;

use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::domain::{build_grid, Field, Grid};
use crate::error::{NormFlowError, Result};
use crate::flow::{self, run_flow_from, FlowState, Termination, TrajectoryRecord, TrajectoryRow};
use crate::functionals;
use crate::stationary::{
    detect_omega_limit, minimize_f_on_sphere, shoot_ground_state, StationaryState,
};
use config::{InitialCondition, RunConfig};
use output::Snapshot;

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| NormFlowError::Config(format!("cannot read config {path:?}: {e}")))?;
    config::parse_config(&text)
}

pub fn initial_field(cfg: &RunConfig, grid: &Arc<Grid>) -> Result<Field> {
    let u = match &cfg.initial {
        InitialCondition::NamedProfile { name, amplitude } => {
            profiles::named_profile(grid, name, *amplitude)?
        }
        InitialCondition::FromFile(path) => output::load_field(path, grid)?,
    };
    match cfg.target_mass {
        Some(m) => {
            let m0 = functionals::mass(&u);
            if m0 <= 0.0 {
                return Err(NormFlowError::Config(
                    "initial field has zero mass; cannot rescale to target".into(),
                ));
            }
            Ok(u.scale((m / m0).sqrt()))
        }
        None => Ok(u),
    }
}

/// Step size: the configured dt, else the characteristic-time default
/// 1e-4 / |F[u0]|.
pub fn effective_dt(cfg: &RunConfig, u0: &Field) -> Result<f64> {
    match cfg.dt {
        Some(dt) => Ok(dt),
        None => {
            let f = functionals::lyapunov_f(u0, &cfg.params)?;
            Ok(1e-4 / f.abs().max(1e-12))
        }
    }
}

/// Per-run summary written next to the CSV.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub termination: String,
    pub dt: f64,
    pub rows_recorded: usize,
    pub final_row: TrajectoryRow,
    pub warnings: Vec<String>,
}

fn run_and_write(cfg: &RunConfig, start: FlowState) -> Result<TrajectoryRecord> {
    let dt = effective_dt(cfg, &start.u)?;
    let scheme = cfg.scheme(dt);
    let law = flow::lookup(&cfg.law)?;
    let warnings = cfg.params.validate(&cfg.domain)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let snap0 = Snapshot::of(start.t, &start.u);
    let traj = run_flow_from(start, &cfg.params, &scheme, law)?;

    if let Some(p) = &cfg.outputs.csv {
        output::write_trajectory_csv(&traj, p)?;
    }
    if let Some(p) = &cfg.outputs.snapshots {
        let snaps = vec![snap0, Snapshot::of(traj.final_state.t, &traj.final_state.u)];
        output::write_snapshots(&snaps, p)?;
    }
    if let Some(p) = &cfg.outputs.checkpoint {
        output::save_checkpoint(&traj.final_state, p)?;
    }
    if let Some(p) = &cfg.outputs.report {
        let report = RunReport {
            termination: traj.termination.label().to_string(),
            dt,
            rows_recorded: traj.rows.len(),
            final_row: *traj.rows.last().expect("trajectory has at least one row"),
            warnings,
        };
        let text = serde_json::to_string_pretty(&report)
            .map_err(|e| NormFlowError::Io(e.to_string()))?;
        std::fs::write(p, text)?;
    }
    Ok(traj)
}

pub fn cli_flow(cfg: &RunConfig) -> Result<TrajectoryRecord> {
    let grid = build_grid(cfg.domain)?;
    let u0 = initial_field(cfg, &grid)?;
    run_and_write(cfg, FlowState::initial(u0))
}

/// Continue from the checkpoint named in the config. `t_end` is absolute,
/// so the resumed run integrates exactly the remaining steps.
pub fn cli_resume(cfg: &RunConfig) -> Result<TrajectoryRecord> {
    let grid = build_grid(cfg.domain)?;
    let ckpt = cfg.outputs.checkpoint.as_ref().ok_or_else(|| {
        NormFlowError::Config("resume needs output.checkpoint in the config".into())
    })?;
    let state = output::load_checkpoint(ckpt, &grid)?;
    run_and_write(cfg, state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Shoot,
    Minimize,
    Flow,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "shoot" => Ok(Method::Shoot),
            "minimize" => Ok(Method::Minimize),
            "flow" => Ok(Method::Flow),
            other => Err(NormFlowError::Config(format!(
                "unknown method '{other}', expected 'shoot', 'minimize', or 'flow'"
            ))),
        }
    }
}

pub fn cli_ground_state(cfg: &RunConfig, method: Method) -> Result<StationaryState> {
    let grid = build_grid(cfg.domain)?;
    let u0 = initial_field(cfg, &grid)?;
    let target_mass = cfg.target_mass.unwrap_or_else(|| functionals::mass(&u0));

    let state = match method {
        Method::Shoot => {
            shoot_ground_state(cfg.params.omega, cfg.params.sigma, &grid, target_mass)?
        }
        Method::Minimize => minimize_f_on_sphere(&u0, &cfg.params, target_mass, 1e-8)?,
        Method::Flow => {
            let dt = effective_dt(cfg, &u0)?;
            let mut scheme = cfg.scheme(dt);
            scheme.kind = crate::flow::SchemeKind::SemiImplicitEulerProjected;
            let m0 = functionals::mass(&u0);
            let u0 = u0.scale((target_mass / m0).sqrt());
            let law = flow::lookup(&cfg.law)?;
            let traj = run_flow_from(FlowState::initial(u0), &cfg.params, &scheme, law)?;
            let limit =
                detect_omega_limit(&traj, &cfg.params, law, scheme.tol_res, scheme.tol_conv)?;
            limit.state.ok_or_else(|| {
                NormFlowError::OracleFailure(format!(
                    "flow did not settle on a stationary state ({} with F = {:.6e})",
                    traj.termination.label(),
                    limit.f_infinity
                ))
            })?
        }
    };

    if let Some(p) = &cfg.outputs.state {
        let file = output::StationaryStateFile {
            omega: state.omega,
            sigma: cfg.params.sigma,
            mass: state.mass,
            mu_q: state.mu_q,
            residual_l2: state.residual_l2,
            provenance: format!("{:?}", state.provenance),
            nodes: state.profile.grid().nodes.clone(),
            values: state.profile.values().to_vec(),
        };
        let text = serde_json::to_string_pretty(&file)
            .map_err(|e| NormFlowError::Io(e.to_string()))?;
        std::fs::write(p, text)?;
    }
    Ok(state)
}

/// Process exit code for a finished run.
pub fn exit_code(t: &Termination) -> i32 {
    match t {
        Termination::ReachedTEnd | Termination::Converged { .. } => 0,
        Termination::BlowUp { .. } => 2,
        Termination::Degenerate { .. } => 3,
    }
}

/// Exit code when a run aborts before producing a termination.
pub fn error_exit_code(e: &NormFlowError) -> i32 {
    match e {
        NormFlowError::Stability(_) => 2,
        NormFlowError::DegenerateField(_) => 3,
        _ => 1,
    }
}
