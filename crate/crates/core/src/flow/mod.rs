//! Time integration of the registered evolution laws with trajectory
//! recording, convergence detection, and blow-up monitoring.

pub mod law;

use serde::{Deserialize, Serialize};

use crate::domain::{apply_semi_implicit_resolvent, Field};
use crate::error::{NormFlowError, Result};
use crate::functionals::{self, FlowParams};
use law::FlowLaw;

pub use law::{lookup, registry, EpsFlow, MainFlow, RivalFlow};

/// Convergence tolerance on the discrete time derivative.
pub const TOL_CONV: f64 = 1e-8;
/// Convergence tolerance on the stationarity residual.
pub const TOL_RES: f64 = 1e-6;
/// Default H^1 blow-up proxy factor.
pub const DEFAULT_BLOWUP_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchemeKind {
    SemiImplicitEuler,
    /// Semi-implicit Euler with the L^2 norm rescaled to the initial mass
    /// after every step.
    SemiImplicitEulerProjected,
    /// Classical RK4 with the full right-hand side explicit; for
    /// convergence cross-checks only.
    ExplicitRk4,
}

/// Time-stepping scheme and run control.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub dt: f64,
    pub t_end: f64,
    pub blowup_h1_factor: f64,
    pub tol_conv: f64,
    pub tol_res: f64,
    pub record_every: usize,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind, dt: f64, t_end: f64) -> Self {
        SchemeSpec {
            kind,
            dt,
            t_end,
            blowup_h1_factor: DEFAULT_BLOWUP_FACTOR,
            tol_conv: TOL_CONV,
            tol_res: TOL_RES,
            record_every: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end > 0.0 && self.dt < self.t_end) {
            return Err(NormFlowError::Config(format!(
                "need 0 < dt < t_end, got dt={}, t_end={}",
                self.dt, self.t_end
            )));
        }
        if !(self.blowup_h1_factor > 1.0) {
            return Err(NormFlowError::Config("blowup_h1_factor must exceed 1".into()));
        }
        if self.record_every == 0 {
            return Err(NormFlowError::Config("record_every must be >= 1".into()));
        }
        Ok(())
    }

    pub fn renormalize(&self) -> bool {
        self.kind == SchemeKind::SemiImplicitEulerProjected
    }
}

/// Instantaneous state of one run.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub t: f64,
    pub u: Field,
    pub step_index: u64,
    pub last_mu: f64,
}

impl FlowState {
    pub fn initial(u: Field) -> Self {
        FlowState { t: 0.0, u, step_index: 0, last_mu: f64::NAN }
    }
}

/// One recorded diagnostics row.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub mass: f64,
    pub grad_sq: f64,
    pub lp_norm: f64,
    pub mu: f64,
    pub f: f64,
    pub dudt_l2: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Termination {
    ReachedTEnd,
    Converged { residual: f64 },
    BlowUp { t: f64 },
    Degenerate { t: f64 },
}

impl Termination {
    pub fn label(&self) -> &'static str {
        match self {
            Termination::ReachedTEnd => "reached_t_end",
            Termination::Converged { .. } => "converged",
            Termination::BlowUp { .. } => "blow_up",
            Termination::Degenerate { .. } => "degenerate",
        }
    }
}

/// Diagnostics time series of a run plus its final state.
#[derive(Debug)]
pub struct TrajectoryRecord {
    pub rows: Vec<TrajectoryRow>,
    pub termination: Termination,
    pub final_state: FlowState,
}

/// Advance one step with the law's semi-implicit or explicit scheme.
/// The multiplier is frozen at the current step for the semi-implicit
/// variants; the projected variant rescales the result back to the
/// current mass.
pub fn step_flow(
    law: &dyn FlowLaw,
    state: &FlowState,
    params: &FlowParams,
    scheme: &SchemeSpec,
) -> Result<FlowState> {
    let dt = scheme.dt;
    let u = &state.u;
    let multiplier = law.multiplier(u, params)?;
    let next = match scheme.kind {
        SchemeKind::SemiImplicitEuler | SchemeKind::SemiImplicitEulerProjected => {
            let nl = law.explicit_term(u, params)?;
            let w = u.axpy(dt, &nl);
            let mut v = apply_semi_implicit_resolvent(&w, dt, law.linear_damping(params))?;
            if scheme.renormalize() {
                let m0 = functionals::mass(u);
                let m1 = functionals::mass(&v);
                if m1 <= 0.0 {
                    return Err(NormFlowError::DegenerateField(
                        "projection target mass vanished".into(),
                    ));
                }
                v = v.scale((m0 / m1).sqrt());
            }
            v
        }
        SchemeKind::ExplicitRk4 => {
            let k1 = law.rhs(u, params)?;
            let k2 = law.rhs(&u.axpy(dt / 2.0, &k1), params)?;
            let k3 = law.rhs(&u.axpy(dt / 2.0, &k2), params)?;
            let k4 = law.rhs(&u.axpy(dt, &k3), params)?;
            u.axpy(dt / 6.0, &k1)
                .axpy(dt / 3.0, &k2)
                .axpy(dt / 3.0, &k3)
                .axpy(dt / 6.0, &k4)
        }
    };
    if !next.is_finite() {
        return Err(NormFlowError::Stability(format!(
            "non-finite values after step {} (t = {})",
            state.step_index, state.t
        )));
    }
    Ok(FlowState {
        t: (state.step_index + 1) as f64 * dt,
        u: next,
        step_index: state.step_index + 1,
        last_mu: multiplier,
    })
}

fn diagnostics_row(
    u: &Field,
    law: &dyn FlowLaw,
    params: &FlowParams,
    t: f64,
    dudt_l2: f64,
) -> Result<TrajectoryRow> {
    let mass = functionals::mass(u);
    let grad_sq = functionals::h1_seminorm_sq(u);
    let lp = functionals::lp_norm(u, params.p_nl())?;
    let mu = law.multiplier(u, params)?;
    let f = functionals::lyapunov_f(u, params)?;
    let residual = functionals::lp_norm(&law.rhs(u, params)?, 2.0)?;
    Ok(TrajectoryRow { t, mass, grad_sq, lp_norm: lp, mu, f, dudt_l2, residual })
}

/// Integrate from `u0` until t_end, convergence, blow-up, or degeneracy.
/// Stepper errors terminate the run through the termination enum instead of
/// aborting it.
pub fn run_flow(
    u0: Field,
    params: &FlowParams,
    scheme: &SchemeSpec,
    law: &dyn FlowLaw,
) -> Result<TrajectoryRecord> {
    run_flow_from(FlowState::initial(u0), params, scheme, law)
}

/// Like [`run_flow`] but continuing from an existing state, e.g. one loaded
/// from a checkpoint. `scheme.t_end` stays absolute: a run resumed at t is
/// integrated for the remaining t_end - t.
pub fn run_flow_from(
    start: FlowState,
    params: &FlowParams,
    scheme: &SchemeSpec,
    law: &dyn FlowLaw,
) -> Result<TrajectoryRecord> {
    scheme.validate()?;
    params.validate(&start.u.grid().spec)?;
    start.u.check_finite()?;
    if functionals::mass(&start.u) <= 0.0 {
        return Err(NormFlowError::Config("initial field must be nonzero".into()));
    }

    let dt = scheme.dt;
    let n_steps = (scheme.t_end / dt).ceil() as u64;
    let mut state = start;
    if state.step_index >= n_steps {
        return Err(NormFlowError::Config(format!(
            "nothing to resume: state is at t = {} but t_end = {}",
            state.t, scheme.t_end
        )));
    }
    let mut rows = Vec::new();

    let first = diagnostics_row(&state.u, law, params, state.t, 0.0)?;
    let h1_limit = scheme.blowup_h1_factor.powi(2) * first.grad_sq.max(f64::MIN_POSITIVE);
    rows.push(first);

    let mut termination = Termination::ReachedTEnd;
    while state.step_index < n_steps {
        let next = match step_flow(law, &state, params, scheme) {
            Ok(next) => next,
            Err(NormFlowError::DegenerateField(_)) => {
                termination = Termination::Degenerate { t: state.t };
                break;
            }
            Err(NormFlowError::Stability(_)) => {
                termination = Termination::BlowUp { t: state.t };
                break;
            }
            Err(e) => return Err(e),
        };

        let grad_sq = functionals::h1_seminorm_sq(&next.u);
        let blew_up = grad_sq > h1_limit;

        let record = next.step_index % scheme.record_every as u64 == 0
            || next.step_index == n_steps
            || blew_up;
        let mut converged = false;
        if record {
            let dudt =
                functionals::mass(&next.u.axpy(-1.0, &state.u)).sqrt() / dt;
            match diagnostics_row(&next.u, law, params, next.t, dudt) {
                Ok(row) => {
                    converged = dudt < scheme.tol_conv && row.residual < scheme.tol_res;
                    if converged {
                        termination = Termination::Converged { residual: row.residual };
                    }
                    rows.push(row);
                }
                Err(NormFlowError::DegenerateField(_)) => {
                    termination = Termination::Degenerate { t: next.t };
                    state = next;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        state = next;
        if blew_up {
            termination = Termination::BlowUp { t: state.t };
            break;
        }
        if converged {
            break;
        }
    }

    Ok(TrajectoryRecord { rows, termination, final_state: state })
}
