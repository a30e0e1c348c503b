//! The family of evolution laws, each behind the `FlowLaw` trait and
//! registered by name so a run can select its law from config or the CLI.
//!
//! Three laws are registered:
//!   - "main":  du/dt = Lap u - omega u + mu[u] |u|^{2s} u
//!   - "eps":   the same with the epsilon-regularized multiplier mu_eps[u]
//!   - "rival": du/dt = Lap u + w[u] u + beta |u|^{2s} u with the
//!              Rayleigh-type coefficient w[u]; kept for the boundedness
//!              contrast experiments.
//!
//! Each law exposes the frozen-coefficient split used by the semi-implicit
//! stepper: the stiff linear part `Lap - linear_damping * I` goes through
//! the resolvent, everything else is `explicit_term` evaluated at the
//! current step.

use crate::domain::{laplacian, Field};
use crate::error::{NormFlowError, Result};
use crate::functionals::{abs_pow_fn, lp_pow_sum, mass, mu, mu_eps, FlowParams};

pub trait FlowLaw: Send + Sync {
    fn name(&self) -> &'static str;

    /// The nonlocal coefficient frozen at the current step: mu[u] for the
    /// main flow, mu_eps[u] for the regularized flow, w[u] for the rival.
    fn multiplier(&self, u: &Field, params: &FlowParams) -> Result<f64>;

    /// Coefficient c of the -c*u damping absorbed into the resolvent.
    fn linear_damping(&self, params: &FlowParams) -> f64;

    /// The terms integrated explicitly with the multiplier frozen.
    fn explicit_term(&self, u: &Field, params: &FlowParams) -> Result<Field>;

    /// Full right-hand side, used by the explicit scheme and as the
    /// stationarity residual.
    fn rhs(&self, u: &Field, params: &FlowParams) -> Result<Field> {
        let nl = self.explicit_term(u, params)?;
        Ok(laplacian(u).axpy(-self.linear_damping(params), u).axpy(1.0, &nl))
    }
}

fn power_term(u: &Field, two_sigma: f64, coeff: f64) -> Field {
    let pw = abs_pow_fn(two_sigma);
    u.map(|v| coeff * pw(v) * v)
}

/// The norm-preserving flow with the multiplier of the unregularized model.
pub struct MainFlow;

impl FlowLaw for MainFlow {
    fn name(&self) -> &'static str {
        "main"
    }

    fn multiplier(&self, u: &Field, params: &FlowParams) -> Result<f64> {
        mu(u, params)
    }

    fn linear_damping(&self, params: &FlowParams) -> f64 {
        params.omega
    }

    fn explicit_term(&self, u: &Field, params: &FlowParams) -> Result<Field> {
        let m = self.multiplier(u, params)?;
        Ok(power_term(u, 2.0 * params.sigma, m))
    }
}

/// The epsilon-regularized flow; identical to `MainFlow` at epsilon = 0 and
/// never degenerate for epsilon > 0.
pub struct EpsFlow;

impl FlowLaw for EpsFlow {
    fn name(&self) -> &'static str {
        "eps"
    }

    fn multiplier(&self, u: &Field, params: &FlowParams) -> Result<f64> {
        mu_eps(u, params)
    }

    fn linear_damping(&self, params: &FlowParams) -> f64 {
        params.omega
    }

    fn explicit_term(&self, u: &Field, params: &FlowParams) -> Result<Field> {
        let m = self.multiplier(u, params)?;
        Ok(power_term(u, 2.0 * params.sigma, m))
    }
}

/// The comparison flow with a fixed power coefficient beta and the
/// Rayleigh-type frequency w[u] = (|grad u|^2 - beta |u|_{2s+2}^{2s+2}) / |u|_2^2.
pub struct RivalFlow;

impl FlowLaw for RivalFlow {
    fn name(&self) -> &'static str {
        "rival"
    }

    fn multiplier(&self, u: &Field, params: &FlowParams) -> Result<f64> {
        let m = mass(u);
        if m <= 0.0 {
            return Err(NormFlowError::DegenerateField(
                "L^2 norm vanished; w[u] is undefined".into(),
            ));
        }
        let grad_sq = crate::functionals::h1_seminorm_sq(u);
        Ok((grad_sq - params.beta * lp_pow_sum(u, params.p_nl())) / m)
    }

    fn linear_damping(&self, _params: &FlowParams) -> f64 {
        0.0
    }

    fn explicit_term(&self, u: &Field, params: &FlowParams) -> Result<Field> {
        let w = self.multiplier(u, params)?;
        let pw = abs_pow_fn(2.0 * params.sigma);
        let beta = params.beta;
        Ok(u.map(|v| w * v + beta * pw(v) * v))
    }
}

static MAIN: MainFlow = MainFlow;
static EPS: EpsFlow = EpsFlow;
static RIVAL: RivalFlow = RivalFlow;

static REGISTRY: [&dyn FlowLaw; 3] = [&MAIN, &EPS, &RIVAL];

/// All registered evolution laws.
pub fn registry() -> &'static [&'static dyn FlowLaw] {
    &REGISTRY
}

/// Look an evolution law up by its registered name.
pub fn lookup(name: &str) -> Result<&'static dyn FlowLaw> {
    registry()
        .iter()
        .copied()
        .find(|law| law.name() == name)
        .ok_or_else(|| {
            let known: Vec<&str> = registry().iter().map(|l| l.name()).collect();
            NormFlowError::Config(format!(
                "unknown flow law '{name}', expected one of {known:?}"
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_grid, DomainKind, DomainSpec};
    use approx::assert_relative_eq;

    #[test]
    fn registry_names() {
        let names: Vec<&str> = registry().iter().map(|l| l.name()).collect();
        assert_eq!(names, vec!["main", "eps", "rival"]);
        assert!(lookup("main").is_ok());
        assert!(lookup("nope").is_err());
    }

    #[test]
    fn rival_multiplier_of_sech() {
        let g = build_grid(DomainSpec {
            kind: DomainKind::TruncatedRadialLine { radius: 20.0, dim: 1 },
            n: 8192,
        })
        .unwrap();
        let u = Field::from_fn(&g, |r| 1.0 / r.cosh());
        let p = FlowParams::new(1, 1.0, 0.0).with_beta(2.0);
        // w[sech] = (2/3 - 2 * 4/3) / 2 = -1
        assert_relative_eq!(RIVAL.multiplier(&u, &p).unwrap(), -1.0, max_relative = 1e-3);
    }

    #[test]
    fn rival_sech_near_fixed_point() {
        // sech solves Q'' - Q + 2 Q^3 = 0, so the rival right-hand side with
        // beta = 2 vanishes up to discretization error.
        let g = build_grid(DomainSpec {
            kind: DomainKind::TruncatedRadialLine { radius: 20.0, dim: 1 },
            n: 8192,
        })
        .unwrap();
        let u = Field::from_fn(&g, |r| 1.0 / r.cosh());
        let p = FlowParams::new(1, 1.0, 0.0).with_beta(2.0);
        let r = RIVAL.rhs(&u, &p).unwrap();
        let res = crate::functionals::lp_norm(&r, 2.0).unwrap();
        assert!(res < 1e-3, "rival residual at sech: {res}");
    }
}
