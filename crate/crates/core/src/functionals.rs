//! Norms and the nonlocal functionals of the flow: L^p norms, the
//! mass-preserving multiplier mu[u], its epsilon-regularization, the
//! Lyapunov functional F[u], and the Hölder lower-bound check on bounded
//! domains.
//!
//! Every norm uses the same quadrature weights as the Laplacian's
//! summation-by-parts pairing, and the H^1 seminorm is defined spectrally
//! as <-Lap u, u>. This keeps the discrete mass and Lyapunov identities
//! exact analogues of the continuous ones instead of holding only up to an
//! order mismatch.

use serde::{Deserialize, Serialize};

use crate::domain::{laplacian, DomainKind, DomainSpec, Field};
use crate::error::{NormFlowError, Result};

/// Roundoff floor for quadrature-exact inequalities at n <= 1e4.
pub const TOL_QUAD: f64 = 1e-10;

/// Parameters of one evolution run: dimension, nonlinearity exponent,
/// frequency, regularization, and the rival-flow coefficient beta.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FlowParams {
    pub d: u32,
    pub sigma: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub beta: f64,
}

impl FlowParams {
    pub fn new(d: u32, sigma: f64, omega: f64) -> Self {
        FlowParams { d, sigma, omega, epsilon: 0.0, beta: 0.0 }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    /// Subcriticality and domain-compatibility checks. Returns warnings for
    /// parameter ranges outside the whole-space existence hypotheses.
    pub fn validate(&self, domain: &DomainSpec) -> Result<Vec<String>> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(NormFlowError::Config(format!(
                "sigma must be finite and >= 0, got {}",
                self.sigma
            )));
        }
        if self.d >= 3 && self.sigma >= 2.0 / (self.d as f64 - 2.0) {
            return Err(NormFlowError::Config(format!(
                "sigma = {} is not subcritical: need sigma < 2/(d-2) = {} for d = {}",
                self.sigma,
                2.0 / (self.d as f64 - 2.0),
                self.d
            )));
        }
        if self.epsilon < 0.0 {
            return Err(NormFlowError::Config("epsilon must be >= 0".into()));
        }
        if domain.kind.dim() != self.d {
            return Err(NormFlowError::Config(format!(
                "params dimension {} does not match domain dimension {}",
                self.d,
                domain.kind.dim()
            )));
        }
        let mut warnings = Vec::new();
        if matches!(domain.kind, DomainKind::TruncatedRadialLine { .. }) && self.d >= 5 {
            let dm2 = self.d as f64 - 2.0;
            let ok = self.sigma < 1.0 / dm2
                || (self.sigma >= 2.0 / self.d as f64 && self.sigma < 2.0 / dm2);
            if !ok {
                warnings.push(format!(
                    "sigma = {} with d = {} on a truncated radial line is outside the \
                     whole-space existence range (sigma < 1/(d-2) or 2/d <= sigma < 2/(d-2))",
                    self.sigma, self.d
                ));
            }
        }
        Ok(warnings)
    }

    /// Exponent of the nonlinearity's Lebesgue norm, 2*sigma + 2.
    pub fn p_nl(&self) -> f64 {
        2.0 * self.sigma + 2.0
    }
}

/// Snapshot of all monitored functionals of a field.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub mass: f64,
    pub grad_sq: f64,
    pub lp_norm: f64,
    pub mu: f64,
    pub f: f64,
    pub holder_slack: Option<f64>,
}

/// |v|^p with a fast path for small integer exponents, which dominate the
/// stepping loops (p = 2*sigma and 2*sigma + 2 with sigma integer or
/// half-integer).
pub fn abs_pow_fn(p: f64) -> impl Fn(f64) -> f64 + Copy {
    let k = p.round();
    let ki = if (p - k).abs() < 1e-13 && (0.0..=16.0).contains(&k) {
        Some(k as i32)
    } else {
        None
    };
    move |v: f64| match ki {
        Some(k) => v.abs().powi(k),
        None => v.abs().powf(p),
    }
}

/// sum_j w_j |u_j|^p, the p-th power of the L^p norm.
pub fn lp_pow_sum(u: &Field, p: f64) -> f64 {
    let pw = abs_pow_fn(p);
    u.grid()
        .quad_weights
        .iter()
        .zip(u.values())
        .map(|(w, v)| w * pw(*v))
        .sum()
}

/// Quadrature-weighted L^p norm.
pub fn lp_norm(u: &Field, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(NormFlowError::Config(format!("lp_norm requires p >= 1, got {p}")));
    }
    u.check_finite()?;
    Ok(lp_pow_sum(u, p).powf(1.0 / p))
}

/// Squared L^2 norm (the mass).
pub fn mass(u: &Field) -> f64 {
    u.inner(u)
}

/// Discrete H^1 seminorm squared, <-Lap u, u>. Nonnegative by the
/// Laplacian's negative semi-definiteness; clamped against roundoff.
pub fn h1_seminorm_sq(u: &Field) -> f64 {
    (-laplacian(u).inner(u)).max(0.0)
}

fn numerator(u: &Field, omega: f64) -> f64 {
    h1_seminorm_sq(u) + omega * mass(u)
}

/// The mass-preserving nonlocal multiplier:
/// (|grad u|^2 + omega |u|^2) / |u|_{2s+2}^{2s+2}.
pub fn mu(u: &Field, params: &FlowParams) -> Result<f64> {
    let denom = lp_pow_sum(u, params.p_nl());
    if denom <= 0.0 {
        return Err(NormFlowError::DegenerateField(
            "L^{2sigma+2} norm vanished; mu is undefined".into(),
        ));
    }
    Ok(numerator(u, params.omega) / denom)
}

/// Epsilon-regularized multiplier; equal to `mu` at epsilon = 0.
pub fn mu_eps(u: &Field, params: &FlowParams) -> Result<f64> {
    if params.epsilon == 0.0 {
        return mu(u, params);
    }
    let denom = lp_pow_sum(u, params.p_nl()) + params.epsilon;
    Ok(numerator(u, params.omega) / denom)
}

/// The Lyapunov functional F[u] = (|grad u|^2 + omega |u|^2) / |u|_{2s+2}^2.
pub fn lyapunov_f(u: &Field, params: &FlowParams) -> Result<f64> {
    let p = params.p_nl();
    let denom = lp_pow_sum(u, p).powf(2.0 / p);
    if denom <= 0.0 {
        return Err(NormFlowError::DegenerateField(
            "L^{2sigma+2} norm vanished; F is undefined".into(),
        ));
    }
    Ok(numerator(u, params.omega) / denom)
}

/// Slack in the Hölder lower bound |u|_{2s+2} >= |u|_2 / Vol^{s/(2s+2)}.
/// Only meaningful on bounded domains.
pub fn holder_lower_bound_slack(u: &Field, params: &FlowParams) -> Result<f64> {
    if !u.grid().spec.kind.is_bounded() {
        return Err(NormFlowError::Config(
            "Hölder lower bound needs a finite-volume domain".into(),
        ));
    }
    let p = params.p_nl();
    let vol = u.grid().volume();
    let l2 = lp_norm(u, 2.0)?;
    Ok(lp_norm(u, p)? - l2 / vol.powf(params.sigma / p))
}

/// Monitored Gagliardo-Nirenberg ratio
/// |u|_{2s+2} / (|u|_2^{1 - ds/(2s+2)} |grad u|^{ds/(2s+2)}).
/// Boundedness along trajectories is what the theory predicts; the
/// constant itself is never asserted.
pub fn gn_ratio(lp: f64, l2_sq: f64, grad_sq: f64, params: &FlowParams) -> f64 {
    let theta = params.d as f64 * params.sigma / params.p_nl();
    lp / (l2_sq.sqrt().powf(1.0 - theta) * grad_sq.sqrt().powf(theta))
}

/// All monitored functionals of a field in one pass.
pub fn report(u: &Field, params: &FlowParams) -> Result<FunctionalReport> {
    let m = mass(u);
    let grad_sq = h1_seminorm_sq(u);
    let lp = lp_norm(u, params.p_nl())?;
    let holder_slack = if u.grid().spec.kind.is_bounded() {
        Some(holder_lower_bound_slack(u, params)?)
    } else {
        None
    };
    Ok(FunctionalReport {
        mass: m,
        grad_sq,
        lp_norm: lp,
        mu: mu_eps(u, params)?,
        f: lyapunov_f(u, params)?,
        holder_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_grid, DomainKind, DomainSpec};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn unit_interval(n: usize) -> Arc<crate::domain::Grid> {
        build_grid(DomainSpec { kind: DomainKind::Interval { a: 0.0, b: 1.0 }, n }).unwrap()
    }

    fn sech_line(n: usize) -> (Arc<crate::domain::Grid>, Field) {
        let g = build_grid(DomainSpec {
            kind: DomainKind::TruncatedRadialLine { radius: 20.0, dim: 1 },
            n,
        })
        .unwrap();
        let u = Field::from_fn(&g, |r| 1.0 / r.cosh());
        (g, u)
    }

    #[test]
    fn lp_norms_of_sine() {
        let g = unit_interval(2048);
        let u = Field::from_fn(&g, |x| (PI * x).sin());
        assert_relative_eq!(lp_norm(&u, 2.0).unwrap(), (0.5f64).sqrt(), max_relative = 1e-5);
        assert_relative_eq!(
            lp_norm(&u, 4.0).unwrap(),
            (3.0f64 / 8.0).powf(0.25),
            max_relative = 1e-5
        );
    }

    #[test]
    fn lp_norm_rejects_p_below_one() {
        let g = unit_interval(16);
        let u = Field::from_fn(&g, |x| x);
        assert!(lp_norm(&u, 0.5).is_err());
    }

    #[test]
    fn l2_norm_of_sech_on_line() {
        let (_, u) = sech_line(4096);
        assert_relative_eq!(lp_norm(&u, 2.0).unwrap(), 2.0f64.sqrt(), epsilon = 1e-4);
    }

    #[test]
    fn h1_seminorm_of_sine_and_zero() {
        let g = unit_interval(2048);
        let u = Field::from_fn(&g, |x| (PI * x).sin());
        assert_relative_eq!(h1_seminorm_sq(&u), PI * PI / 2.0, max_relative = 1e-4);
        assert_eq!(h1_seminorm_sq(&Field::zeros(&g)), 0.0);
    }

    #[test]
    fn h1_seminorm_of_sech() {
        let (_, u) = sech_line(8192);
        assert_relative_eq!(h1_seminorm_sq(&u), 2.0 / 3.0, max_relative = 1e-3);
    }

    #[test]
    fn mu_of_sech_soliton() {
        let (_, u) = sech_line(8192);
        let p = FlowParams::new(1, 1.0, 1.0);
        assert_relative_eq!(mu(&u, &p).unwrap(), 2.0, max_relative = 1e-3);
    }

    #[test]
    fn mu_is_rayleigh_quotient_plus_omega_at_sigma_zero() {
        let g = unit_interval(2048);
        let u = Field::from_fn(&g, |x| (PI * x).sin());
        let p = FlowParams::new(1, 0.0, 0.5);
        assert_relative_eq!(mu(&u, &p).unwrap(), PI * PI + 0.5, max_relative = 1e-4);
    }

    #[test]
    fn mu_homogeneity() {
        let (_, u) = sech_line(4096);
        let p = FlowParams::new(1, 1.0, 1.0);
        let m1 = mu(&u, &p).unwrap();
        let m2 = mu(&u.scale(2.0), &p).unwrap();
        assert_relative_eq!(m2, m1 / 4.0, max_relative = 1e-10);
    }

    #[test]
    fn mu_rejects_vanished_field() {
        let g = unit_interval(32);
        let z = Field::zeros(&g);
        assert!(matches!(
            mu(&z, &FlowParams::new(1, 1.0, 1.0)),
            Err(NormFlowError::DegenerateField(_))
        ));
    }

    #[test]
    fn mu_eps_halves_sech_value() {
        let (_, u) = sech_line(8192);
        let p = FlowParams::new(1, 1.0, 1.0).with_epsilon(4.0 / 3.0);
        assert_relative_eq!(mu_eps(&u, &p).unwrap(), 1.0, max_relative = 2e-3);
    }

    #[test]
    fn mu_eps_of_zero_field_is_zero() {
        let g = unit_interval(32);
        let z = Field::zeros(&g);
        let p = FlowParams::new(1, 1.0, -3.0).with_epsilon(1.0);
        assert_eq!(mu_eps(&z, &p).unwrap(), 0.0);
    }

    #[test]
    fn mu_eps_tiny_epsilon_agrees_with_mu() {
        let g = unit_interval(512);
        let u = Field::from_fn(&g, |x| (PI * x).sin());
        let p0 = FlowParams::new(1, 1.0, 0.0);
        let pe = p0.with_epsilon(1e-12);
        let exact = mu(&u, &p0).unwrap();
        assert_relative_eq!(mu_eps(&u, &pe).unwrap(), exact, max_relative = 1e-10);
    }

    #[test]
    fn lyapunov_of_sech_and_sine() {
        let (_, u) = sech_line(8192);
        let p = FlowParams::new(1, 1.0, 1.0);
        assert_relative_eq!(lyapunov_f(&u, &p).unwrap(), 4.0 / 3.0f64.sqrt(), max_relative = 1e-3);

        let g = unit_interval(2048);
        let s = Field::from_fn(&g, |x| (PI * x).sin());
        let p0 = FlowParams::new(1, 0.0, 0.0);
        assert_relative_eq!(lyapunov_f(&s, &p0).unwrap(), PI * PI, max_relative = 1e-4);
    }

    #[test]
    fn f_numerator_homogeneity() {
        // F[lam u] * |lam u|_{2s+2}^2 = lam^2 * F[u] * |u|_{2s+2}^2
        let (_, u) = sech_line(2048);
        let p = FlowParams::new(1, 1.0, 1.0);
        let lam = 2.0;
        let lhs = lyapunov_f(&u.scale(lam), &p).unwrap()
            * lp_norm(&u.scale(lam), p.p_nl()).unwrap().powi(2);
        let rhs = lam * lam * lyapunov_f(&u, &p).unwrap() * lp_norm(&u, p.p_nl()).unwrap().powi(2);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn f_equals_mu_times_lp_power() {
        let (_, u) = sech_line(1024);
        let p = FlowParams::new(1, 1.0, 1.0);
        let f = lyapunov_f(&u, &p).unwrap();
        let m = mu(&u, &p).unwrap();
        let lp = lp_norm(&u, p.p_nl()).unwrap();
        assert_relative_eq!(f, m * lp.powf(2.0 * p.sigma), max_relative = 1e-12);
    }

    #[test]
    fn holder_slack_cases() {
        let g = unit_interval(512);
        let p = FlowParams::new(1, 1.0, 0.0);

        // constants realize Hölder equality
        let plateau = Field::from_fn(&g, |_| 1.0);
        let s = holder_lower_bound_slack(&plateau, &p).unwrap();
        assert!(s.abs() <= 1e-10, "plateau slack {s}");

        let sine = Field::from_fn(&g, |x| (PI * x).sin());
        let s = holder_lower_bound_slack(&sine, &p).unwrap();
        // interior-node quadrature is exact on these trig polynomials but
        // sees volume n*h = n/(n+1), so compare against the discrete bound
        let expected = (3.0f64 / 8.0).powf(0.25) - 0.5f64.sqrt() / g.volume().powf(0.25);
        assert_relative_eq!(s, expected, epsilon = 1e-12);
        assert!(s >= -TOL_QUAD);
    }

    #[test]
    fn holder_rejected_on_unbounded_domain() {
        let (_, u) = sech_line(128);
        assert!(holder_lower_bound_slack(&u, &FlowParams::new(1, 1.0, 1.0)).is_err());
    }

    #[test]
    fn validation_rules() {
        let interval = DomainSpec { kind: DomainKind::Interval { a: 0.0, b: 1.0 }, n: 16 };
        assert!(FlowParams::new(1, 3.0, 0.0).validate(&interval).is_ok());
        let ball3 = DomainSpec { kind: DomainKind::RadialBall { radius: 1.0, dim: 3 }, n: 16 };
        assert!(FlowParams::new(3, 3.0, 0.0).validate(&ball3).is_err());
        assert!(FlowParams::new(3, 1.0, 0.0).validate(&ball3).is_ok());
        // d >= 5 truncated line outside the existence range only warns
        let line5 =
            DomainSpec { kind: DomainKind::TruncatedRadialLine { radius: 10.0, dim: 5 }, n: 16 };
        let w = FlowParams::new(5, 0.35, 1.0).validate(&line5).unwrap();
        assert_eq!(w.len(), 1);
        let w = FlowParams::new(5, 0.5, 1.0).validate(&line5).unwrap();
        assert!(w.is_empty());
    }
}
