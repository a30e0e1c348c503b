//! Spatial discretization: uniform grids on an interval, a radial ball in
//! d dimensions, or a Dirichlet-truncated radial line, together with the
//! quadrature weights and the discrete Dirichlet Laplacian.
//!
//! Interval grids place nodes strictly inside (a, b) with spacing
//! h = (b - a)/(n + 1). Radial grids are half-shifted: nodes sit at
//! (j - 1/2)h with h = R/n, cell faces at integer multiples of h, so the
//! origin is never a sample point and the coordinate singularity of
//! u_rr + ((d-1)/r) u_r never appears. The radial operator is assembled in
//! conservative flux form with exact shell volumes as quadrature weights,
//! which makes it symmetric and negative semi-definite under the discrete
//! inner product and reproduces d * u_rr(0) at the innermost node.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{NormFlowError, Result};

/// Shape of the spatial domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DomainKind {
    /// Bounded interval (a, b) with homogeneous Dirichlet ends.
    Interval { a: f64, b: f64 },
    /// Ball of radius `radius` in `dim` dimensions, radial symmetry assumed.
    RadialBall { radius: f64, dim: u32 },
    /// Radial half-line truncated at `radius` with an artificial Dirichlet
    /// condition; stands in for all of R^d when the profile decays fast
    /// enough that exp(-sqrt(omega) * radius) is below tolerance.
    TruncatedRadialLine { radius: f64, dim: u32 },
}

impl DomainKind {
    pub fn is_radial(&self) -> bool {
        !matches!(self, DomainKind::Interval { .. })
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, DomainKind::TruncatedRadialLine { .. })
    }

    pub fn dim(&self) -> u32 {
        match self {
            DomainKind::Interval { .. } => 1,
            DomainKind::RadialBall { dim, .. } | DomainKind::TruncatedRadialLine { dim, .. } => {
                *dim
            }
        }
    }
}

/// Domain shape plus interior node count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub n: usize,
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(NormFlowError::Config(format!(
                "need at least 3 interior nodes, got {}",
                self.n
            )));
        }
        match self.kind {
            DomainKind::Interval { a, b } => {
                if !(a < b) {
                    return Err(NormFlowError::Config(format!(
                        "interval requires a < b, got a={a}, b={b}"
                    )));
                }
            }
            DomainKind::RadialBall { radius, dim }
            | DomainKind::TruncatedRadialLine { radius, dim } => {
                if !(radius > 0.0) {
                    return Err(NormFlowError::Config(format!(
                        "radial domain requires R > 0, got {radius}"
                    )));
                }
                if dim < 1 {
                    return Err(NormFlowError::Config("dimension must be >= 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// Surface measure of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
pub fn unit_sphere_area(dim: u32) -> f64 {
    let d = dim as f64;
    2.0 * PI.powf(d / 2.0) / gamma_half(dim)
}

// Gamma(d/2) for integer d >= 1 via the half-integer recursion.
fn gamma_half(d: u32) -> f64 {
    match d {
        1 => PI.sqrt(),
        2 => 1.0,
        _ => (d as f64 / 2.0 - 1.0) * gamma_half(d - 2),
    }
}

/// Symmetric tridiagonal operator stored by bands. `sub[0]` and
/// `sup[n-1]` are unused.
#[derive(Debug, Clone)]
pub struct Tridiag {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl Tridiag {
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        for j in 0..n {
            let mut v = self.diag[j] * x[j];
            if j > 0 {
                v += self.sub[j] * x[j - 1];
            }
            if j + 1 < n {
                v += self.sup[j] * x[j + 1];
            }
            out[j] = v;
        }
    }

    /// Thomas algorithm. Fails on a vanishing pivot.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = rhs.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut piv = self.diag[0];
        if piv == 0.0 {
            return Err(NormFlowError::Stability("singular tridiagonal system".into()));
        }
        c[0] = self.sup[0] / piv;
        d[0] = rhs[0] / piv;
        for j in 1..n {
            piv = self.diag[j] - self.sub[j] * c[j - 1];
            if piv == 0.0 {
                return Err(NormFlowError::Stability("singular tridiagonal system".into()));
            }
            if j + 1 < n {
                c[j] = self.sup[j] / piv;
            }
            d[j] = (rhs[j] - self.sub[j] * d[j - 1]) / piv;
        }
        for j in (0..n - 1).rev() {
            d[j] = d[j] - c[j] * d[j + 1];
        }
        Ok(d)
    }
}

/// Immutable discretized domain: node coordinates, quadrature weights with
/// the radial measure folded in, and the assembled Laplacian bands.
#[derive(Debug)]
pub struct Grid {
    pub spec: DomainSpec,
    pub nodes: Vec<f64>,
    pub h: f64,
    pub quad_weights: Vec<f64>,
    lap: Tridiag,
}

impl Grid {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Total measure of the domain as seen by the quadrature rule.
    pub fn volume(&self) -> f64 {
        self.quad_weights.iter().sum()
    }

    pub fn laplacian_bands(&self) -> &Tridiag {
        &self.lap
    }

    /// Weighted inner product sum_j w_j a_j b_j.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.quad_weights
            .iter()
            .zip(a.iter().zip(b.iter()))
            .map(|(w, (x, y))| w * x * y)
            .sum()
    }
}

/// Build the grid for a validated spec.
pub fn build_grid(spec: DomainSpec) -> Result<Arc<Grid>> {
    spec.validate()?;
    let n = spec.n;
    let grid = match spec.kind {
        DomainKind::Interval { a, b } => {
            let h = (b - a) / (n as f64 + 1.0);
            let nodes: Vec<f64> = (1..=n).map(|j| a + j as f64 * h).collect();
            let quad_weights = vec![h; n];
            let inv_h2 = 1.0 / (h * h);
            let lap = Tridiag {
                sub: vec![inv_h2; n],
                diag: vec![-2.0 * inv_h2; n],
                sup: vec![inv_h2; n],
            };
            Grid { spec, nodes, h, quad_weights, lap }
        }
        DomainKind::RadialBall { radius, dim }
        | DomainKind::TruncatedRadialLine { radius, dim } => {
            let h = radius / n as f64;
            let d = dim as f64;
            let s = unit_sphere_area(dim);
            let nodes: Vec<f64> = (1..=n).map(|j| (j as f64 - 0.5) * h).collect();
            // Face radii j*h, j = 0..=n. Face 0 carries zero flux: for d >= 2
            // the area vanishes, for d = 1 even symmetry across the origin
            // imposes it.
            let face_area: Vec<f64> = (0..=n)
                .map(|j| if j == 0 { 0.0 } else { s * (j as f64 * h).powi(dim as i32 - 1) })
                .collect();
            let quad_weights: Vec<f64> = (1..=n)
                .map(|j| {
                    let lo = (j as f64 - 1.0) * h;
                    let hi = j as f64 * h;
                    s * (hi.powf(d) - lo.powf(d)) / d
                })
                .collect();
            let mut sub = vec![0.0; n];
            let mut diag = vec![0.0; n];
            let mut sup = vec![0.0; n];
            for j in 0..n {
                let w = quad_weights[j];
                let a_lo = face_area[j];
                // Outer boundary: Dirichlet on the face r = R via ghost
                // reflection, doubling the outermost flux coefficient.
                let a_hi = if j + 1 == n { 2.0 * face_area[n] } else { face_area[j + 1] };
                if j > 0 {
                    sub[j] = a_lo / (h * w);
                }
                if j + 1 < n {
                    sup[j] = face_area[j + 1] / (h * w);
                }
                diag[j] = -(a_lo + a_hi) / (h * w);
            }
            let lap = Tridiag { sub, diag, sup };
            Grid { spec, nodes, h, quad_weights, lap }
        }
    };
    Ok(Arc::new(grid))
}

/// Real-valued samples at the interior nodes of a grid; the Dirichlet
/// boundary value 0 is implicit.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(NormFlowError::Config(format!(
                "field length {} does not match grid size {}",
                values.len(),
                grid.n()
            )));
        }
        let f = Field { grid, values };
        f.check_finite()?;
        Ok(f)
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes.iter().map(|&x| f(x)).collect();
        Field { grid: Arc::clone(grid), values }
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Field { grid: Arc::clone(grid), values: vec![0.0; grid.n()] }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(NormFlowError::Stability("field contains non-finite values".into()))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// self + c * other, on the same grid.
    pub fn axpy(&self, c: f64, other: &Field) -> Field {
        debug_assert!(Arc::ptr_eq(&self.grid, &other.grid));
        Field {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Field {
        self.map(|v| c * v)
    }

    /// Weighted inner product with another field on the same grid.
    pub fn inner(&self, other: &Field) -> f64 {
        self.grid.inner(&self.values, &other.values)
    }
}

/// Second-order discrete Dirichlet Laplacian.
pub fn laplacian(u: &Field) -> Field {
    let mut out = vec![0.0; u.values().len()];
    u.grid().laplacian_bands().apply(u.values(), &mut out);
    Field { grid: Arc::clone(u.grid()), values: out }
}

/// Backward-Euler resolvent for the stiff linear part: solves
/// (I - dt (Lap - omega I)) v = u by the Thomas algorithm.
pub fn apply_semi_implicit_resolvent(u: &Field, dt: f64, omega: f64) -> Result<Field> {
    if !(dt > 0.0) {
        return Err(NormFlowError::Config(format!("resolvent requires dt > 0, got {dt}")));
    }
    u.check_finite()?;
    let lap = u.grid().laplacian_bands();
    let n = u.values().len();
    let factor = 1.0 + dt * omega;
    let sys = Tridiag {
        sub: lap.sub.iter().map(|v| -dt * v).collect(),
        diag: lap.diag.iter().map(|v| factor - dt * v).collect(),
        sup: lap.sup.iter().map(|v| -dt * v).collect(),
    };
    let sol = sys.solve(u.values())?;
    debug_assert_eq!(sol.len(), n);
    Field::new(Arc::clone(u.grid()), sol)
}
