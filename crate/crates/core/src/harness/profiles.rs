//! Named initial profiles for configuring runs.

use std::sync::Arc;

use crate::domain::{DomainKind, Field, Grid};
use crate::error::{NormFlowError, Result};

pub const NAMES: &[&str] = &["gaussian", "sine", "parabola", "plateau", "sech"];

/// Build a named initial profile scaled by `amplitude`. On an interval the
/// shapes are expressed in the normalized coordinate (x - a)/(b - a); on
/// radial domains in the radius.
pub fn named_profile(grid: &Arc<Grid>, name: &str, amplitude: f64) -> Result<Field> {
    if !(amplitude > 0.0) {
        return Err(NormFlowError::Config(format!(
            "profile amplitude must be positive, got {amplitude}"
        )));
    }
    let field = match grid.spec.kind {
        DomainKind::Interval { a, b } => {
            let len = b - a;
            match name {
                "gaussian" => Field::from_fn(grid, |x| {
                    let xi = (x - a) / len - 0.5;
                    (-18.0 * xi * xi).exp()
                }),
                "sine" => Field::from_fn(grid, |x| (std::f64::consts::PI * (x - a) / len).sin()),
                "parabola" => Field::from_fn(grid, |x| {
                    let xi = (x - a) / len;
                    xi * (1.0 - xi)
                }),
                "plateau" => Field::from_fn(grid, |_| 1.0),
                "sech" => Field::from_fn(grid, |x| {
                    let xi = (x - a) / len - 0.5;
                    1.0 / (12.0 * xi).cosh()
                }),
                _ => {
                    return Err(NormFlowError::Config(format!(
                        "unknown profile '{name}', expected one of {NAMES:?}"
                    )))
                }
            }
        }
        DomainKind::RadialBall { radius, .. } | DomainKind::TruncatedRadialLine { radius, .. } => {
            match name {
                "gaussian" => Field::from_fn(grid, |r| (-r * r).exp()),
                "sine" => Field::from_fn(grid, |r| (std::f64::consts::PI * r / radius).sin()),
                "parabola" => Field::from_fn(grid, |r| 1.0 - (r / radius).powi(2)),
                "plateau" => Field::from_fn(grid, |_| 1.0),
                "sech" => Field::from_fn(grid, |r| 1.0 / r.cosh()),
                _ => {
                    return Err(NormFlowError::Config(format!(
                        "unknown profile '{name}', expected one of {NAMES:?}"
                    )))
                }
            }
        }
    };
    Ok(field.scale(amplitude))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_grid, DomainSpec};

    #[test]
    fn profiles_build_on_both_domain_families() {
        let interval =
            build_grid(DomainSpec { kind: DomainKind::Interval { a: 0.0, b: 2.0 }, n: 32 })
                .unwrap();
        let line = build_grid(DomainSpec {
            kind: DomainKind::TruncatedRadialLine { radius: 10.0, dim: 1 },
            n: 32,
        })
        .unwrap();
        for name in NAMES {
            assert!(named_profile(&interval, name, 1.0).is_ok());
            assert!(named_profile(&line, name, 1.0).is_ok());
        }
        assert!(named_profile(&interval, "vortex", 1.0).is_err());
        assert!(named_profile(&interval, "sine", -1.0).is_err());
    }
}
