//! Flat key-value run configuration with dotted keys.
//!
//! The format is one `key = value` pair per line, `#` starts a comment:
//!
//! ```text
//! domain.kind = truncated_radial_line
//! domain.radius = 20
//! domain.dim = 1
//! domain.n = 2048
//! params.sigma = 1
//! params.omega = 1
//! flow.law = main
//! scheme.kind = semi_implicit
//! scheme.dt = 1e-4
//! scheme.t_end = 40
//! initial.profile = gaussian
//! initial.amplitude = 1
//! initial.target_mass = 2
//! output.csv = run.csv
//! ```

use std::collections::HashMap;
use std::path::PathBuf;

use crate::domain::{DomainKind, DomainSpec};
use crate::error::{NormFlowError, Result};
use crate::flow::{SchemeKind, SchemeSpec, DEFAULT_BLOWUP_FACTOR, TOL_CONV, TOL_RES};
use crate::functionals::FlowParams;

#[derive(Debug, Clone)]
pub enum InitialCondition {
    NamedProfile { name: String, amplitude: f64 },
    FromFile(PathBuf),
}

#[derive(Debug, Clone, Default)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub snapshots: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub state: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub domain: DomainSpec,
    pub params: FlowParams,
    /// None defers to the characteristic-time default dt = 1e-4 / |F[u0]|.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub scheme_kind: SchemeKind,
    pub blowup_h1_factor: f64,
    pub tol_conv: f64,
    pub tol_res: f64,
    pub record_every: usize,
    pub law: String,
    pub initial: InitialCondition,
    pub target_mass: Option<f64>,
    pub outputs: OutputPaths,
    pub seed: u64,
}

impl RunConfig {
    pub fn scheme(&self, dt: f64) -> SchemeSpec {
        SchemeSpec {
            kind: self.scheme_kind,
            dt,
            t_end: self.t_end,
            blowup_h1_factor: self.blowup_h1_factor,
            tol_conv: self.tol_conv,
            tol_res: self.tol_res,
            record_every: self.record_every,
        }
    }
}

struct KeyMap {
    values: HashMap<String, String>,
}

impl KeyMap {
    fn take(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| NormFlowError::Config(format!("{key}: not a number: '{v}'"))),
        }
    }

    fn need_f64(&mut self, key: &str) -> Result<f64> {
        self.take_f64(key)?
            .ok_or_else(|| NormFlowError::Config(format!("missing key '{key}'")))
    }

    fn take_usize(&mut self, key: &str) -> Result<Option<usize>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| NormFlowError::Config(format!("{key}: not an integer: '{v}'"))),
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut values = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            NormFlowError::Config(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        values.insert(key.trim().to_string(), value.trim().to_string());
    }
    let mut map = KeyMap { values };

    let kind_name = map
        .take("domain.kind")
        .ok_or_else(|| NormFlowError::Config("missing key 'domain.kind'".into()))?;
    let kind = match kind_name.as_str() {
        "interval" => DomainKind::Interval {
            a: map.need_f64("domain.a")?,
            b: map.need_f64("domain.b")?,
        },
        "radial_ball" => DomainKind::RadialBall {
            radius: map.need_f64("domain.radius")?,
            dim: map.need_f64("domain.dim")? as u32,
        },
        "truncated_radial_line" => DomainKind::TruncatedRadialLine {
            radius: map.need_f64("domain.radius")?,
            dim: map.need_f64("domain.dim")? as u32,
        },
        other => {
            return Err(NormFlowError::Config(format!(
                "domain.kind: unknown kind '{other}'"
            )))
        }
    };
    let n = map
        .take_usize("domain.n")?
        .ok_or_else(|| NormFlowError::Config("missing key 'domain.n'".into()))?;
    let domain = DomainSpec { kind, n };

    let params = FlowParams {
        d: kind.dim(),
        sigma: map.need_f64("params.sigma")?,
        omega: map.need_f64("params.omega")?,
        epsilon: map.take_f64("params.epsilon")?.unwrap_or(0.0),
        beta: map.take_f64("params.beta")?.unwrap_or(0.0),
    };

    let law = map.take("flow.law").unwrap_or_else(|| "main".to_string());

    let scheme_kind = match map
        .take("scheme.kind")
        .unwrap_or_else(|| "semi_implicit".to_string())
        .as_str()
    {
        "semi_implicit" => SchemeKind::SemiImplicitEuler,
        "projected" => SchemeKind::SemiImplicitEulerProjected,
        "rk4" => SchemeKind::ExplicitRk4,
        other => {
            return Err(NormFlowError::Config(format!(
                "scheme.kind: unknown scheme '{other}'"
            )))
        }
    };
    let dt = map.take_f64("scheme.dt")?;
    let t_end = map.need_f64("scheme.t_end")?;
    let blowup_h1_factor = map
        .take_f64("scheme.blowup_h1_factor")?
        .unwrap_or(DEFAULT_BLOWUP_FACTOR);
    let tol_conv = map.take_f64("scheme.tol_conv")?.unwrap_or(TOL_CONV);
    let tol_res = map.take_f64("scheme.tol_res")?.unwrap_or(TOL_RES);
    let record_every = map.take_usize("scheme.record_every")?.unwrap_or(1);

    let initial = match (map.take("initial.profile"), map.take("initial.file")) {
        (Some(name), None) => InitialCondition::NamedProfile {
            name,
            amplitude: map.take_f64("initial.amplitude")?.unwrap_or(1.0),
        },
        (None, Some(path)) => InitialCondition::FromFile(PathBuf::from(path)),
        (Some(_), Some(_)) => {
            return Err(NormFlowError::Config(
                "give either initial.profile or initial.file, not both".into(),
            ))
        }
        (None, None) => {
            return Err(NormFlowError::Config(
                "missing initial condition: set initial.profile or initial.file".into(),
            ))
        }
    };
    let target_mass = map.take_f64("initial.target_mass")?;
    if let Some(m) = target_mass {
        if !(m > 0.0) {
            return Err(NormFlowError::Config("initial.target_mass must be positive".into()));
        }
    }

    let outputs = OutputPaths {
        csv: map.take("output.csv").map(PathBuf::from),
        snapshots: map.take("output.snapshots").map(PathBuf::from),
        report: map.take("output.report").map(PathBuf::from),
        checkpoint: map.take("output.checkpoint").map(PathBuf::from),
        state: map.take("output.state").map(PathBuf::from),
    };

    let seed = map
        .take("seed")
        .map(|v| {
            v.parse::<u64>()
                .map_err(|_| NormFlowError::Config(format!("seed: not an integer: '{v}'")))
        })
        .transpose()?
        .unwrap_or(0);

    if !map.values.is_empty() {
        let mut keys: Vec<&String> = map.values.keys().collect();
        keys.sort();
        return Err(NormFlowError::Config(format!("unknown config keys: {keys:?}")));
    }

    domain.validate()?;
    params.validate(&domain)?;

    Ok(RunConfig {
        domain,
        params,
        dt,
        t_end,
        scheme_kind,
        blowup_h1_factor,
        tol_conv,
        tol_res,
        record_every,
        law,
        initial,
        target_mass,
        outputs,
        seed,
    })
}
