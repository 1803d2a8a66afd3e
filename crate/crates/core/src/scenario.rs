//! Scenario configuration: a flat TOML file of dotted keys.
//!
//! ```toml
//! name = "blowup-exact"
//! solver = "both"                 # lagrangian | eulerian | both
//! kernel.kind = "step"            # step | smoothed | closed_form | zero
//! kernel.alpha = 0.5              # smoothed only
//! kernel.n = 36                   # smoothed only
//! kernel.shape = "hat"            # closed_form only: hat | parabolic | exponential | cauchy
//! kernel.scale = 0.5              # closed_form only
//! velocity.kind = "identity"      # identity | affine_desired | constant
//! velocity.desired = 0.5          # affine_desired / constant
//! datum.intervals = [[0.0, 0.5, 2.0]]   # [a, b, value] on ]a, b[
//! particles = 4000
//! dt = 1e-4
//! cells = 4000
//! cfl = 0.5
//! t_end = 0.49
//! snapshot_every = 100            # particle steps between snapshots
//! eulerian.t_max = 0.45
//! domain.min = -0.5
//! domain.max = 1.5
//! deposit.cells = 1000
//! output.dir = "out"
//! study.alphas = [0.0, 0.5, 1.0]
//! study.n = [18, 36, 72]
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Value;

use crate::analysis::StudyConfig;
use crate::datum::{Datum, DatumError, DatumPiece};
use crate::fields::GridSpec;
use crate::kernels::{make_closed_form, make_smoothed_kernel, make_step_kernel, make_zero_kernel, Kernel, KernelError};
use crate::velocity::{make_affine_desired_velocity, make_constant_velocity, make_identity_velocity, VelocityModel};

pub const BUILTIN_SCENARIOS: [&str; 3] = ["blowup-exact", "counterexample", "pedestrian-demo"];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {msg}")]
    BadValue { key: String, msg: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("unknown built-in scenario `{0}`")]
    UnknownScenario(String),
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum KernelSpec {
    Step,
    Zero,
    Smoothed { alpha: f64, n: u32 },
    ClosedForm { shape: String, scale: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum VelocitySpec {
    Identity,
    AffineDesired { desired: f64 },
    Constant { value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverSpec {
    Lagrangian,
    Eulerian,
    Both,
}

impl SolverSpec {
    pub fn lagrangian(self) -> bool {
        matches!(self, SolverSpec::Lagrangian | SolverSpec::Both)
    }

    pub fn eulerian(self) -> bool {
        matches!(self, SolverSpec::Eulerian | SolverSpec::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySpec {
    pub alphas: Vec<f64>,
    pub n: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub kernel: KernelSpec,
    pub velocity: VelocitySpec,
    /// `(a, b, value)` pieces
    pub datum: Vec<(f64, f64, f64)>,
    pub solver: SolverSpec,
    pub particles: usize,
    pub dt: f64,
    pub cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub snapshot_every: u64,
    pub eulerian_t_max: f64,
    pub domain: (f64, f64),
    pub deposit_cells: usize,
    pub output_dir: Option<String>,
    pub study: Option<StudySpec>,
}

const KNOWN_KEYS: [&str; 23] = [
    "name",
    "solver",
    "kernel.kind",
    "kernel.alpha",
    "kernel.n",
    "kernel.shape",
    "kernel.scale",
    "velocity.kind",
    "velocity.desired",
    "datum.intervals",
    "particles",
    "dt",
    "cells",
    "cfl",
    "t_end",
    "snapshot_every",
    "eulerian.t_max",
    "domain.min",
    "domain.max",
    "deposit.cells",
    "output.dir",
    "study.alphas",
    "study.n",
];

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

/// Parses an override value as a TOML literal, falling back to a bare string.
fn parse_literal(raw: &str) -> Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

struct Flat(BTreeMap<String, Value>);

impl Flat {
    fn bad(key: &str, msg: &str) -> ConfigError {
        ConfigError::BadValue {
            key: key.into(),
            msg: msg.into(),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(Self::bad(key, "expected a number")),
        }
    }

    fn uint(&self, key: &str) -> Result<Option<u64>, ConfigError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(_) => Err(Self::bad(key, "expected a non-negative integer")),
        }
    }

    fn str(&self, key: &str) -> Result<Option<String>, ConfigError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(Self::bad(key, "expected a string")),
        }
    }

    fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(i) => Ok(*i as f64),
                    _ => Err(Self::bad(key, "expected a list of numbers")),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(_) => Err(Self::bad(key, "expected a list")),
        }
    }
}

impl ScenarioConfig {
    /// Parses and validates a config file's contents.
    pub fn from_toml_str(src: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = toml::from_str(src).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let mut flat = BTreeMap::new();
        flatten("", &table, &mut flat);
        Self::from_flat(flat)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let src = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&src)
    }

    /// A named built-in scenario.
    pub fn builtin(name: &str) -> Result<Self, ConfigError> {
        let src = match name {
            "blowup-exact" => BLOWUP_EXACT,
            "counterexample" => COUNTEREXAMPLE,
            "pedestrian-demo" => PEDESTRIAN_DEMO,
            other => return Err(ConfigError::UnknownScenario(other.to_string())),
        };
        Self::from_toml_str(src)
    }

    /// Applies `key=value` overrides (values are TOML literals) and revalidates.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self, ConfigError> {
        let mut flat = self.to_flat();
        for o in overrides {
            let o = o.as_ref();
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| ConfigError::Parse(format!("override `{o}` is not key=value")))?;
            flat.insert(k.trim().to_string(), parse_literal(v.trim()));
        }
        Self::from_flat(flat)
    }

    fn from_flat(map: BTreeMap<String, Value>) -> Result<Self, ConfigError> {
        for k in map.keys() {
            if !KNOWN_KEYS.contains(&k.as_str()) {
                return Err(ConfigError::UnknownKey(k.clone()));
            }
        }
        let f = Flat(map);
        let name = f.str("name")?.unwrap_or_else(|| "scenario".into());
        let kernel = match f.str("kernel.kind")?.as_deref().unwrap_or("step") {
            "step" => KernelSpec::Step,
            "zero" => KernelSpec::Zero,
            "smoothed" => KernelSpec::Smoothed {
                alpha: f.f64("kernel.alpha")?.ok_or_else(|| Flat::bad("kernel.alpha", "required for smoothed kernels"))?,
                n: f.uint("kernel.n")?.ok_or_else(|| Flat::bad("kernel.n", "required for smoothed kernels"))? as u32,
            },
            "closed_form" => KernelSpec::ClosedForm {
                shape: f.str("kernel.shape")?.ok_or_else(|| Flat::bad("kernel.shape", "required for closed_form kernels"))?,
                scale: f.f64("kernel.scale")?.unwrap_or(1.0),
            },
            other => return Err(Flat::bad("kernel.kind", &format!("unknown kind `{other}`"))),
        };
        let velocity = match f.str("velocity.kind")?.as_deref().unwrap_or("identity") {
            "identity" => VelocitySpec::Identity,
            "affine_desired" => VelocitySpec::AffineDesired {
                desired: f.f64("velocity.desired")?.unwrap_or(0.0),
            },
            "constant" => VelocitySpec::Constant {
                value: f.f64("velocity.desired")?.unwrap_or(0.0),
            },
            other => return Err(Flat::bad("velocity.kind", &format!("unknown kind `{other}`"))),
        };
        let datum = match f.0.get("datum.intervals") {
            None => return Err(Flat::bad("datum.intervals", "required")),
            Some(Value::Array(rows)) => rows
                .iter()
                .map(|row| match row {
                    Value::Array(v) if v.len() == 3 => {
                        let num = |x: &Value| match x {
                            Value::Float(y) => Ok(*y),
                            Value::Integer(i) => Ok(*i as f64),
                            _ => Err(Flat::bad("datum.intervals", "entries must be numbers")),
                        };
                        Ok((num(&v[0])?, num(&v[1])?, num(&v[2])?))
                    }
                    _ => Err(Flat::bad("datum.intervals", "each entry must be [a, b, value]")),
                })
                .collect::<Result<Vec<_>, _>>()?,
            Some(_) => return Err(Flat::bad("datum.intervals", "expected a list of [a, b, value]")),
        };
        let solver = match f.str("solver")?.as_deref().unwrap_or("lagrangian") {
            "lagrangian" => SolverSpec::Lagrangian,
            "eulerian" => SolverSpec::Eulerian,
            "both" => SolverSpec::Both,
            other => return Err(Flat::bad("solver", &format!("unknown solver `{other}`"))),
        };
        let study = match (f.f64_list("study.alphas")?, f.0.get("study.n")) {
            (None, None) => None,
            (alphas, n) => {
                let n = match n {
                    None => Vec::new(),
                    Some(Value::Array(a)) => a
                        .iter()
                        .map(|v| match v {
                            Value::Integer(i) if *i > 0 => Ok(*i as u32),
                            _ => Err(Flat::bad("study.n", "expected positive integers")),
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                    Some(_) => return Err(Flat::bad("study.n", "expected a list")),
                };
                Some(StudySpec {
                    alphas: alphas.unwrap_or_default(),
                    n,
                })
            }
        };
        let cfg = ScenarioConfig {
            name,
            kernel,
            velocity,
            datum,
            solver,
            particles: f.uint("particles")?.unwrap_or(2000) as usize,
            dt: f.f64("dt")?.unwrap_or(1e-3),
            cells: f.uint("cells")?.unwrap_or(1000) as usize,
            cfl: f.f64("cfl")?.unwrap_or(0.5),
            t_end: f.f64("t_end")?.ok_or_else(|| Flat::bad("t_end", "required"))?,
            snapshot_every: f.uint("snapshot_every")?.unwrap_or(100),
            eulerian_t_max: f.f64("eulerian.t_max")?.unwrap_or(0.45),
            domain: (
                f.f64("domain.min")?.ok_or_else(|| Flat::bad("domain.min", "required"))?,
                f.f64("domain.max")?.ok_or_else(|| Flat::bad("domain.max", "required"))?,
            ),
            deposit_cells: f.uint("deposit.cells")?.unwrap_or(1000) as usize,
            output_dir: f.str("output.dir")?,
            study,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Inverse of parsing: the dotted-key map.
    pub fn to_flat(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        match &self.kernel {
            KernelSpec::Step => {
                m.insert("kernel.kind".into(), Value::String("step".into()));
            }
            KernelSpec::Zero => {
                m.insert("kernel.kind".into(), Value::String("zero".into()));
            }
            KernelSpec::Smoothed { alpha, n } => {
                m.insert("kernel.kind".into(), Value::String("smoothed".into()));
                m.insert("kernel.alpha".into(), Value::Float(*alpha));
                m.insert("kernel.n".into(), Value::Integer(*n as i64));
            }
            KernelSpec::ClosedForm { shape, scale } => {
                m.insert("kernel.kind".into(), Value::String("closed_form".into()));
                m.insert("kernel.shape".into(), Value::String(shape.clone()));
                m.insert("kernel.scale".into(), Value::Float(*scale));
            }
        }
        match &self.velocity {
            VelocitySpec::Identity => {
                m.insert("velocity.kind".into(), Value::String("identity".into()));
            }
            VelocitySpec::AffineDesired { desired } => {
                m.insert("velocity.kind".into(), Value::String("affine_desired".into()));
                m.insert("velocity.desired".into(), Value::Float(*desired));
            }
            VelocitySpec::Constant { value } => {
                m.insert("velocity.kind".into(), Value::String("constant".into()));
                m.insert("velocity.desired".into(), Value::Float(*value));
            }
        }
        m.insert(
            "datum.intervals".into(),
            Value::Array(
                self.datum
                    .iter()
                    .map(|&(a, b, v)| Value::Array(vec![Value::Float(a), Value::Float(b), Value::Float(v)]))
                    .collect(),
            ),
        );
        let solver = match self.solver {
            SolverSpec::Lagrangian => "lagrangian",
            SolverSpec::Eulerian => "eulerian",
            SolverSpec::Both => "both",
        };
        m.insert("solver".into(), Value::String(solver.into()));
        m.insert("particles".into(), Value::Integer(self.particles as i64));
        m.insert("dt".into(), Value::Float(self.dt));
        m.insert("cells".into(), Value::Integer(self.cells as i64));
        m.insert("cfl".into(), Value::Float(self.cfl));
        m.insert("t_end".into(), Value::Float(self.t_end));
        m.insert("snapshot_every".into(), Value::Integer(self.snapshot_every as i64));
        m.insert("eulerian.t_max".into(), Value::Float(self.eulerian_t_max));
        m.insert("domain.min".into(), Value::Float(self.domain.0));
        m.insert("domain.max".into(), Value::Float(self.domain.1));
        m.insert("deposit.cells".into(), Value::Integer(self.deposit_cells as i64));
        if let Some(d) = &self.output_dir {
            m.insert("output.dir".into(), Value::String(d.clone()));
        }
        if let Some(s) = &self.study {
            m.insert(
                "study.alphas".into(),
                Value::Array(s.alphas.iter().map(|a| Value::Float(*a)).collect()),
            );
            m.insert(
                "study.n".into(),
                Value::Array(s.n.iter().map(|n| Value::Integer(*n as i64)).collect()),
            );
        }
        m
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if !(self.t_end > 0.0) {
            return invalid("t_end must be positive");
        }
        if self.particles < 2 {
            return invalid("particles must be at least 2");
        }
        if !(self.dt > 0.0) {
            return invalid("dt must be positive");
        }
        if self.cells < 2 || self.deposit_cells < 2 {
            return invalid("cells and deposit.cells must be at least 2");
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return invalid("cfl must lie in (0, 1]");
        }
        if !(self.eulerian_t_max > 0.0) {
            return invalid("eulerian.t_max must be positive");
        }
        if !(self.domain.0 < self.domain.1) {
            return invalid("domain.min must be below domain.max");
        }
        if self.snapshot_every == 0 {
            return invalid("snapshot_every must be positive");
        }
        let datum = self.datum()?;
        if let Some(b) = datum.support_box() {
            if b[0].0 < self.domain.0 || b[0].1 > self.domain.1 {
                return invalid("datum support must lie inside the domain");
            }
        }
        self.kernel()?;
        if let Some(s) = &self.study {
            if s.alphas.is_empty() {
                return invalid("study.alphas is empty");
            }
            if s.n.is_empty() {
                return invalid("study.n is empty");
            }
            if s.alphas.iter().any(|a| !(0.0..=1.0).contains(a)) {
                return invalid("study.alphas must lie in [0, 1]");
            }
            if s.n.iter().any(|&n| n < 18) {
                return invalid("study.n entries must be at least 18");
            }
        }
        Ok(())
    }

    pub fn datum(&self) -> Result<Datum, ConfigError> {
        Ok(Datum::new(
            self.datum.iter().map(|&(a, b, v)| DatumPiece::interval(a, b, v)).collect(),
        )?)
    }

    pub fn kernel(&self) -> Result<Kernel, ConfigError> {
        Ok(match &self.kernel {
            KernelSpec::Step => make_step_kernel(),
            KernelSpec::Zero => make_zero_kernel(),
            KernelSpec::Smoothed { alpha, n } => make_smoothed_kernel(*alpha, *n)?.into_kernel(),
            KernelSpec::ClosedForm { shape, scale } => {
                if !(*scale > 0.0) {
                    return Err(Flat::bad("kernel.scale", "must be positive"));
                }
                make_closed_form(shape, *scale).ok_or_else(|| Flat::bad("kernel.shape", &format!("unknown shape `{shape}`")))?
            }
        })
    }

    pub fn velocity(&self) -> VelocityModel {
        match self.velocity {
            VelocitySpec::Identity => make_identity_velocity(),
            VelocitySpec::AffineDesired { desired } => make_affine_desired_velocity(desired),
            VelocitySpec::Constant { value } => make_constant_velocity(value),
        }
    }

    pub fn grid_spec(&self) -> Result<GridSpec, ConfigError> {
        GridSpec::new(self.domain.0, self.domain.1, self.cells).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn deposit_spec(&self) -> Result<GridSpec, ConfigError> {
        GridSpec::new(self.domain.0, self.domain.1, self.deposit_cells).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Settings for the concentration study derived from this scenario.
    pub fn study_config(&self) -> Result<StudyConfig, ConfigError> {
        Ok(StudyConfig {
            particles: self.particles,
            dt: self.dt,
            t_end: self.t_end,
            snapshot_every: self.snapshot_every,
            deposit: self.deposit_spec()?,
            ..StudyConfig::default()
        })
    }

    /// `(α, n)` grid of the study, in row-major order over α.
    pub fn study_grid(&self) -> Option<Vec<(f64, u32)>> {
        let s = self.study.as_ref()?;
        Some(s.alphas.iter().flat_map(|&a| s.n.iter().map(move |&n| (a, n))).collect())
    }
}

const BLOWUP_EXACT: &str = r#"
name = "blowup-exact"
solver = "both"
kernel.kind = "step"
velocity.kind = "identity"
datum.intervals = [[0.0, 0.5, 2.0]]
particles = 4000
dt = 1e-4
cells = 4000
cfl = 0.5
t_end = 0.49
snapshot_every = 100
eulerian.t_max = 0.45
domain.min = -0.5
domain.max = 1.5
deposit.cells = 1000
"#;

const COUNTEREXAMPLE: &str = r#"
name = "counterexample"
solver = "lagrangian"
kernel.kind = "smoothed"
kernel.alpha = 0.5
kernel.n = 36
velocity.kind = "identity"
datum.intervals = [[0.0, 0.5, 2.0]]
particles = 4000
dt = 1e-4
t_end = 1.0
snapshot_every = 100
domain.min = -0.5
domain.max = 2.0
deposit.cells = 250
study.alphas = [0.0, 0.5, 1.0]
study.n = [18, 36, 72]
"#;

const PEDESTRIAN_DEMO: &str = r#"
name = "pedestrian-demo"
solver = "both"
kernel.kind = "closed_form"
kernel.shape = "hat"
kernel.scale = 0.5
velocity.kind = "affine_desired"
velocity.desired = 0.5
datum.intervals = [[0.0, 0.4, 1.0], [0.6, 1.0, 0.5]]
particles = 2000
dt = 1e-3
cells = 1000
cfl = 0.5
t_end = 1.0
snapshot_every = 100
eulerian.t_max = 1.0
domain.min = -0.5
domain.max = 3.0
deposit.cells = 350
"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        for name in BUILTIN_SCENARIOS {
            let cfg = ScenarioConfig::builtin(name).unwrap();
            assert_eq!(cfg.name, name);
        }
        assert!(matches!(ScenarioConfig::builtin("nope"), Err(ConfigError::UnknownScenario(_))));
    }

    #[test]
    fn flat_round_trip() {
        for name in BUILTIN_SCENARIOS {
            let cfg = ScenarioConfig::builtin(name).unwrap();
            let again = ScenarioConfig::from_flat(cfg.to_flat()).unwrap();
            assert_eq!(cfg, again);
        }
    }

    #[test]
    fn overrides_apply() {
        let cfg = ScenarioConfig::builtin("counterexample").unwrap();
        let c = cfg.with_overrides(&["kernel.alpha=1.0", "kernel.n = 72", "name=custom"]).unwrap();
        assert_eq!(c.kernel, KernelSpec::Smoothed { alpha: 1.0, n: 72 });
        assert_eq!(c.name, "custom");
        assert!(cfg.with_overrides(&["bogus.key=1"]).is_err());
        assert!(cfg.with_overrides(&["no_equals"]).is_err());
    }

    #[test]
    fn overlapping_datum_is_rejected() {
        let src = r#"
            t_end = 1.0
            domain.min = -1.0
            domain.max = 2.0
            datum.intervals = [[0.0, 0.5, 1.0], [0.25, 1.0, 1.0]]
        "#;
        assert!(matches!(ScenarioConfig::from_toml_str(src), Err(ConfigError::Datum(DatumError::Overlap(..)))));
    }

    #[test]
    fn empty_alpha_list_is_rejected() {
        let cfg = ScenarioConfig::builtin("counterexample").unwrap();
        assert!(matches!(cfg.with_overrides(&["study.alphas=[]"]), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn validation_catches_bad_values() {
        let cfg = ScenarioConfig::builtin("blowup-exact").unwrap();
        for o in ["t_end=0.0", "particles=1", "cfl=1.5", "domain.max=0.2", "kernel.kind=\"weird\"", "dt=\"x\""] {
            assert!(cfg.with_overrides(&[o]).is_err(), "{o}");
        }
    }

    #[test]
    fn study_grid_is_row_major() {
        let cfg = ScenarioConfig::builtin("counterexample").unwrap();
        let g = cfg.study_grid().unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], (0.0, 18));
        assert_eq!(g[1], (0.0, 36));
        assert_eq!(g[8], (1.0, 72));
    }
}
