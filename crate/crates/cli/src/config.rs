//! TOML run configurations with `extends` inheritance.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::Value;

use weno_prm::harness::{OutputFormat, RunSettings};
use weno_prm::mapping::{Family, MappingSpec};
use weno_prm::problems::{ProblemId, ProblemSpec};
use weno_prm::tables::StencilTables;
use weno_prm::timeint::{Integrator, StepPolicy};
use weno_prm::{BaseWeights, WeightingStrategy};

use crate::presets::Preset;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("`extends` cycle through {0}")]
    Cycle(PathBuf),
    /// A key holds a value that violates an invariant.
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
}

fn invalid(key: impl Into<String>, message: impl std::fmt::Display) -> ConfigError {
    ConfigError::Invalid { key: key.into(), message: message.to_string() }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Consumed by [`load`]; kept so that the field is not an unknown key.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extends: Option<String>,
    pub problem: ProblemBlock,
    #[serde(default)]
    pub scheme: SchemeBlock,
    #[serde(default)]
    pub integrator: IntegratorBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grids: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// `linear`, `js`, `z5`, `p3`, `f3` or `nis5`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upgrade3: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// One family per sub-stencil; `dk` comes from the linear weights.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mapping: Option<Vec<Family>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aim_grouped: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nis_clamp: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Integrator>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<StepPolicy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_sw: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// `csv` or `json`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<bool>,
}

/// A configuration with every default filled in and every invariant checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub problem: ProblemSpec,
    pub grids: Vec<usize>,
    pub strategy: WeightingStrategy,
    pub settings: RunSettings,
    pub format: OutputFormat,
    pub path: PathBuf,
    pub timing: bool,
}

/// Overlays `top` on `base`: tables merge key by key, everything else is
/// replaced.
pub fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Table(b), Value::Table(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn read_value(path: &Path) -> Result<Value, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
    text.parse::<Value>().map_err(|e| ConfigError::Parse { path: path.into(), message: e.to_string() })
}

fn load_value(path: &Path, seen: &mut HashSet<PathBuf>) -> Result<Value, ConfigError> {
    let canon = path.canonicalize().map_err(|source| ConfigError::Io { path: path.into(), source })?;
    if !seen.insert(canon.clone()) {
        return Err(ConfigError::Cycle(canon));
    }
    let mut top = read_value(&canon)?;
    let parent = match top.as_table_mut().and_then(|t| t.remove("extends")) {
        None => None,
        Some(Value::String(p)) => Some(p),
        Some(_) => return Err(invalid("extends", "must be a path string")),
    };
    match parent {
        None => Ok(top),
        Some(p) => {
            let dir = canon.parent().unwrap_or(Path::new("."));
            let mut base = load_value(&dir.join(p), seen)?;
            merge(&mut base, top);
            Ok(base)
        }
    }
}

/// Reads `path`, following `extends` chains.
pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    from_value(load_value(path, &mut HashSet::new())?)
}

pub fn from_value(value: Value) -> Result<RunConfig, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let key = e.path().to_string();
        let inner = e.into_inner().to_string();
        let first = inner.lines().next().unwrap_or_default().to_string();
        invalid(if key == "." { "<root>".to_string() } else { key }, first)
    })
}

pub fn parse_str(text: &str) -> Result<RunConfig, ConfigError> {
    let value: Value = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Parse { path: "<string>".into(), message: e.to_string() })?;
    from_value(value)
}

fn parse_base(name: &str, q: Option<u32>) -> Result<BaseWeights, ConfigError> {
    Ok(match name {
        "linear" => BaseWeights::Linear,
        "js" => BaseWeights::Js,
        "z5" => BaseWeights::Z5 { q: q.unwrap_or(1) },
        "p3" => BaseWeights::P3,
        "f3" => BaseWeights::F3,
        "nis5" => BaseWeights::Nis5,
        other => {
            return Err(invalid(
                "scheme.base",
                format!("unknown base weights '{other}' (expected linear, js, z5, p3, f3 or nis5)"),
            ))
        }
    })
}

fn base_name(b: BaseWeights) -> (&'static str, Option<u32>) {
    match b {
        BaseWeights::Linear => ("linear", None),
        BaseWeights::Js => ("js", None),
        BaseWeights::Z5 { q } => ("z5", Some(q)),
        BaseWeights::P3 => ("p3", None),
        BaseWeights::F3 => ("f3", None),
        BaseWeights::Nis5 => ("nis5", None),
    }
}

fn problem_id(p: &ProblemBlock) -> Result<ProblemId, ConfigError> {
    let no = |key: &str, v: Option<f64>| match v {
        Some(_) => Err(invalid(format!("problem.{key}"), format!("not a parameter of problem '{}'", p.id))),
        None => Ok(()),
    };
    let id = match p.id.as_str() {
        "swa1" => {
            no("pr", p.pr)?;
            ProblemId::Swa1 { a: p.a.unwrap_or(1.005 / PI) }
        }
        "swa2" => {
            no("pr", p.pr)?;
            ProblemId::Swa2 { a: p.a.unwrap_or(0.32) }
        }
        "strong_shock" => {
            no("a", p.a)?;
            ProblemId::StrongShock { pr: p.pr.unwrap_or(1e6) }
        }
        other => {
            no("a", p.a)?;
            no("pr", p.pr)?;
            match other {
                "combo" => ProblemId::Combo,
                "blast" => ProblemId::Blast,
                "shu_osher" => ProblemId::ShuOsher,
                "titarev_toro" => ProblemId::TitarevToro,
                _ => {
                    return Err(invalid(
                        "problem.id",
                        format!(
                            "unknown problem '{other}' (expected swa1, swa2, combo, strong_shock, blast, \
                             shu_osher or titarev_toro)"
                        ),
                    ))
                }
            }
        }
    };
    Ok(id)
}

/// Builds one mapping spec per linear weight from explicit families.
pub fn specs_from_families(r: usize, families: &[Family], key: &str) -> Result<Vec<MappingSpec>, ConfigError> {
    let t = StencilTables::load(r).map_err(|e| invalid("scheme.r", e))?;
    let d = t.linear_weights();
    if families.len() != d.len() {
        return Err(invalid(key, format!("has {} entries, r = {r} needs {}", families.len(), d.len())));
    }
    families
        .iter()
        .zip(d)
        .enumerate()
        .map(|(k, (f, &dk))| MappingSpec::new(f.clone(), dk).map_err(|e| invalid(format!("{key}[{k}]"), e)))
        .collect()
}

impl RunConfig {
    /// Applies defaults and checks every referenced invariant. Relative
    /// output paths are joined to `out_dir`.
    pub fn resolve(&self, out_dir: &Path) -> Result<Resolved, ConfigError> {
        let p = &self.problem;
        let mut problem = ProblemSpec::new(problem_id(p)?);
        if let Some(t) = p.t_final {
            problem = problem.with_t_final(t);
        }
        problem.validate().map_err(|e| invalid("problem", e))?;
        let grids = match (&p.n, &p.grids) {
            (Some(_), Some(_)) => return Err(invalid("problem.grids", "give either `n` or `grids`, not both")),
            (Some(n), None) => vec![*n],
            (None, Some(g)) => g.clone(),
            (None, None) => vec![problem.default_n],
        };
        if grids.is_empty() || grids.iter().any(|&n| n < 8) {
            return Err(invalid("problem.grids", format!("need at least one grid, each with >= 8 cells, got {grids:?}")));
        }
        if grids.len() > 1 && !problem.is_scalar() {
            return Err(invalid("problem.grids", "grid sequences are only supported for scalar problems"));
        }

        let s = &self.scheme;
        let r = s.r.unwrap_or(3);
        let base = parse_base(s.base.as_deref().unwrap_or("js"), s.q)?;
        if s.q.is_some() && !matches!(base, BaseWeights::Z5 { .. }) {
            return Err(invalid("scheme.q", "only used with base = \"z5\""));
        }
        let mut strategy = WeightingStrategy::new(r, base);
        let mut aim_grouped = false;
        match (&s.preset, &s.mapping) {
            (Some(_), Some(_)) => return Err(invalid("scheme.mapping", "give either `preset` or `mapping`, not both")),
            (Some(name), None) => {
                let preset: Preset = name.parse().map_err(|e| invalid("scheme.preset", e))?;
                let specs = preset.specs(r).map_err(|e| invalid("scheme.preset", e))?;
                aim_grouped = preset.grouped();
                strategy = WeightingStrategy { base, ..WeightingStrategy::mapped(r, specs) };
            }
            (None, Some(f)) => {
                let specs = specs_from_families(r, f, "scheme.mapping")?;
                strategy = WeightingStrategy { base, ..WeightingStrategy::mapped(r, specs) };
            }
            (None, None) => {}
        }
        if let Some(e) = s.eps {
            strategy.eps = e;
        }
        strategy.is_upgrade3 = s.upgrade3.unwrap_or(false);
        strategy.aim_grouped = s.aim_grouped.unwrap_or(aim_grouped);
        strategy.nis_clamp = s.nis_clamp.unwrap_or(true);
        strategy.validate().map_err(|e| invalid("scheme", e))?;

        let i = &self.integrator;
        let defaults = RunSettings::default();
        let settings = RunSettings {
            integrator: i.method,
            policy: i.policy,
            gamma: i.gamma.unwrap_or(defaults.gamma),
            eps_sw: i.eps_sw.unwrap_or(defaults.eps_sw),
        };
        if let Some(pol) = settings.policy {
            pol.validate().map_err(|e| invalid("integrator.policy", e))?;
        }
        let (method, policy) = settings.resolve(&problem);
        let settings = RunSettings { integrator: Some(method), policy: Some(policy), ..settings };
        if !(settings.gamma > 1.0) {
            return Err(invalid("integrator.gamma", format!("must exceed 1, got {}", settings.gamma)));
        }
        if !(settings.eps_sw >= 0.0) {
            return Err(invalid("integrator.eps_sw", format!("must be >= 0, got {}", settings.eps_sw)));
        }

        let o = &self.output;
        let format = match o.format.as_deref().unwrap_or("csv") {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => return Err(invalid("output.format", format!("expected csv or json, got '{other}'"))),
        };
        let ext = if format == OutputFormat::Csv { "csv" } else { "json" };
        let path = PathBuf::from(o.path.clone().unwrap_or_else(|| format!("results.{ext}")));
        let path = if path.is_absolute() { path } else { out_dir.join(path) };
        Ok(Resolved { problem, grids, strategy, settings, format, path, timing: o.timing.unwrap_or(false) })
    }
}

impl Resolved {
    /// Fully explicit configuration that resolves back to `self`.
    pub fn effective(&self) -> RunConfig {
        let (id, a, pr) = match self.problem.id {
            ProblemId::Swa1 { a } => ("swa1", Some(a), None),
            ProblemId::Swa2 { a } => ("swa2", Some(a), None),
            ProblemId::Combo => ("combo", None, None),
            ProblemId::StrongShock { pr } => ("strong_shock", None, Some(pr)),
            ProblemId::Blast => ("blast", None, None),
            ProblemId::ShuOsher => ("shu_osher", None, None),
            ProblemId::TitarevToro => ("titarev_toro", None, None),
        };
        let (base, q) = base_name(self.strategy.base);
        let (method, policy) = self.settings.resolve(&self.problem);
        RunConfig {
            extends: None,
            problem: ProblemBlock {
                id: id.into(),
                a,
                pr,
                n: None,
                grids: Some(self.grids.clone()),
                t_final: Some(self.problem.t_final),
            },
            scheme: SchemeBlock {
                r: Some(self.strategy.r),
                base: Some(base.into()),
                q,
                eps: Some(self.strategy.eps),
                upgrade3: Some(self.strategy.is_upgrade3),
                preset: None,
                mapping: self.strategy.mapping.as_ref().map(|v| v.iter().map(|s| s.family().clone()).collect()),
                aim_grouped: Some(self.strategy.aim_grouped),
                nis_clamp: Some(self.strategy.nis_clamp),
            },
            integrator: IntegratorBlock {
                method: Some(method),
                policy: Some(policy),
                gamma: Some(self.settings.gamma),
                eps_sw: Some(self.settings.eps_sw),
            },
            output: OutputBlock {
                format: Some(if self.format == OutputFormat::Csv { "csv" } else { "json" }.into()),
                path: Some(self.path.display().to_string()),
                timing: Some(self.timing),
            },
        }
    }
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configurations always serialize")
    }
}
