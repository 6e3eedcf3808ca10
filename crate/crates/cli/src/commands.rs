//! Subcommand implementations. Each returns `Ok(true)` on success,
//! `Ok(false)` when a checked criterion fails, and an error for bad input
//! or IO failures.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use weno_prm::harness::{convergence_study, emit_results, run_case, CaseRow};
use weno_prm::mapping::{check_cnmk, check_singularity_free, CnmReport, Family, MappingSpec};
use weno_prm::tables::StencilTables;

use crate::config;
use crate::presets::Preset;
use crate::suites::{run_suite, SuiteName};

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    Ok(())
}

/// Executes a run configuration and writes the result table plus the
/// effective configuration next to it.
pub fn run(config_path: &Path, out_dir: &Path) -> Result<bool> {
    let ctx = || format!("config {}", config_path.display());
    let cfg = config::load(config_path).with_context(ctx)?;
    let res = cfg.resolve(out_dir).with_context(ctx)?;
    let rows: Vec<CaseRow> = if res.grids.len() > 1 {
        let rep = convergence_study(&res.problem, &res.strategy, &res.grids, &res.settings)?;
        if let Some((step, cell)) = rep.blow_up {
            println!("blow-up at step {step}, cell {cell}; study stopped");
        }
        rep.rows
    } else {
        let c = run_case(&res.problem, &res.strategy, res.grids[0], &res.settings)?;
        if let Some(b) = &c.outcome.blow_up {
            println!("{b}");
        }
        vec![c.row]
    };
    emit_results(&rows, res.format, res.timing, &res.path)
        .with_context(|| format!("cannot write {}", res.path.display()))?;
    let eff = res.path.with_extension("effective.toml");
    fs::write(&eff, res.effective().to_toml()).with_context(|| format!("cannot write {}", eff.display()))?;
    for r in &rows {
        let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4e}"));
        let o = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.2}"));
        println!("{} {} N={} L1={} Linf={} order_Linf={}", r.problem, r.scheme, r.n, f(r.l1), f(r.linf), o(r.order_linf));
    }
    println!("wrote {}", res.path.display());
    Ok(true)
}

/// How a single mapping is picked on the command line.
#[derive(Debug, Clone, Default)]
pub struct MappingChoice {
    pub preset: Option<String>,
    /// Inline TOML table such as `{ family = "pm", n = 6 }`.
    pub mapping: Option<String>,
    pub r: usize,
    pub k: usize,
    pub dk: Option<f64>,
}

impl MappingChoice {
    pub fn build(&self) -> Result<MappingSpec> {
        match (&self.preset, &self.mapping) {
            (Some(_), Some(_)) => bail!("--preset and --mapping are mutually exclusive"),
            (None, None) => bail!("one of --preset or --mapping is required"),
            (Some(p), None) => {
                if self.dk.is_some() {
                    bail!("--dk: presets fix dk through --r and --k");
                }
                let preset: Preset = p.parse().map_err(anyhow::Error::msg).context("--preset")?;
                preset.spec(self.r, self.k).map_err(anyhow::Error::msg).context("--preset")
            }
            (None, Some(text)) => {
                let family = parse_family(text)?;
                let dk = match self.dk {
                    Some(d) => d,
                    None => {
                        let t = StencilTables::load(self.r).context("--r")?;
                        *t.linear_weights().get(self.k).with_context(|| format!("--k {} out of range for r = {}", self.k, self.r))?
                    }
                };
                MappingSpec::new(family, dk).context("--mapping")
            }
        }
    }
}

pub fn parse_family(text: &str) -> Result<Family> {
    #[derive(serde::Deserialize)]
    struct Wrap {
        mapping: Family,
    }
    let w: Wrap = toml::from_str(&format!("mapping = {text}")).with_context(|| format!("--mapping: cannot parse `{text}`"))?;
    Ok(w.mapping)
}

/// `(omega, g)` on `samples` uniform points of `[0, 1]`.
pub fn profile(spec: &MappingSpec, samples: usize) -> Vec<(f64, f64)> {
    (0..samples)
        .map(|i| {
            let w = i as f64 / (samples - 1) as f64;
            (w, spec.eval(w))
        })
        .collect()
}

/// Writes the profile CSV; with `compare`, adds its column and returns the
/// largest difference.
pub fn map_profile(spec: &MappingSpec, samples: usize, compare: Option<&MappingSpec>, out: &Path) -> Result<Option<f64>> {
    if samples < 2 {
        bail!("--samples must be at least 2, got {samples}");
    }
    if let Some(c) = compare {
        if (c.dk() - spec.dk()).abs() > 1e-12 {
            bail!("--compare: dk {} differs from the profiled mapping's dk {}", c.dk(), spec.dk());
        }
    }
    create_parent(out)?;
    let mut w = std::io::BufWriter::new(fs::File::create(out).with_context(|| format!("cannot write {}", out.display()))?);
    let mut sup: Option<f64> = None;
    if compare.is_some() {
        writeln!(w, "omega,g,h")?;
    } else {
        writeln!(w, "omega,g")?;
    }
    for (omega, g) in profile(spec, samples) {
        match compare {
            Some(c) => {
                let h = c.eval(omega);
                sup = Some(sup.unwrap_or(0.0).max((g - h).abs()));
                writeln!(w, "{omega},{g},{h}")?;
            }
            None => writeln!(w, "{omega},{g}")?,
        }
    }
    w.flush()?;
    Ok(sup)
}

#[derive(Debug, Serialize)]
pub struct CheckOutcome {
    pub family: Family,
    pub dk: f64,
    pub singularity_free: bool,
    pub verified: bool,
    pub report: CnmReport,
}

/// Checks `C_{n,m,k}`; missing orders default to the family's claim, and
/// `k` defaults to `m`.
pub fn check_cnm(spec: &MappingSpec, n: Option<u32>, m: Option<u32>, k: Option<u32>) -> Result<CheckOutcome> {
    let claim = spec.family().claimed_cnmk();
    let (n, m) = match (n, m, claim) {
        (Some(n), Some(m), _) => (n, m),
        (n, m, Some((cn, cm, _))) => (n.unwrap_or(cn), m.unwrap_or(cm)),
        _ => bail!("the {} family claims no orders; give --n and --m", spec.family().name()),
    };
    let k = match (k, claim) {
        (Some(k), _) => k,
        (None, Some((cn, cm, ck))) if (cn, cm) == (n, m) => ck,
        _ => m,
    };
    let report = check_cnmk(spec, n, m, k);
    let singularity_free = check_singularity_free(spec);
    let verified = report.satisfied && singularity_free && !report.differentiation_failure;
    Ok(CheckOutcome { family: spec.family().clone(), dk: spec.dk(), singularity_free, verified, report })
}

pub fn write_check(outcome: &CheckOutcome, out: &Path) -> Result<()> {
    create_parent(out)?;
    let text = serde_json::to_string_pretty(outcome)?;
    fs::write(out, text).with_context(|| format!("cannot write {}", out.display()))
}

pub fn suite(name: SuiteName, out_dir: &Path, seed: u64) -> Result<bool> {
    let rep = run_suite(name, seed)?;
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    let summary: PathBuf = out_dir.join(format!("suite_{name}.csv"));
    let f = fs::File::create(&summary).with_context(|| format!("cannot write {}", summary.display()))?;
    rep.write_summary(f)?;
    if !rep.results.is_empty() {
        let results = out_dir.join(format!("suite_{name}_results.csv"));
        emit_results(&rep.results, weno_prm::harness::OutputFormat::Csv, false, &results)?;
    }
    for r in &rep.summary {
        let v = if r.value.is_finite() { format!("{:.4e}", r.value) } else { "-".into() };
        let crit = if r.criterion.is_empty() { String::new() } else { format!(" (want {})", r.criterion) };
        println!("{:<8} {} {} = {v}{crit}", r.verdict, r.case, r.metric);
    }
    let passed = rep.passed();
    println!("suite {name}: {}; summary in {}", if passed { "PASS" } else { "FAIL" }, summary.display());
    Ok(passed)
}
