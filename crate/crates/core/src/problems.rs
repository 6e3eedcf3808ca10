//! Benchmark problems: initial data, boundary padding and references.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::euler::{pack, prim_to_cons, GasModel};
use crate::harness::{simulate, RunSettings};
use crate::scheme::WeightingStrategy;
use crate::timeint::{Integrator, StepPolicy};

/// Environment variable naming the reference cache directory.
pub const CACHE_ENV: &str = "WENO_PRM_REF_CACHE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryRule {
    Periodic,
    ReflectiveWall,
    ZeroGradient,
    /// Zero gradient on the left; the right ghost cells keep the initial
    /// state, for problems whose right part is undisturbed until `T`.
    FixedRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum ProblemId {
    Swa1 { a: f64 },
    Swa2 { a: f64 },
    Combo,
    StrongShock { pr: f64 },
    Blast,
    ShuOsher,
    TitarevToro,
}

impl ProblemId {
    pub fn name(&self) -> String {
        match self {
            ProblemId::Swa1 { a } => format!("swa1(a={a})"),
            ProblemId::Swa2 { a } => format!("swa2(a={a})"),
            ProblemId::Combo => "combo".into(),
            ProblemId::StrongShock { pr } => format!("strong_shock(pr={pr:e})"),
            ProblemId::Blast => "blast".into(),
            ProblemId::ShuOsher => "shu_osher".into(),
            ProblemId::TitarevToro => "titarev_toro".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_final: f64,
    pub default_n: usize,
    pub bc: BoundaryRule,
    /// Cells of the fine-grid reference, for Euler problems that have one.
    pub n_ref: Option<usize>,
}

impl ProblemSpec {
    pub fn new(id: ProblemId) -> Self {
        let (x_lo, x_hi, t_final, default_n, bc, n_ref) = match id {
            ProblemId::Swa1 { .. } | ProblemId::Swa2 { .. } => (-1.0, 1.0, 2.0, 20, BoundaryRule::Periodic, None),
            ProblemId::Combo => (-1.0, 1.0, 2.0, 200, BoundaryRule::Periodic, None),
            ProblemId::StrongShock { pr } => {
                (-5.0, 5.0, if pr <= 1e3 { 0.3 } else { 0.01 }, 201, BoundaryRule::ZeroGradient, None)
            }
            ProblemId::Blast => (0.0, 1.0, 0.038, 200, BoundaryRule::ReflectiveWall, Some(10001)),
            ProblemId::ShuOsher => (-5.0, 5.0, 1.8, 200, BoundaryRule::FixedRight, Some(2001)),
            ProblemId::TitarevToro => (-5.0, 5.0, 5.0, 1000, BoundaryRule::FixedRight, Some(10001)),
        };
        Self { id, x_lo, x_hi, t_final, default_n, bc, n_ref }
    }

    pub fn swa1(a: f64) -> Self {
        Self::new(ProblemId::Swa1 { a })
    }

    pub fn swa2(a: f64) -> Self {
        Self::new(ProblemId::Swa2 { a })
    }

    pub fn with_t_final(mut self, t: f64) -> Self {
        self.t_final = t;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_hi > self.x_lo) || !(self.t_final > 0.0) {
            return Err(Error::Config(format!("bad domain or final time in {:?}", self)));
        }
        match self.id {
            ProblemId::Swa1 { a } | ProblemId::Swa2 { a } if !(a > 0.0) => {
                Err(Error::Config(format!("wave parameter a must be positive, got {a}")))
            }
            ProblemId::StrongShock { pr } if !(pr > 0.0) => {
                Err(Error::Config(format!("pressure ratio must be positive, got {pr}")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self.id, ProblemId::Swa1 { .. } | ProblemId::Swa2 { .. } | ProblemId::Combo)
    }

    pub fn components(&self) -> usize {
        if self.is_scalar() {
            1
        } else {
            3
        }
    }

    pub fn dx(&self, n: usize) -> f64 {
        (self.x_hi - self.x_lo) / n as f64
    }

    /// Cell centres.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let dx = self.dx(n);
        (0..n).map(|j| self.x_lo + (j as f64 + 0.5) * dx).collect()
    }

    /// Time integrator and step policy used for this problem.
    pub fn default_settings(&self) -> (Integrator, StepPolicy) {
        match self.id {
            ProblemId::Swa1 { .. } | ProblemId::Swa2 { .. } => (Integrator::Rk4, StepPolicy::accuracy()),
            ProblemId::Combo => (Integrator::TvdRk3, StepPolicy::cfl(0.1)),
            _ => (Integrator::TvdRk3, StepPolicy::cfl(0.5)),
        }
    }

    /// Scalar initial profile.
    pub fn scalar_initial(&self, x: f64) -> f64 {
        match self.id {
            ProblemId::Swa1 { a } => (PI * x - (PI * x).sin() / (a * PI)).sin(),
            ProblemId::Swa2 { a } => (PI * x - (PI * x).sin() / (a * PI)).sin().powi(3),
            ProblemId::Combo => combo(x),
            _ => f64::NAN,
        }
    }

    /// Primitive `(rho, u, p)` initial state.
    pub fn primitive_initial(&self, x: f64) -> (f64, f64, f64) {
        match self.id {
            ProblemId::StrongShock { pr } => {
                if x < -1e-12 {
                    (1.0, 0.0, 0.1 * pr)
                } else {
                    (1.0, 0.0, 0.1)
                }
            }
            ProblemId::Blast => {
                if x < 0.1 {
                    (1.0, 0.0, 1000.0)
                } else if x <= 0.9 {
                    (1.0, 0.0, 0.01)
                } else {
                    (1.0, 0.0, 100.0)
                }
            }
            ProblemId::ShuOsher => {
                if x < -4.0 {
                    (3.857143, 2.629369, 10.3333)
                } else {
                    (1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
                }
            }
            ProblemId::TitarevToro => {
                if x < -4.5 {
                    (1.515695, 0.523346, 1.805)
                } else {
                    (1.0 + 0.1 * (20.0 * PI * x).sin(), 0.0, 1.0)
                }
            }
            _ => (f64::NAN, f64::NAN, f64::NAN),
        }
    }
}

const COMBO_A: f64 = 0.5;
const COMBO_Z: f64 = -0.7;
const COMBO_DELTA: f64 = 0.005;
const COMBO_ALPHA: f64 = 10.0;

fn combo_beta() -> f64 {
    2f64.ln() / (36.0 * COMBO_DELTA * COMBO_DELTA)
}

fn combo(x: f64) -> f64 {
    let g = |z: f64| (-combo_beta() * (x - z) * (x - z)).exp();
    let f = |a: f64| (1.0 - COMBO_ALPHA * COMBO_ALPHA * (x - a) * (x - a)).max(0.0).sqrt();
    if (-0.8..=-0.6).contains(&x) {
        (g(COMBO_Z - COMBO_DELTA) + g(COMBO_Z + COMBO_DELTA) + 4.0 * g(COMBO_Z)) / 6.0
    } else if (-0.4..=-0.2).contains(&x) {
        1.0
    } else if (0.0..=0.2).contains(&x) {
        1.0 - (10.0 * (x - 0.1)).abs()
    } else if (0.4..=0.6).contains(&x) {
        (f(COMBO_A - COMBO_DELTA) + f(COMBO_A + COMBO_DELTA) + 4.0 * f(COMBO_A)) / 6.0
    } else {
        0.0
    }
}

/// Point-sampled initial field, component-major for Euler problems.
pub fn initialize(spec: &ProblemSpec, n: usize, gas: GasModel) -> Result<Vec<f64>> {
    spec.validate()?;
    let x = spec.grid(n);
    if spec.is_scalar() {
        return Ok(x.iter().map(|&x| spec.scalar_initial(x)).collect());
    }
    let states = x
        .iter()
        .map(|&x| {
            let (r, u, p) = spec.primitive_initial(x);
            prim_to_cons(r, u, p, gas)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pack(&states))
}

/// Pads one component with `g` ghost cells per side. `odd` flips the sign
/// of mirrored values at reflective walls. `FixedRight` pads like
/// `ZeroGradient`; the caller overwrites the right ghosts.
pub fn pad_component(src: &[f64], g: usize, bc: BoundaryRule, odd: bool, out: &mut Vec<f64>) {
    let n = src.len();
    out.clear();
    out.reserve(n + 2 * g);
    let sign = if odd { -1.0 } else { 1.0 };
    for i in 0..g {
        let ghost = g - i; // distance from the boundary, 1-based
        out.push(match bc {
            BoundaryRule::Periodic => src[(n * g + n - ghost) % n],
            BoundaryRule::ReflectiveWall => sign * src[(ghost - 1).min(n - 1)],
            BoundaryRule::ZeroGradient | BoundaryRule::FixedRight => src[0],
        });
    }
    out.extend_from_slice(src);
    for i in 0..g {
        out.push(match bc {
            BoundaryRule::Periodic => src[i % n],
            BoundaryRule::ReflectiveWall => sign * src[n - 1 - i.min(n - 1)],
            BoundaryRule::ZeroGradient | BoundaryRule::FixedRight => src[n - 1],
        });
    }
}

/// Padded copy of a field with `ncomp` components; component 1 of a
/// three-component field is the momentum.
pub fn apply_bc(state: &[f64], ncomp: usize, bc: BoundaryRule, g: usize) -> Vec<f64> {
    let n = state.len() / ncomp;
    let mut out = Vec::with_capacity(state.len() + 2 * g * ncomp);
    let mut buf = Vec::new();
    for c in 0..ncomp {
        pad_component(&state[c * n..(c + 1) * n], g, bc, ncomp == 3 && c == 1, &mut buf);
        out.extend_from_slice(&buf);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceKind {
    AnalyticShift,
    FineGrid { n_ref: usize, scheme: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub kind: ReferenceKind,
    /// Sample locations of `data`.
    pub x: Vec<f64>,
    /// Component-major samples.
    pub data: Vec<f64>,
}

impl ReferenceSolution {
    pub fn components(&self) -> usize {
        self.data.len() / self.x.len()
    }

    /// Component `c` linearly interpolated at `xs`, clamped at the ends.
    pub fn sample(&self, c: usize, xs: &[f64]) -> Vec<f64> {
        let n = self.x.len();
        let v = &self.data[c * n..(c + 1) * n];
        let x0 = self.x[0];
        let h = if n > 1 { self.x[1] - self.x[0] } else { 1.0 };
        xs.iter()
            .map(|&x| {
                let s = ((x - x0) / h).clamp(0.0, (n - 1) as f64);
                let i = (s.floor() as usize).min(n.saturating_sub(2));
                let t = s - i as f64;
                if n == 1 {
                    v[0]
                } else {
                    (1.0 - t) * v[i] + t * v[i + 1]
                }
            })
            .collect()
    }
}

/// Exact solution of scalar advection at time `t`.
pub fn analytic_shift(spec: &ProblemSpec, x: &[f64], t: f64) -> Vec<f64> {
    let len = spec.x_hi - spec.x_lo;
    x.iter()
        .map(|&x| {
            let y = (x - t - spec.x_lo).rem_euclid(len) + spec.x_lo;
            spec.scalar_initial(y)
        })
        .collect()
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("weno-prm-references"))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Manifest {
    key: String,
    problem: ProblemSpec,
    n_ref: usize,
    scheme: String,
    settings: RunSettings,
}

/// Reference for `spec` on the grid of `n` cells. Scalar problems use the
/// analytic shift; Euler problems use a cached fine-grid WENO5-JS run.
pub fn reference(spec: &ProblemSpec, n: usize, settings: &RunSettings) -> Result<ReferenceSolution> {
    if spec.is_scalar() {
        let x = spec.grid(n);
        let data = analytic_shift(spec, &x, spec.t_final);
        return Ok(ReferenceSolution { kind: ReferenceKind::AnalyticShift, x, data });
    }
    let n_ref = spec
        .n_ref
        .ok_or_else(|| Error::Reference(format!("{} has no fine-grid reference", spec.id.name())))?;
    fine_grid_reference(spec, n_ref, settings, &cache_dir())
}

pub fn fine_grid_reference(
    spec: &ProblemSpec,
    n_ref: usize,
    settings: &RunSettings,
    dir: &Path,
) -> Result<ReferenceSolution> {
    let strategy = WeightingStrategy::js(3);
    let scheme = strategy.label();
    let mut m = Manifest { key: String::new(), problem: *spec, n_ref, scheme: scheme.clone(), settings: *settings };
    let key = {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&m)?);
        h.finalize().iter().map(|b| format!("{b:02x}")).collect::<String>()
    };
    m.key = key.clone();
    let data_path = dir.join(format!("{key}.csv"));
    let kind = ReferenceKind::FineGrid { n_ref, scheme };
    if let Ok(r) = read_cache(&data_path, spec, n_ref) {
        return Ok(ReferenceSolution { kind, ..r });
    }
    let out = simulate(spec, &strategy, n_ref, settings)
        .map_err(|e| Error::Reference(format!("{}: {e}", spec.id.name())))?;
    if let Some(b) = out.blow_up {
        return Err(Error::Reference(format!("{} reference run failed: {b}", spec.id.name())));
    }
    let x = spec.grid(n_ref);
    write_cache(dir, &key, &data_path, &m, &x, &out.state)?;
    Ok(ReferenceSolution { kind, x, data: out.state })
}

fn read_cache(path: &Path, spec: &ProblemSpec, n_ref: usize) -> Result<ReferenceSolution> {
    let mut rd = csv::Reader::from_path(path)?;
    let mut x = Vec::with_capacity(n_ref);
    let mut cols = vec![Vec::with_capacity(n_ref); spec.components()];
    for rec in rd.records() {
        let rec = rec?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| Error::Reference(format!("bad cache entry {s}: {e}"))))
            .collect::<Result<_>>()?;
        if v.len() != cols.len() + 1 {
            return Err(Error::Reference("cache row width mismatch".into()));
        }
        x.push(v[0]);
        for (c, col) in cols.iter_mut().enumerate() {
            col.push(v[c + 1]);
        }
    }
    if x.len() != n_ref {
        return Err(Error::Reference(format!("cache has {} rows, expected {n_ref}", x.len())));
    }
    Ok(ReferenceSolution { kind: ReferenceKind::AnalyticShift, x, data: cols.concat() })
}

fn write_cache(dir: &Path, key: &str, path: &Path, m: &Manifest, x: &[f64], data: &[f64]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let n = x.len();
    let tmp = dir.join(format!("{key}.{}.tmp", std::process::id()));
    {
        let mut w = csv::Writer::from_path(&tmp)?;
        w.write_record(["x", "rho", "mom", "energy"])?;
        for j in 0..n {
            w.write_record(&[x[j], data[j], data[n + j], data[2 * n + j]].map(|v| v.to_string()))?;
        }
        w.flush()?;
    }
    std::fs::write(dir.join(format!("{key}.json")), serde_json::to_vec_pretty(m)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_values() {
        let s = ProblemSpec::swa1(1.0);
        assert_eq!(s.scalar_initial(0.0), 0.0);
        let c = ProblemSpec::new(ProblemId::Combo);
        assert_eq!(c.scalar_initial(-0.3), 1.0);
        assert_eq!(c.scalar_initial(-0.5), 0.0);
        assert!((c.scalar_initial(0.1) - 1.0).abs() < 1e-15);
        assert_eq!(c.scalar_initial(0.9), 0.0);
        let sh = ProblemSpec::new(ProblemId::StrongShock { pr: 1e6 });
        assert_eq!(sh.primitive_initial(-1.0), (1.0, 0.0, 1e5));
        assert_eq!(sh.primitive_initial(1.0), (1.0, 0.0, 0.1));
        assert_eq!(sh.t_final, 0.01);
        assert_eq!(ProblemSpec::new(ProblemId::StrongShock { pr: 1e3 }).t_final, 0.3);
        let so = ProblemSpec::new(ProblemId::ShuOsher);
        assert_eq!(so.primitive_initial(-4.5), (3.857143, 2.629369, 10.3333));
        let tt = ProblemSpec::new(ProblemId::TitarevToro);
        let (r, _, _) = tt.primitive_initial(0.025);
        assert!((r - 1.1).abs() < 1e-12);
    }

    #[test]
    fn combo_gaussian_and_ellipse() {
        let c = ProblemSpec::new(ProblemId::Combo);
        let beta = 2f64.ln() / (36.0 * 0.005f64.powi(2));
        let g = |z: f64| (-beta * (-0.7f64 - z).powi(2)).exp();
        let expect = (g(-0.705) + g(-0.695) + 4.0) / 6.0;
        assert!((c.scalar_initial(-0.7) - expect).abs() < 1e-15);
        let f = |a: f64| (1.0 - 100.0 * (0.5f64 - a).powi(2)).max(0.0).sqrt();
        let expect = (f(0.495) + f(0.505) + 4.0) / 6.0;
        assert!((c.scalar_initial(0.5) - expect).abs() < 1e-15);
        let u = initialize(&c, 800, GasModel::default()).unwrap();
        assert!(u.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn swa1_has_two_critical_points() {
        for a in [1.0, 1.005 / PI, 0.5] {
            let s = ProblemSpec::swa1(a);
            let n = 20_000;
            let x: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect();
            let d: Vec<f64> = x.windows(2).map(|w| s.scalar_initial(w[1]) - s.scalar_initial(w[0])).collect();
            let changes = d.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
            assert_eq!(changes, 2, "a = {a}");
        }
    }

    #[test]
    fn euler_initial_state() {
        let b = ProblemSpec::new(ProblemId::Blast);
        let u = initialize(&b, 200, GasModel::default()).unwrap();
        assert!((u[400] - 1000.0 / 0.4).abs() < 1e-9);
        assert!((u[599] - 100.0 / 0.4).abs() < 1e-9);
        assert_eq!(u[100], 1.0);
    }

    #[test]
    fn padding_rules() {
        let src = [1.0, 2.0, 3.0, 4.0];
        let mut out = Vec::new();
        pad_component(&src, 3, BoundaryRule::Periodic, false, &mut out);
        assert_eq!(out, vec![2.0, 3.0, 4.0, 1.0, 2.0, 3.0, 4.0, 1.0, 2.0, 3.0]);
        pad_component(&src, 2, BoundaryRule::ReflectiveWall, true, &mut out);
        assert_eq!(out, vec![-2.0, -1.0, 1.0, 2.0, 3.0, 4.0, -4.0, -3.0]);
        pad_component(&src, 2, BoundaryRule::ZeroGradient, false, &mut out);
        assert_eq!(out, vec![1.0, 1.0, 1.0, 2.0, 3.0, 4.0, 4.0, 4.0]);
        let st = [1.0, 1.0, 1.0, 0.5, 0.6, 0.7, 3.0, 3.0, 3.0];
        let p = apply_bc(&st, 3, BoundaryRule::ReflectiveWall, 1);
        assert_eq!(&p[5..10], &[-0.5, 0.5, 0.6, 0.7, -0.7]);
        let p = apply_bc(&[2.0; 5], 1, BoundaryRule::Periodic, 3);
        assert!(p.iter().all(|v| *v == 2.0));
    }

    #[test]
    fn analytic_shift_period() {
        let s = ProblemSpec::swa1(1.0);
        let x = s.grid(40);
        let u0: Vec<f64> = x.iter().map(|&x| s.scalar_initial(x)).collect();
        let u = analytic_shift(&s, &x, 2.0);
        for (a, b) in u.iter().zip(&u0) {
            assert!((a - b).abs() < 1e-12);
        }
        let c = ProblemSpec::new(ProblemId::Combo);
        let x = c.grid(200);
        let r = reference(&c, 200, &RunSettings::default()).unwrap();
        let u0: Vec<f64> = x.iter().map(|&x| c.scalar_initial(x)).collect();
        for (a, b) in r.data.iter().zip(&u0) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn reference_interpolation() {
        let r = ReferenceSolution {
            kind: ReferenceKind::AnalyticShift,
            x: vec![0.0, 1.0, 2.0],
            data: vec![0.0, 2.0, 4.0, 1.0, 1.0, 1.0],
        };
        assert_eq!(r.sample(0, &[0.5, 1.25, -1.0, 3.0]), vec![1.0, 2.5, 0.0, 4.0]);
        assert_eq!(r.sample(1, &[0.7]), vec![1.0]);
    }

    #[test]
    fn fine_grid_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let spec = ProblemSpec::new(ProblemId::ShuOsher).with_t_final(0.05);
        let settings = RunSettings::default();
        let a = fine_grid_reference(&spec, 101, &settings, dir.path()).unwrap();
        let files = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(files, 2);
        let b = fine_grid_reference(&spec, 101, &settings, dir.path()).unwrap();
        assert_eq!(a, b);
    }
}
