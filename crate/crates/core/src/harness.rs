//! Experiment driver: runs cases, measures errors and orders, and writes
//! result tables.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BlowUp, Error, Result};
use crate::euler::{max_wave_speed, prim_to_cons, EulerRhs, GasModel};
use crate::problems::{initialize, reference, BoundaryRule, ProblemSpec, ReferenceSolution};
use crate::scheme::{AdvectionRhs, Reconstructor, WeightingStrategy};
use crate::timeint::{compute_dt, integrate, Integrator, StepPolicy};

pub use crate::scheme::BaseWeights;

/// Solver settings not fixed by the problem. `None` picks the problem's
/// default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub integrator: Option<Integrator>,
    pub policy: Option<StepPolicy>,
    pub gamma: f64,
    /// Steger–Warming smoothing as a multiple of the local sound speed.
    pub eps_sw: f64,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self { integrator: None, policy: None, gamma: 1.4, eps_sw: 1e-6 }
    }
}

impl RunSettings {
    pub fn resolve(&self, spec: &ProblemSpec) -> (Integrator, StepPolicy) {
        let (i, p) = spec.default_settings();
        (self.integrator.unwrap_or(i), self.policy.unwrap_or(p))
    }
}

/// Final state and run diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub state: Vec<f64>,
    pub blow_up: Option<BlowUp>,
    pub steps: usize,
    pub t_reached: f64,
    /// Extremes of the primary field (u or density) over all steps.
    pub field_min: f64,
    pub field_max: f64,
    /// Smallest pressure seen, Euler problems only.
    pub pressure_min: Option<f64>,
    /// Largest relative change of the two outermost cells on each side,
    /// zero-gradient Euler problems only.
    pub boundary_drift: Option<f64>,
    pub wall_ms: f64,
}

impl RunOutcome {
    /// Density (Euler) or the scalar field.
    pub fn primary(&self, spec: &ProblemSpec) -> &[f64] {
        let n = self.state.len() / spec.components();
        &self.state[..n]
    }
}

/// Integrates `spec` on `n` cells. A blow-up is returned inside the
/// outcome; configuration problems are errors.
pub fn simulate(
    spec: &ProblemSpec,
    strategy: &WeightingStrategy,
    n: usize,
    settings: &RunSettings,
) -> Result<RunOutcome> {
    let start = Instant::now();
    let gas = GasModel::new(settings.gamma)?;
    let (method, policy) = settings.resolve(spec);
    policy.validate()?;
    let min_n = 4 * strategy.r;
    if n < min_n {
        return Err(Error::Config(format!("{} needs at least {min_n} cells, got {n}", strategy.label())));
    }
    let dx = spec.dx(n);
    let recon = Reconstructor::new(strategy, dx)?;
    let r = strategy.r;
    let mut u = initialize(spec, n, gas)?;
    let initial = u.clone();
    let (mut fmin, mut fmax) = extremes(&u[..n]);
    let mut pmin = f64::INFINITY;
    let result = if spec.is_scalar() {
        let mut op = AdvectionRhs::new(recon);
        integrate(
            &mut u,
            spec.t_final,
            method,
            |_| compute_dt(policy, dx, r, 1.0),
            |s, o| {
                op.eval(s, o);
                Ok(())
            },
            |_, _, s| {
                let (a, b) = extremes(s);
                fmin = fmin.min(a);
                fmax = fmax.max(b);
                Ok(())
            },
        )
    } else {
        let mut op = EulerRhs::new(recon, gas, settings.eps_sw, spec.bc);
        if spec.bc == BoundaryRule::FixedRight {
            let ghosts = (0..op.ghosts())
                .map(|i| {
                    let (rho, v, p) = spec.primitive_initial(spec.x_hi + (i as f64 + 0.5) * dx);
                    prim_to_cons(rho, v, p, gas)
                })
                .collect::<Result<Vec<_>>>()?;
            op = op.with_fixed_right(&ghosts)?;
        }
        integrate(
            &mut u,
            spec.t_final,
            method,
            |s| compute_dt(policy, dx, r, max_wave_speed(s, gas)),
            |s, o| op.eval(s, o),
            |_, _, s| {
                for j in 0..n {
                    let (rho, mom, e) = (s[j], s[n + j], s[2 * n + j]);
                    let p = gas.pressure(rho, mom, e);
                    fmin = fmin.min(rho);
                    fmax = fmax.max(rho);
                    pmin = pmin.min(p);
                    if !(rho > 0.0) || !(p > 0.0) {
                        return Err(BlowUp {
                            cell: j,
                            time: 0.0,
                            step: 0,
                            reason: format!("rho = {rho:e}, p = {p:e}"),
                        });
                    }
                }
                Ok(())
            },
        )
    };
    let (blow_up, steps, t_reached) = match result {
        Ok(s) => (None, s.steps, s.t_final),
        Err(b) => {
            let (st, t) = (b.step, b.time);
            (Some(b), st, t)
        }
    };
    let boundary_drift = (!spec.is_scalar() && matches!(spec.bc, BoundaryRule::ZeroGradient | BoundaryRule::FixedRight)).then(|| {
        let mut d: f64 = 0.0;
        for c in 0..3 {
            for j in [0, 1, n - 2, n - 1] {
                let (a, b) = (u[c * n + j], initial[c * n + j]);
                d = d.max((a - b).abs() / b.abs().max(1e-300));
            }
        }
        d
    });
    Ok(RunOutcome {
        state: u,
        blow_up,
        steps,
        t_reached,
        field_min: fmin,
        field_max: fmax,
        pressure_min: (!spec.is_scalar()).then_some(pmin),
        boundary_drift,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn extremes(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

/// `(L1, Linf)` with `L1 = dx * sum |u - ref|`.
pub fn error_norms(u: &[f64], reference: &[f64], dx: f64) -> (f64, f64) {
    let mut l1 = 0.0;
    let mut li: f64 = 0.0;
    for (a, b) in u.iter().zip(reference) {
        let e = (a - b).abs();
        l1 += e;
        li = li.max(e);
    }
    (dx * l1, li)
}

/// Overshoot beyond the reference range plus the total-variation excess
/// in windows of `TV_HALF_WINDOW` cells around reference jumps. The excess
/// is measured against the larger of the reference variation and the
/// field's own end-to-end change, so monotone smearing scores zero.
pub fn oscillation_metric(field: &[f64], reference: &[f64]) -> f64 {
    let (fmin, fmax) = extremes(field);
    let (rmin, rmax) = extremes(reference);
    let over = (fmax - rmax).max(rmin - fmin).max(0.0);
    over + tv_excess(field, reference)
}

pub const TV_HALF_WINDOW: usize = 5;
/// A jump is a neighbour difference above this fraction of the range.
pub const JUMP_FRACTION: f64 = 0.2;

fn tv_excess(field: &[f64], reference: &[f64]) -> f64 {
    let n = reference.len();
    if n < 2 {
        return 0.0;
    }
    let (rmin, rmax) = extremes(reference);
    let thresh = JUMP_FRACTION * (rmax - rmin);
    if !(thresh > 0.0) {
        return 0.0;
    }
    let mut marked = vec![false; n];
    for j in 0..n - 1 {
        if (reference[j + 1] - reference[j]).abs() > thresh {
            let lo = j.saturating_sub(TV_HALF_WINDOW);
            let hi = (j + 1 + TV_HALF_WINDOW).min(n - 1);
            marked[lo..=hi].iter_mut().for_each(|m| *m = true);
        }
    }
    let tv = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
    let mut total = 0.0;
    let mut j = 0;
    while j < n {
        if !marked[j] {
            j += 1;
            continue;
        }
        let s = j;
        while j < n && marked[j] {
            j += 1;
        }
        let own = (field[j - 1] - field[s]).abs();
        total += (tv(&field[s..j]) - tv(&reference[s..j]).max(own)).max(0.0);
    }
    total
}

/// One output row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub problem: String,
    pub scheme: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L1")]
    pub l1: Option<f64>,
    #[serde(rename = "Linf")]
    pub linf: Option<f64>,
    #[serde(rename = "order_L1")]
    pub order_l1: Option<f64>,
    #[serde(rename = "order_Linf")]
    pub order_linf: Option<f64>,
    pub oscillation: Option<f64>,
    pub blow_up_step: Option<usize>,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub row: CaseRow,
    pub outcome: RunOutcome,
    pub reference: Option<ReferenceSolution>,
}

/// Runs one case and compares the primary field with the reference when
/// the problem has one.
pub fn run_case(
    spec: &ProblemSpec,
    strategy: &WeightingStrategy,
    n: usize,
    settings: &RunSettings,
) -> Result<CaseResult> {
    let outcome = simulate(spec, strategy, n, settings)?;
    let has_ref = spec.is_scalar() || spec.n_ref.is_some();
    let reference = if has_ref && outcome.blow_up.is_none() { Some(reference(spec, n, settings)?) } else { None };
    let (mut l1, mut linf, mut osc) = (None, None, None);
    if let Some(r) = &reference {
        let x = spec.grid(n);
        let rv = r.sample(0, &x);
        let (a, b) = error_norms(outcome.primary(spec), &rv, spec.dx(n));
        l1 = Some(a);
        linf = Some(b);
        osc = Some(oscillation_metric(outcome.primary(spec), &rv));
    }
    let row = CaseRow {
        problem: spec.id.name(),
        scheme: strategy.label(),
        n,
        l1,
        linf,
        order_l1: None,
        order_linf: None,
        oscillation: osc,
        blow_up_step: outcome.blow_up.as_ref().map(|b| b.step),
        wall_ms: Some(outcome.wall_ms),
    };
    Ok(CaseResult { row, outcome, reference })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub rows: Vec<CaseRow>,
    /// `(step, cell)` of the run that stopped the study.
    pub blow_up: Option<(usize, usize)>,
}

impl ErrorReport {
    pub fn orders_linf(&self) -> Vec<f64> {
        self.rows.iter().skip(1).filter_map(|r| r.order_linf).collect()
    }

    pub fn orders_l1(&self) -> Vec<f64> {
        self.rows.iter().skip(1).filter_map(|r| r.order_l1).collect()
    }
}

/// `log(e_a / e_b) / log(n_b / n_a)`.
pub fn observed_order(e_a: f64, e_b: f64, n_a: usize, n_b: usize) -> f64 {
    (e_a / e_b).ln() / (n_b as f64 / n_a as f64).ln()
}

/// Errors and pairwise orders on a grid sequence. A blow-up ends the study
/// with the rows gathered so far.
pub fn convergence_study(
    spec: &ProblemSpec,
    strategy: &WeightingStrategy,
    grids: &[usize],
    settings: &RunSettings,
) -> Result<ErrorReport> {
    if !spec.is_scalar() {
        return Err(Error::Config("convergence studies need a scalar problem".into()));
    }
    let mut rows: Vec<CaseRow> = Vec::new();
    for &n in grids {
        let res = run_case(spec, strategy, n, settings)?;
        if let Some(b) = &res.outcome.blow_up {
            rows.push(res.row);
            return Ok(ErrorReport { rows, blow_up: Some((b.step, b.cell)) });
        }
        let mut row = res.row;
        if let Some(prev) = rows.last() {
            if let (Some(a), Some(b)) = (prev.l1, row.l1) {
                row.order_l1 = Some(observed_order(a, b, prev.n, n));
            }
            if let (Some(a), Some(b)) = (prev.linf, row.linf) {
                row.order_linf = Some(observed_order(a, b, prev.n, n));
            }
        }
        rows.push(row);
    }
    Ok(ErrorReport { rows, blow_up: None })
}

/// One entry of an experiment matrix.
#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub problem: ProblemSpec,
    pub strategy: WeightingStrategy,
    pub n: usize,
    pub settings: RunSettings,
}

/// Runs cases in parallel; results keep the input order.
pub fn run_matrix(cases: &[CaseSpec]) -> Vec<Result<CaseResult>> {
    cases.par_iter().map(|c| run_case(&c.problem, &c.strategy, c.n, &c.settings)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub const COLUMNS: [&str; 10] =
    ["problem", "scheme", "N", "L1", "Linf", "order_L1", "order_Linf", "oscillation", "blow_up_step", "wall_ms"];

/// Writes rows in the fixed column order. `wall_ms` is left empty unless
/// `timing` is set, so that repeated runs give identical files.
pub fn write_results<W: Write>(rows: &[CaseRow], format: OutputFormat, timing: bool, out: W) -> Result<()> {
    let rows: Vec<CaseRow> = rows
        .iter()
        .cloned()
        .map(|mut r| {
            if !timing {
                r.wall_ms = None;
            }
            r
        })
        .collect();
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(COLUMNS)?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(out, &rows)?;
        }
    }
    Ok(())
}

pub fn emit_results(rows: &[CaseRow], format: OutputFormat, timing: bool, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let f = std::fs::File::create(path)?;
    write_results(rows, format, timing, std::io::BufWriter::new(f))
}

/// Smooth-region order of WENO9-JS on advection of `sin(pi x)`, measured
/// on the last pair of `grids`. Returns `(order, ok)` with `ok` when the
/// order reaches 9 - 0.5.
pub fn weno9_order_diagnostic(grids: &[usize]) -> Result<(f64, bool)> {
    let spec = ProblemSpec::swa1(1e12);
    let report = convergence_study(&spec, &WeightingStrategy::js(5), grids, &RunSettings::default())?;
    let order = *report
        .orders_linf()
        .last()
        .ok_or_else(|| Error::Config("need at least two grids".into()))?;
    Ok((order, order >= 8.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::table6_specs;
    use crate::problems::ProblemId;

    #[test]
    fn norms_match_naive_oracle() {
        let u = [0.1, -0.4, 2.0, 0.0];
        let r = [0.0, 0.1, 1.5, 0.3];
        let (l1, li) = error_norms(&u, &r, 0.5);
        let naive: f64 = 0.5 * (0.1f64.abs() + 0.5 + 0.5 + 0.3);
        assert!((l1 - naive).abs() < 1e-14);
        assert!((li - 0.5).abs() < 1e-14);
    }

    #[test]
    fn oscillation_cases() {
        let sq: Vec<f64> = (0..40).map(|j| if (10..20).contains(&j) { 1.0 } else { 0.0 }).collect();
        assert_eq!(oscillation_metric(&sq, &sq), 0.0);
        let mut over = sq.clone();
        over[12] = 1.05;
        assert!(oscillation_metric(&over, &sq) >= 0.05);
        // monotone smearing of each edge
        let smear: Vec<f64> = (0..40)
            .map(|j| {
                let x = j as f64;
                let up = 0.5 * (1.0 + ((x - 9.5) / 1.5).tanh());
                let dn = 0.5 * (1.0 - ((x - 19.5) / 1.5).tanh());
                up.min(dn)
            })
            .collect();
        assert_eq!(oscillation_metric(&smear, &sq), 0.0);
        let mut wig = sq.clone();
        wig[8] = -0.0;
        wig[7] = 0.02;
        wig[21] = 0.03;
        assert!(oscillation_metric(&wig, &sq) >= 0.04);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_results(&[], OutputFormat::Csv, false, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), COLUMNS.join(",") + "\n");
        let row = CaseRow {
            problem: "p".into(),
            scheme: "s".into(),
            n: 20,
            l1: Some(0.5),
            linf: None,
            order_l1: None,
            order_linf: Some(3.0),
            oscillation: None,
            blow_up_step: Some(7),
            wall_ms: Some(1.0),
        };
        let mut buf = Vec::new();
        write_results(&[row.clone()], OutputFormat::Csv, false, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().nth(1).unwrap(), "p,s,20,0.5,,,3.0,,7,");
        let mut buf = Vec::new();
        write_results(&[row], OutputFormat::Json, true, &mut buf).unwrap();
        let v: Vec<CaseRow> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0].wall_ms, Some(1.0));
    }

    #[test]
    fn swa1_study_has_five_rows_and_linear_order() {
        let spec = ProblemSpec::swa1(1.0);
        let rep = convergence_study(&spec, &WeightingStrategy::linear(3), &[20, 40, 80, 160, 320], &RunSettings::default())
            .unwrap();
        assert_eq!(rep.rows.len(), 5);
        let o = rep.orders_linf();
        assert!((o[2] - 5.0).abs() < 0.2, "{o:?}");
    }

    #[test]
    fn smoke_upgraded_weno3_prm() {
        let s = WeightingStrategy::mapped(2, table6_specs(2).unwrap()).upgraded();
        let res = run_case(&ProblemSpec::swa1(1.0), &s, 40, &RunSettings::default()).unwrap();
        assert!(res.outcome.blow_up.is_none());
        assert!(res.row.linf.unwrap() < 0.1);
    }

    #[test]
    fn deterministic_rows() {
        let spec = ProblemSpec::new(ProblemId::Combo).with_t_final(0.2);
        let s = WeightingStrategy::mapped(3, table6_specs(3).unwrap());
        let a = run_case(&spec, &s, 100, &RunSettings::default()).unwrap();
        let b = run_case(&spec, &s, 100, &RunSettings::default()).unwrap();
        assert_eq!(a.outcome.state, b.outcome.state);
        assert_eq!(a.row.l1, b.row.l1);
    }

    #[test]
    fn matrix_keeps_order() {
        let spec = ProblemSpec::new(ProblemId::Combo).with_t_final(0.05);
        let cases: Vec<CaseSpec> = [40, 60, 80]
            .iter()
            .map(|&n| CaseSpec { problem: spec, strategy: WeightingStrategy::js(3), n, settings: RunSettings::default() })
            .collect();
        let out = run_matrix(&cases);
        let ns: Vec<usize> = out.iter().map(|r| r.as_ref().unwrap().row.n).collect();
        assert_eq!(ns, vec![40, 60, 80]);
    }

    #[test]
    fn blow_up_is_recorded_not_fatal() {
        let spec = ProblemSpec::new(ProblemId::StrongShock { pr: 1e6 });
        let mut s = RunSettings::default();
        s.policy = Some(StepPolicy::cfl(5.0));
        let res = run_case(&spec, &WeightingStrategy::js(3), 201, &s).unwrap();
        assert!(res.outcome.blow_up.is_some());
        assert!(res.row.blow_up_step.is_some());
    }
}
