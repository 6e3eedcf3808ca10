//! Numerical verification of the `C_{n,m,k}` conditions, monotonicity and
//! freedom from singularities.
//!
//! Derivatives come from truncated Taylor arithmetic on the branch formula,
//! which is exact up to rounding. Low-order derivatives are additionally
//! estimated by Richardson-extrapolated one-sided differences; the
//! discrepancy is reported but does not decide the verdict, since steep
//! parameter choices (c2 ~ 1e9) shrink the Taylor radius far below any
//! usable difference step.

use serde::Serialize;

use super::{MappingSpec, Side};
use crate::jet::{Jet, JET_LEN};

/// Highest derivative order the checker can resolve.
pub const MAX_ORDER: u32 = (JET_LEN - 1) as u32;

const VANISH_TOL: f64 = 1e-9;

/// Derivatives of one branch at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeSummary {
    pub point: f64,
    pub side: Side,
    /// `g^(i)` for `i = 1..=len`.
    pub derivatives: Vec<f64>,
    /// Whether each entry is classified as zero.
    pub vanishing: Vec<bool>,
    /// Measured order: at `dk` the count of leading vanishing derivatives;
    /// at an endpoint the largest `j` with `g'` in {0, 1} and `g^(i) = 0`
    /// for `2 <= i <= j` (0 when `g'` is neither).
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdCheck {
    pub point: f64,
    pub side: Side,
    pub order: u32,
    pub exact: f64,
    pub richardson: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnmReport {
    pub dk: f64,
    pub n: u32,
    pub m: u32,
    pub k: u32,
    /// `|g(0)|`, `|g(dk) - dk|`, `|g(1) - 1|` (worst branch).
    pub fixed_point_errors: [f64; 3],
    pub at_dk_left: DerivativeSummary,
    pub at_dk_right: DerivativeSummary,
    pub at_0: DerivativeSummary,
    pub at_1: DerivativeSummary,
    pub endpoint_slope_0: f64,
    pub endpoint_slope_1: f64,
    pub monotone: bool,
    pub fd_checks: Vec<FdCheck>,
    pub fd_max_rel_error: f64,
    /// True when some derivative estimate was not finite.
    pub differentiation_failure: bool,
    pub failures: Vec<String>,
    pub satisfied: bool,
}

fn jet_at(spec: &MappingSpec, side: Side, x: f64) -> Jet {
    spec.branch(side, Jet::variable(x), 1.0)
}

/// Classifies Taylor coefficients `t_i` as zero against the branch length
/// `len` so that the test is invariant to rescaling of `omega`.
fn summarize(spec: &MappingSpec, side: Side, x: f64, len: f64, upto: u32, endpoint: bool) -> DerivativeSummary {
    let j = jet_at(spec, side, x);
    let upto = upto.min(MAX_ORDER) as usize;
    let mut derivatives = Vec::with_capacity(upto);
    let mut vanishing = Vec::with_capacity(upto);
    for i in 1..=upto {
        derivatives.push(j.derivative(i));
        vanishing.push((j.c[i] * len.powi(i as i32 - 1)).abs() < VANISH_TOL);
    }
    let order = if endpoint {
        let s = derivatives.first().copied().unwrap_or(f64::NAN);
        if (s - 1.0).abs() < VANISH_TOL || s.abs() < VANISH_TOL {
            1 + vanishing.iter().skip(1).take_while(|&&v| v).count() as u32
        } else {
            0
        }
    } else {
        vanishing.iter().take_while(|&&v| v).count() as u32
    };
    DerivativeSummary { point: x, side, derivatives, vanishing, order }
}

fn branch_f64(spec: &MappingSpec, side: Side, x: f64) -> f64 {
    spec.branch(side, x, 1.0)
}

/// One-sided difference estimate of `g^(p)` at `x` with step `h`, with
/// `dir = +1` (forward) or `-1` (backward).
fn one_sided(spec: &MappingSpec, side: Side, x: f64, p: u32, h: f64, dir: f64) -> f64 {
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=p {
        let sgn = if (p - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sgn * binom * branch_f64(spec, side, x + dir * j as f64 * h);
        binom = binom * (p - j) as f64 / (j + 1) as f64;
    }
    acc / (dir.powi(p as i32) * h.powi(p as i32))
}

/// Richardson-extrapolated one-sided derivative with steps `h0 * 2^-i`.
pub fn richardson_derivative(spec: &MappingSpec, side: Side, x: f64, p: u32, h0: f64, dir: f64) -> f64 {
    const LEVELS: usize = 4;
    let mut t = [[0.0; LEVELS]; LEVELS];
    for (i, row) in t.iter_mut().enumerate() {
        row[0] = one_sided(spec, side, x, p, h0 / 2f64.powi(i as i32), dir);
    }
    for j in 1..LEVELS {
        let f = 2f64.powi(j as i32);
        for i in j..LEVELS {
            t[i][j] = t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / (f - 1.0);
        }
    }
    t[LEVELS - 1][LEVELS - 1]
}

fn monotone(spec: &MappingSpec) -> bool {
    let mut prev = spec.eval(0.0);
    let n = 10_000;
    let dk = spec.dk();
    let mut pts: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    pts.push(dk);
    pts.sort_by(f64::total_cmp);
    for &w in &pts[1..] {
        let g = spec.eval(w);
        if !(g >= prev - 1e-14) {
            return false;
        }
        prev = g;
    }
    true
}

/// `check_cnmk` with equal endpoint orders.
pub fn check_cnm(spec: &MappingSpec, n: u32, m: u32) -> CnmReport {
    check_cnmk(spec, n, m, m)
}

/// Checks `C_{n,m,k}`: order `n` at `dk`, `m` at 0 and `k` at 1.
pub fn check_cnmk(spec: &MappingSpec, n: u32, m: u32, k: u32) -> CnmReport {
    let d = spec.dk();
    let upto_d = (n + 1).min(MAX_ORDER);
    let at_dk_left = summarize(spec, Side::Left, d, d, upto_d, false);
    let at_dk_right = summarize(spec, Side::Right, d, 1.0 - d, upto_d, false);
    let at_0 = summarize(spec, Side::Left, 0.0, d, (m + 1).max(1).min(MAX_ORDER), true);
    let at_1 = summarize(spec, Side::Right, 1.0, 1.0 - d, (k + 1).max(1).min(MAX_ORDER), true);

    let fixed_point_errors = [
        branch_f64(spec, Side::Left, 0.0).abs(),
        (branch_f64(spec, Side::Left, d) - d)
            .abs()
            .max((branch_f64(spec, Side::Right, d) - d).abs()),
        (branch_f64(spec, Side::Right, 1.0) - 1.0).abs(),
    ];

    let mut fd_checks = Vec::new();
    let h0 = 1e-2 * d.min(1.0 - d);
    for (x, side, dir, summary) in [
        (d, Side::Left, -1.0, &at_dk_left),
        (d, Side::Right, 1.0, &at_dk_right),
        (0.0, Side::Left, 1.0, &at_0),
        (1.0, Side::Right, -1.0, &at_1),
    ] {
        for p in 1..=3u32.min(summary.derivatives.len() as u32) {
            fd_checks.push(FdCheck {
                point: x,
                side,
                order: p,
                exact: summary.derivatives[p as usize - 1],
                richardson: richardson_derivative(spec, side, x, p, h0, dir),
            });
        }
    }
    let fd_max_rel_error = fd_checks
        .iter()
        .map(|c| (c.exact - c.richardson).abs() / c.exact.abs().max(1.0))
        .fold(0.0, f64::max);

    let differentiation_failure = [&at_dk_left, &at_dk_right, &at_0, &at_1]
        .iter()
        .any(|s| s.derivatives.iter().any(|v| !v.is_finite()));

    let mut failures = Vec::new();
    if n + 1 > MAX_ORDER || m + 1 > MAX_ORDER || k + 1 > MAX_ORDER {
        failures.push(format!("requested orders exceed the differentiation budget ({MAX_ORDER})"));
    }
    if differentiation_failure {
        failures.push("non-finite derivative estimate".into());
    }
    let labels = ["g(0) = 0", "g(dk) = dk", "g(1) = 1"];
    for (e, label) in fixed_point_errors.iter().zip(labels) {
        if !(*e <= 1e-12) {
            failures.push(format!("{label} violated by {e:e}"));
        }
    }
    for s in [&at_dk_left, &at_dk_right] {
        if s.order != n {
            failures.push(format!(
                "{:?} branch at dk: measured order {} (expected {n})",
                s.side, s.order
            ));
        }
    }
    for (s, want, name) in [(&at_0, m, "0"), (&at_1, k, "1")] {
        let ok = if want == 0 {
            // only g' != 0 is required
            s.derivatives.first().is_some_and(|g1| !s.vanishing[0] && g1.is_finite())
        } else {
            // extra vanishing derivatives still meet the condition
            s.order >= want
        };
        if !ok {
            failures.push(format!("endpoint {name}: measured order {} (expected {want})", s.order));
        }
    }
    let mono = monotone(spec);
    if !mono {
        failures.push("not monotone".into());
    }

    CnmReport {
        dk: d,
        n,
        m,
        k,
        fixed_point_errors,
        endpoint_slope_0: at_0.derivatives.first().copied().unwrap_or(f64::NAN),
        endpoint_slope_1: at_1.derivatives.first().copied().unwrap_or(f64::NAN),
        at_dk_left,
        at_dk_right,
        at_0,
        at_1,
        monotone: mono,
        fd_checks,
        fd_max_rel_error,
        differentiation_failure,
        satisfied: failures.is_empty(),
        failures,
    }
}

/// True when every branch denominator keeps one sign and stays away from
/// zero on a dense sample of its domain. Polynomial families are trivially
/// singularity-free.
pub fn check_singularity_free(spec: &MappingSpec) -> bool {
    let d = spec.dk();
    let n = 10_000;
    let domains: Vec<(Side, f64, f64)> = if spec.is_piecewise() {
        vec![(Side::Left, 0.0, d), (Side::Right, d, 1.0)]
    } else {
        vec![(Side::Right, 0.0, 1.0)]
    };
    for (side, lo, hi) in domains {
        let mut vals = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let w = lo + (hi - lo) * i as f64 / n as f64;
            match spec.branch_denominator(side, w, 1.0) {
                Some(v) => vals.push(v),
                None => return true,
            }
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let scale = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if vals.iter().any(|v| v.abs() <= 1e-12 * scale) {
            return false;
        }
        if vals.windows(2).any(|p| p[0].signum() != p[1].signum()) {
            return false;
        }
    }
    true
}
