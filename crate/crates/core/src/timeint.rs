//! Explicit Runge–Kutta integrators and time-step policies.

use serde::{Deserialize, Serialize};

use crate::error::{BlowUp, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum StepPolicy {
    FixedDt { value: f64 },
    Cfl { value: f64 },
    /// `dt = min(value * dx^{(2r-1)/4}, dx)`.
    Accuracy { value: f64 },
}

impl StepPolicy {
    pub fn accuracy() -> Self {
        StepPolicy::Accuracy { value: 0.9 }
    }

    pub fn cfl(value: f64) -> Self {
        StepPolicy::Cfl { value }
    }

    pub fn validate(&self) -> Result<()> {
        let v = match *self {
            StepPolicy::FixedDt { value } | StepPolicy::Cfl { value } | StepPolicy::Accuracy { value } => value,
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Config(format!("step policy value must be positive, got {v}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    TvdRk3,
    Rk4,
}

/// Step size for grid spacing `dx`, scheme index `r` and the largest wave
/// speed. A zero wave speed falls back to `dx`.
pub fn compute_dt(policy: StepPolicy, dx: f64, r: usize, max_speed: f64) -> f64 {
    match policy {
        StepPolicy::FixedDt { value } => value,
        StepPolicy::Cfl { value } => {
            if max_speed > 0.0 {
                value * dx / max_speed
            } else {
                value * dx
            }
        }
        StepPolicy::Accuracy { value } => (value * dx.powf((2 * r - 1) as f64 / 4.0)).min(dx),
    }
}

/// Work buffers reused across steps.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Workspace {
    fn ensure(&mut self, n: usize) {
        for v in self.k.iter_mut().chain(std::iter::once(&mut self.tmp)) {
            v.resize(n, 0.0);
        }
    }
}

pub type RhsResult = std::result::Result<(), BlowUp>;

/// Three-stage TVD Runge–Kutta step in place.
pub fn tvd_rk3_step<F>(u: &mut [f64], rhs: &mut F, dt: f64, ws: &mut Workspace) -> RhsResult
where
    F: FnMut(&[f64], &mut [f64]) -> RhsResult,
{
    let n = u.len();
    ws.ensure(n);
    let [k, u1, u2, _] = &mut ws.k;
    rhs(u, k)?;
    for i in 0..n {
        u1[i] = u[i] + dt * k[i];
    }
    rhs(u1, k)?;
    for i in 0..n {
        u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * k[i]);
    }
    rhs(u2, k)?;
    for i in 0..n {
        u[i] = (u[i] + 2.0 * (u2[i] + dt * k[i])) / 3.0;
    }
    Ok(())
}

/// Classical fourth-order Runge–Kutta step in place.
pub fn rk4_step<F>(u: &mut [f64], rhs: &mut F, dt: f64, ws: &mut Workspace) -> RhsResult
where
    F: FnMut(&[f64], &mut [f64]) -> RhsResult,
{
    let n = u.len();
    ws.ensure(n);
    let [k1, k2, k3, k4] = &mut ws.k;
    let tmp = &mut ws.tmp;
    rhs(u, k1)?;
    for i in 0..n {
        tmp[i] = u[i] + 0.5 * dt * k1[i];
    }
    rhs(tmp, k2)?;
    for i in 0..n {
        tmp[i] = u[i] + 0.5 * dt * k2[i];
    }
    rhs(tmp, k3)?;
    for i in 0..n {
        tmp[i] = u[i] + dt * k3[i];
    }
    rhs(tmp, k4)?;
    for i in 0..n {
        u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationStats {
    pub steps: usize,
    pub t_final: f64,
}

/// Advances `u` from 0 to `t_end`; the last step is shortened to land on
/// `t_end`. `observe` sees the state after every step and may report a
/// blow-up itself.
pub fn integrate<F, D, O>(
    u: &mut [f64],
    t_end: f64,
    method: Integrator,
    mut dt_fn: D,
    mut rhs: F,
    mut observe: O,
) -> std::result::Result<IntegrationStats, BlowUp>
where
    F: FnMut(&[f64], &mut [f64]) -> RhsResult,
    D: FnMut(&[f64]) -> f64,
    O: FnMut(usize, f64, &[f64]) -> RhsResult,
{
    let mut ws = Workspace::default();
    let mut t = 0.0;
    let mut step = 0;
    let stamp = |mut b: BlowUp, t: f64, step: usize| {
        b.time = t;
        b.step = step;
        b
    };
    while t < t_end {
        let mut dt = dt_fn(u);
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(BlowUp { cell: 0, time: t, step, reason: format!("invalid time step {dt}") });
        }
        if t + dt >= t_end || t_end - (t + dt) < 1e-12 * t_end {
            dt = t_end - t;
        }
        let r = match method {
            Integrator::TvdRk3 => tvd_rk3_step(u, &mut rhs, dt, &mut ws),
            Integrator::Rk4 => rk4_step(u, &mut rhs, dt, &mut ws),
        };
        r.map_err(|b| stamp(b, t, step))?;
        if let Some(cell) = u.iter().position(|v| !v.is_finite()) {
            return Err(BlowUp { cell, time: t, step, reason: "non-finite state".into() });
        }
        t = if dt == t_end - t { t_end } else { t + dt };
        observe(step, t, u).map_err(|b| stamp(b, t, step))?;
        step += 1;
    }
    Ok(IntegrationStats { steps: step, t_final: t })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(u: &[f64], out: &mut [f64]) -> RhsResult {
        out[0] = -u[0];
        Ok(())
    }

    fn err(method: Integrator, dt: f64) -> f64 {
        let mut u = [1.0];
        integrate(&mut u, 1.0, method, |_| dt, decay, |_, _, _| Ok(())).unwrap();
        (u[0] - (-1.0f64).exp()).abs()
    }

    #[test]
    fn zero_rhs_is_identity() {
        let mut ws = Workspace::default();
        let mut zero = |_: &[f64], o: &mut [f64]| {
            o.fill(0.0);
            Ok(())
        };
        let mut u = vec![1.5, -2.0];
        tvd_rk3_step(&mut u, &mut zero, 0.3, &mut ws).unwrap();
        rk4_step(&mut u, &mut zero, 0.3, &mut ws).unwrap();
        assert_eq!(u, vec![1.5, -2.0]);
    }

    #[test]
    fn single_step_taylor() {
        let mut ws = Workspace::default();
        let h: f64 = 0.1;
        let mut u = vec![1.0];
        tvd_rk3_step(&mut u, &mut decay, h, &mut ws).unwrap();
        assert!((u[0] - (1.0 - h + h * h / 2.0 - h.powi(3) / 6.0)).abs() < 1e-15);
        let mut u = vec![1.0];
        rk4_step(&mut u, &mut decay, h, &mut ws).unwrap();
        assert!((u[0] - (1.0 - h + h * h / 2.0 - h.powi(3) / 6.0 + h.powi(4) / 24.0)).abs() < 1e-15);
        assert!((u[0] - (-h).exp()).abs() < h.powi(5));
    }

    #[test]
    fn rk4_cubic_forcing_is_exact() {
        let mut u = [0.0, 0.0];
        // u0' = 1 carries time, u1' = t^3
        let rhs = |s: &[f64], o: &mut [f64]| {
            o[0] = 1.0;
            o[1] = s[0].powi(3);
            Ok(())
        };
        integrate(&mut u, 2.0, Integrator::Rk4, |_| 0.25, rhs, |_, _, _| Ok(())).unwrap();
        assert!((u[1] - 4.0).abs() < 1e-13);
    }

    #[test]
    fn measured_orders() {
        for (m, p) in [(Integrator::TvdRk3, 3.0), (Integrator::Rk4, 4.0)] {
            let dts = [0.04, 0.02, 0.01, 0.005];
            let e: Vec<f64> = dts.iter().map(|&d| err(m, d)).collect();
            for w in e.windows(2) {
                let o = (w[0] / w[1]).log2();
                assert!((o - p).abs() < 0.05, "{m:?} {o}");
            }
        }
    }

    #[test]
    fn lands_on_final_time() {
        let mut u = [1.0];
        let s = integrate(&mut u, 1.0, Integrator::TvdRk3, |_| 0.3, decay, |_, _, _| Ok(())).unwrap();
        assert_eq!(s.t_final, 1.0);
        assert_eq!(s.steps, 4);
    }

    #[test]
    fn rk3_advection_amplification() {
        // Fourier symbol of first-order upwind: z = -nu (1 - e^{-i theta})
        let n = 16;
        let nu = 0.5;
        let theta = 2.0 * std::f64::consts::PI / n as f64;
        let u0: Vec<f64> = (0..n).map(|j| (theta * j as f64).cos()).collect();
        let mut u = u0.clone();
        let mut ws = Workspace::default();
        let mut rhs = |s: &[f64], o: &mut [f64]| {
            for j in 0..n {
                o[j] = -(s[j] - s[(j + n - 1) % n]);
            }
            Ok(())
        };
        tvd_rk3_step(&mut u, &mut rhs, nu, &mut ws).unwrap();
        let (zr, zi) = (-nu * (1.0 - theta.cos()), -nu * theta.sin());
        // G = 1 + z + z^2/2 + z^3/6
        let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        let z2 = mul((zr, zi), (zr, zi));
        let z3 = mul(z2, (zr, zi));
        let g = (1.0 + zr + z2.0 / 2.0 + z3.0 / 6.0, zi + z2.1 / 2.0 + z3.1 / 6.0);
        for j in 0..n {
            let ph = theta * j as f64;
            let expect = g.0 * ph.cos() - g.1 * ph.sin();
            assert!((u[j] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn dt_policies() {
        assert!((compute_dt(StepPolicy::cfl(0.1), 0.01, 3, 1.0) - 0.001).abs() < 1e-18);
        let a = compute_dt(StepPolicy::accuracy(), 0.1, 3, 1.0);
        assert!((a - (0.9 * 0.1f64.powf(1.25)).min(0.1)).abs() < 1e-18);
        assert_eq!(compute_dt(StepPolicy::cfl(0.5), 0.2, 3, 0.0), 0.1);
        assert!(StepPolicy::cfl(-1.0).validate().is_err());
    }

    #[test]
    fn blow_up_is_stamped() {
        let mut u = [1.0];
        let mut calls = 0;
        let rhs = |_: &[f64], o: &mut [f64]| {
            calls += 1;
            if calls > 6 {
                return Err(BlowUp { cell: 3, time: 0.0, step: 0, reason: "x".into() });
            }
            o[0] = 0.0;
            Ok(())
        };
        let e = integrate(&mut u, 1.0, Integrator::TvdRk3, |_| 0.1, rhs, |_, _, _| Ok(())).unwrap_err();
        assert_eq!((e.step, e.cell), (2, 3));
        assert!((e.time - 0.2).abs() < 1e-15);
    }
}
