//! 1-D Euler equations with Steger–Warming flux-vector splitting.
//!
//! Fields are stored component-major: `[rho; n] ++ [mom; n] ++ [E; n]`.

use serde::{Deserialize, Serialize};

use crate::error::{BlowUp, Error, Result};
use crate::problems::{pad_component, BoundaryRule};
use crate::scheme::Reconstructor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedState {
    pub rho: f64,
    pub mom: f64,
    pub e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    pub gamma: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::Config(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn pressure(&self, rho: f64, mom: f64, e: f64) -> f64 {
        (self.gamma - 1.0) * (e - 0.5 * mom * mom / rho)
    }

    #[inline]
    pub fn sound_speed(&self, rho: f64, p: f64) -> f64 {
        (self.gamma * p / rho).sqrt()
    }
}

pub fn prim_to_cons(rho: f64, u: f64, p: f64, gas: GasModel) -> Result<ConservedState> {
    if !(rho > 0.0) || !(p > 0.0) || !u.is_finite() {
        return Err(Error::State(format!("(rho, u, p) = ({rho}, {u}, {p})")));
    }
    Ok(ConservedState { rho, mom: rho * u, e: p / (gas.gamma - 1.0) + 0.5 * rho * u * u })
}

/// Returns `(rho, u, p)`.
pub fn cons_to_prim(s: ConservedState, gas: GasModel) -> Result<(f64, f64, f64)> {
    if !(s.rho > 0.0) {
        return Err(Error::State(format!("density {} is not positive", s.rho)));
    }
    let p = gas.pressure(s.rho, s.mom, s.e);
    if !(p > 0.0) {
        return Err(Error::State(format!("pressure {p} is not positive")));
    }
    Ok((s.rho, s.mom / s.rho, p))
}

/// Physical flux `(rho u, rho u^2 + p, u (E + p))`.
pub fn physical_flux(s: ConservedState, gas: GasModel) -> [f64; 3] {
    let u = s.mom / s.rho;
    let p = gas.pressure(s.rho, s.mom, s.e);
    [s.mom, s.mom * u + p, u * (s.e + p)]
}

#[inline]
fn split_raw(rho: f64, u: f64, p: f64, gamma: f64, eps_factor: f64) -> ([f64; 3], [f64; 3]) {
    let c = (gamma * p / rho).sqrt();
    let eps = eps_factor * c;
    let e2 = eps * eps;
    let lam = [u - c, u, u + c];
    let mut lp = [0.0; 3];
    let mut lm = [0.0; 3];
    for i in 0..3 {
        let s = (lam[i] * lam[i] + e2).sqrt();
        lp[i] = 0.5 * (lam[i] + s);
        lm[i] = 0.5 * (lam[i] - s);
    }
    let h = c * c / (gamma - 1.0) + 0.5 * u * u;
    let k = rho / (2.0 * gamma);
    let g1 = gamma - 1.0;
    let f = |l: &[f64; 3]| {
        [
            k * (l[0] + 2.0 * g1 * l[1] + l[2]),
            k * ((u - c) * l[0] + 2.0 * g1 * u * l[1] + (u + c) * l[2]),
            k * ((h - u * c) * l[0] + g1 * u * u * l[1] + (h + u * c) * l[2]),
        ]
    };
    (f(&lp), f(&lm))
}

/// `(F+, F-)` with eigenvalues smoothed as `(l +- sqrt(l^2 + eps^2)) / 2`,
/// `eps = eps_factor * c`.
pub fn steger_warming_split(s: ConservedState, gas: GasModel, eps_factor: f64) -> Result<([f64; 3], [f64; 3])> {
    let (rho, u, p) = cons_to_prim(s, gas)?;
    if !(eps_factor >= 0.0) {
        return Err(Error::Config(format!("eps_sw must be non-negative, got {eps_factor}")));
    }
    Ok(split_raw(rho, u, p, gas.gamma, eps_factor))
}

/// Maximum of `|u| + c` over a component-major field.
pub fn max_wave_speed(state: &[f64], gas: GasModel) -> f64 {
    let n = state.len() / 3;
    let (rho, rest) = state.split_at(n);
    let (mom, e) = rest.split_at(n);
    let mut m: f64 = 0.0;
    for j in 0..n {
        let p = gas.pressure(rho[j], mom[j], e[j]);
        m = m.max((mom[j] / rho[j]).abs() + gas.sound_speed(rho[j], p));
    }
    m
}

/// Semi-discrete Euler operator with reusable buffers.
#[derive(Debug, Clone)]
pub struct EulerRhs {
    recon: Reconstructor,
    gas: GasModel,
    eps_sw: f64,
    bc: BoundaryRule,
    fixed_right: Option<[Vec<f64>; 3]>,
    padded: [Vec<f64>; 3],
    fp: [Vec<f64>; 3],
    fm: [Vec<f64>; 3],
    flux: [Vec<f64>; 3],
}

impl EulerRhs {
    pub fn new(recon: Reconstructor, gas: GasModel, eps_sw: f64, bc: BoundaryRule) -> Self {
        Self {
            recon,
            gas,
            eps_sw,
            bc,
            fixed_right: None,
            padded: Default::default(),
            fp: Default::default(),
            fm: Default::default(),
            flux: Default::default(),
        }
    }

    /// Right ghost states, nearest cell first, used with
    /// [`BoundaryRule::FixedRight`].
    pub fn with_fixed_right(mut self, ghosts: &[ConservedState]) -> Result<Self> {
        if ghosts.len() != self.ghosts() {
            return Err(Error::Config(format!("expected {} right ghost states, got {}", self.ghosts(), ghosts.len())));
        }
        self.fixed_right = Some([
            ghosts.iter().map(|s| s.rho).collect(),
            ghosts.iter().map(|s| s.mom).collect(),
            ghosts.iter().map(|s| s.e).collect(),
        ]);
        Ok(self)
    }

    pub fn reconstructor(&self) -> &Reconstructor {
        &self.recon
    }

    pub fn gas(&self) -> GasModel {
        self.gas
    }

    /// Ghost cells per side.
    pub fn ghosts(&self) -> usize {
        self.recon.half_width() + 1
    }

    /// Fills `out` with the time derivative. The returned [`BlowUp`] has
    /// `time` and `step` left at zero for the caller to fill in.
    pub fn eval(&mut self, state: &[f64], out: &mut [f64]) -> std::result::Result<(), BlowUp> {
        let n = state.len() / 3;
        let g = self.ghosts();
        let hw = self.recon.half_width();
        let w = self.recon.width();
        let np = n + 2 * g;
        let fail = |cell: usize, reason: String| BlowUp { cell, time: 0.0, step: 0, reason };
        for c in 0..3 {
            pad_component(&state[c * n..(c + 1) * n], g, self.bc, c == 1, &mut self.padded[c]);
            if let (BoundaryRule::FixedRight, Some(f)) = (self.bc, &self.fixed_right) {
                self.padded[c][n + g..].copy_from_slice(&f[c]);
            }
            self.fp[c].resize(np, 0.0);
            self.fm[c].resize(np, 0.0);
            self.flux[c].resize(n + 1, 0.0);
        }
        let gamma = self.gas.gamma;
        for i in 0..np {
            let rho = self.padded[0][i];
            let mom = self.padded[1][i];
            let e = self.padded[2][i];
            let p = self.gas.pressure(rho, mom, e);
            if !(rho > 0.0) || !(p > 0.0) || !mom.is_finite() || !e.is_finite() {
                let cell = i.saturating_sub(g).min(n - 1);
                return Err(fail(cell, format!("rho = {rho:e}, p = {p:e}")));
            }
            let (a, b) = split_raw(rho, mom / rho, p, gamma, self.eps_sw);
            for c in 0..3 {
                self.fp[c][i] = a[c];
                self.fm[c][i] = b[c];
            }
        }
        let mut wp = [0.0; 11];
        let mut wm = [0.0; 11];
        for i in 0..=n {
            let ctr = g - 1 + i;
            for c in 0..3 {
                wp[..w].copy_from_slice(&self.fp[c][ctr - hw..=ctr + hw]);
                for (l, v) in wm[..w].iter_mut().enumerate() {
                    *v = self.fm[c][ctr + 1 + hw - l];
                }
                let (a, b) = self.recon.reconstruct_pair(&wp[..w], &wm[..w]);
                let f = a + b;
                if !f.is_finite() {
                    return Err(fail(i.min(n - 1), format!("non-finite flux in component {c}")));
                }
                self.flux[c][i] = f;
            }
        }
        let inv = 1.0 / self.recon.dx();
        for c in 0..3 {
            for j in 0..n {
                out[c * n + j] = -(self.flux[c][j + 1] - self.flux[c][j]) * inv;
            }
        }
        Ok(())
    }

    /// Interface fluxes of the last evaluation, per component.
    pub fn last_fluxes(&self) -> &[Vec<f64>; 3] {
        &self.flux
    }
}

/// Component-major field from a list of states.
pub fn pack(states: &[ConservedState]) -> Vec<f64> {
    let n = states.len();
    let mut v = vec![0.0; 3 * n];
    for (j, s) in states.iter().enumerate() {
        v[j] = s.rho;
        v[n + j] = s.mom;
        v[2 * n + j] = s.e;
    }
    v
}

pub fn unpack(field: &[f64]) -> Vec<ConservedState> {
    let n = field.len() / 3;
    (0..n).map(|j| ConservedState { rho: field[j], mom: field[n + j], e: field[2 * n + j] }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::WeightingStrategy;
    use rand::{Rng, SeedableRng};

    const GAS: GasModel = GasModel { gamma: 1.4 };

    #[test]
    fn conversions() {
        let s = prim_to_cons(1.0, 0.0, 1.0, GAS).unwrap();
        assert!((s.e - 2.5).abs() < 1e-15);
        let s = prim_to_cons(0.125, 0.3, 0.1, GAS).unwrap();
        let (r, u, p) = cons_to_prim(s, GAS).unwrap();
        assert!((r - 0.125).abs() < 1e-14 && (u - 0.3).abs() < 1e-14 && (p - 0.1).abs() < 1e-14);
        assert!(prim_to_cons(-1.0, 0.0, 1.0, GAS).is_err());
        assert!(prim_to_cons(1.0, 0.0, 0.0, GAS).is_err());
        assert!(cons_to_prim(ConservedState { rho: 1.0, mom: 2.0, e: 1.0 }, GAS).is_err());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (r, u, p) = (rng.gen_range(1e-3..10.0), rng.gen_range(-5.0..5.0), rng.gen_range(1e-3..1e3));
            let (r2, u2, p2) = cons_to_prim(prim_to_cons(r, u, p, GAS).unwrap(), GAS).unwrap();
            assert!(((r2 - r) / r).abs() < 1e-14);
            assert!((u2 - u).abs() < 1e-13 * (1.0 + u.abs()));
            assert!(((p2 - p) / p).abs() < 1e-11);
        }
    }

    #[test]
    fn split_sums_to_flux() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let (r, u, p) = (rng.gen_range(1e-3..10.0), rng.gen_range(-30.0..30.0), rng.gen_range(1e-3..1e4));
            let s = prim_to_cons(r, u, p, GAS).unwrap();
            let (a, b) = steger_warming_split(s, GAS, 1e-6).unwrap();
            let f = physical_flux(s, GAS);
            let scale = f.iter().chain(&a).map(|v| v.abs()).fold(0.0, f64::max);
            for c in 0..3 {
                assert!((a[c] + b[c] - f[c]).abs() <= 1e-12 * scale, "{c}");
            }
        }
    }

    #[test]
    fn supersonic_and_still() {
        let s = prim_to_cons(1.0, 5.0, 1.0, GAS).unwrap();
        let (_, b) = steger_warming_split(s, GAS, 0.0).unwrap();
        assert!(b.iter().all(|v| *v == 0.0));
        let s = prim_to_cons(1.0, 0.0, 0.7, GAS).unwrap();
        let (a, b) = steger_warming_split(s, GAS, 0.0).unwrap();
        let sum: Vec<f64> = (0..3).map(|c| a[c] + b[c]).collect();
        assert!(sum[0].abs() < 1e-15 && (sum[1] - 0.7).abs() < 1e-15 && sum[2].abs() < 1e-15);
    }

    // F+- = R diag(l+-) R^-1 U from the eigen-decomposition of the Jacobian.
    fn eigen_oracle(r: f64, u: f64, p: f64) -> ([f64; 3], [f64; 3]) {
        let g = 1.4;
        let c = (g * p / r).sqrt();
        let h = c * c / (g - 1.0) + 0.5 * u * u;
        let rm = [[1.0, 1.0, 1.0], [u - c, u, u + c], [h - u * c, 0.5 * u * u, h + u * c]];
        let inv = invert3(rm);
        let s = prim_to_cons(r, u, p, GAS).unwrap();
        let uvec = [s.rho, s.mom, s.e];
        let lam = [u - c, u, u + c];
        let apply = |pos: bool| {
            let mut out = [0.0; 3];
            for i in 0..3 {
                for j in 0..3 {
                    let mut a = 0.0;
                    for k in 0..3 {
                        let l = if pos { lam[k].max(0.0) } else { lam[k].min(0.0) };
                        a += rm[i][k] * l * inv[k][j];
                    }
                    out[i] += a * uvec[j];
                }
            }
            out
        };
        (apply(true), apply(false))
    }

    fn invert3(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        let mut inv = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = ((j + 1) % 3, (j + 2) % 3);
                let (c, d) = ((i + 1) % 3, (i + 2) % 3);
                inv[i][j] = (m[a][c] * m[b][d] - m[a][d] * m[b][c]) / det;
            }
        }
        inv
    }

    #[test]
    fn split_matches_eigen_oracle() {
        for (r, u, p) in [(1.0, 0.0, 1.0), (0.125, 0.0, 0.1), (3.857143, 2.629369, 10.3333), (1.0, -0.4, 0.3)] {
            let s = prim_to_cons(r, u, p, GAS).unwrap();
            let (a, b) = steger_warming_split(s, GAS, 0.0).unwrap();
            let (oa, ob) = eigen_oracle(r, u, p);
            for c in 0..3 {
                assert!((a[c] - oa[c]).abs() < 1e-12 * (1.0 + oa[c].abs()), "{r} {u} {p} {c}");
                assert!((b[c] - ob[c]).abs() < 1e-12 * (1.0 + ob[c].abs()), "{r} {u} {p} {c}");
            }
        }
    }

    fn op(bc: BoundaryRule, dx: f64) -> EulerRhs {
        let rec = Reconstructor::new(&WeightingStrategy::js(3), dx).unwrap();
        EulerRhs::new(rec, GAS, 1e-6, bc)
    }

    #[test]
    fn uniform_state_rhs_is_zero() {
        for bc in [BoundaryRule::Periodic, BoundaryRule::ZeroGradient] {
            let s = prim_to_cons(1.2, 0.7, 2.0, GAS).unwrap();
            let field = pack(&vec![s; 30]);
            let mut out = vec![1.0; 90];
            op(bc, 0.1).eval(&field, &mut out).unwrap();
            assert!(out.iter().all(|v| v.abs() < 1e-12), "{bc:?}");
        }
    }

    #[test]
    fn periodic_conservation() {
        let n = 50;
        let states: Vec<_> = (0..n)
            .map(|j| {
                let x = j as f64 / n as f64;
                let r = if x < 0.5 { 1.0 } else { 0.125 };
                prim_to_cons(r, 0.2 * (6.0 * x).sin(), if x < 0.5 { 1.0 } else { 0.1 }, GAS).unwrap()
            })
            .collect();
        let field = pack(&states);
        let mut out = vec![0.0; 3 * n];
        op(BoundaryRule::Periodic, 0.02).eval(&field, &mut out).unwrap();
        for c in 0..3 {
            let s: f64 = out[c * n..(c + 1) * n].iter().sum();
            assert!(s.abs() < 1e-10, "component {c}: {s}");
        }
    }

    #[test]
    fn wall_conserves_mass() {
        let n = 40;
        let states: Vec<_> = (0..n)
            .map(|j| prim_to_cons(1.0 + 0.1 * j as f64, 0.3, if j < 20 { 10.0 } else { 0.1 }, GAS).unwrap())
            .collect();
        let mut out = vec![0.0; 3 * n];
        let mut o = op(BoundaryRule::ReflectiveWall, 0.025);
        o.eval(&pack(&states), &mut out).unwrap();
        let s: f64 = out[..n].iter().sum();
        assert!(s.abs() < 1e-10, "{s}");
        let fl = o.last_fluxes();
        assert!(fl[0][0].abs() < 1e-12 && fl[0][n].abs() < 1e-12);
    }

    #[test]
    fn sod_rhs_against_first_order_shape() {
        let n = 20;
        let states: Vec<_> = (0..n)
            .map(|j| if j < 10 { prim_to_cons(1.0, 0.0, 1.0, GAS) } else { prim_to_cons(0.125, 0.0, 0.1, GAS) }.unwrap())
            .collect();
        let field = pack(&states);
        let mut out = vec![0.0; 3 * n];
        op(BoundaryRule::ZeroGradient, 0.05).eval(&field, &mut out).unwrap();
        // first-order upwind split flux for sign and support comparison
        let dx = 0.05;
        let sp: Vec<_> = states.iter().map(|s| steger_warming_split(*s, GAS, 1e-6).unwrap()).collect();
        let flux1 = |i: usize, c: usize| sp[i].0[c] + sp[i + 1].1[c];
        for c in 0..3 {
            for j in 1..n - 1 {
                let first = -(flux1(j, c) - flux1(j - 1, c)) / dx;
                let high = out[c * n + j];
                if first.abs() > 1e-8 {
                    assert_eq!(first.signum(), high.signum(), "c={c} j={j}");
                }
                if (j as i64 - 9).abs() > 3 && (j as i64 - 10).abs() > 3 {
                    assert!(high.abs() < 1e-12, "c={c} j={j} {high}");
                }
            }
        }
        // golden values at the two cells adjacent to the jump
        let golden = [out[9], out[10], out[n + 9], out[n + 10], out[2 * n + 9], out[2 * n + 10]];
        assert!(golden.iter().all(|v| v.is_finite()));
        assert!(out[9] < 0.0 && out[10] > 0.0);
    }

    #[test]
    fn negative_density_is_blow_up() {
        let mut states = vec![prim_to_cons(1.0, 0.0, 1.0, GAS).unwrap(); 20];
        states[7].rho = -1.0;
        let mut out = vec![0.0; 60];
        let err = op(BoundaryRule::Periodic, 0.1).eval(&pack(&states), &mut out).unwrap_err();
        assert_eq!(err.cell, 7);
    }

    #[test]
    fn fixed_right_ghosts_replace_zero_gradient() {
        let recon = Reconstructor::new(&WeightingStrategy::js(3), 0.1).unwrap();
        let left = prim_to_cons(1.0, 0.0, 1.0, GAS).unwrap();
        let right = prim_to_cons(0.5, 0.0, 0.4, GAS).unwrap();
        let n = 20;
        let state = pack(&vec![left; n]);
        let mut out = vec![0.0; 3 * n];

        let mut zg = EulerRhs::new(recon.clone(), GAS, 1e-6, BoundaryRule::ZeroGradient);
        zg.eval(&state, &mut out).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-12));

        let mut fr = EulerRhs::new(recon.clone(), GAS, 1e-6, BoundaryRule::FixedRight);
        let g = fr.ghosts();
        assert!(EulerRhs::new(recon, GAS, 1e-6, BoundaryRule::FixedRight).with_fixed_right(&vec![right; g + 1]).is_err());
        fr = fr.with_fixed_right(&vec![right; g]).unwrap();
        fr.eval(&state, &mut out).unwrap();
        assert!(out[..n / 2].iter().all(|v| v.abs() < 1e-12));
        assert!(out[n - 1].abs() > 1e-3);
    }
}
