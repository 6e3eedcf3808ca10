//! Weighting strategies and the per-interface reconstructor shared by the
//! scalar and Euler solvers.

use serde::Serialize;

use crate::alt_weights::{f3_weights, nis_raw, p3_weights, z5_weights};
use crate::error::{Error, Result};
use crate::mapping::{aim_lambda, map_weights, MappingSpec};
use crate::tables::{StencilTables, MAX_R};
use crate::weno::{candidates_raw, indicators_raw, js_weights, NonlinearWeights};

pub const EPS_JS: f64 = 1e-6;
pub const EPS_MAPPED: f64 = 1e-40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseWeights {
    /// Weights forced to the linear weights.
    Linear,
    Js,
    Z5 { q: u32 },
    P3,
    F3,
    Nis5,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightingStrategy {
    pub r: usize,
    pub base: BaseWeights,
    /// One spec per sub-stencil, `spec[k].dk() == d_k`.
    pub mapping: Option<Vec<MappingSpec>>,
    pub eps: f64,
    /// WENO3 with the outer WENO5 indicators.
    pub is_upgrade3: bool,
    /// Adaptive AIM scale shared by both flux groups (AIM-M).
    pub aim_grouped: bool,
    pub nis_clamp: bool,
}

impl WeightingStrategy {
    /// Unmapped strategy with the default epsilon for `base`.
    pub fn new(r: usize, base: BaseWeights) -> Self {
        let eps = match base {
            BaseWeights::Js | BaseWeights::Linear => EPS_JS,
            _ => EPS_MAPPED,
        };
        Self { r, base, mapping: None, eps, is_upgrade3: false, aim_grouped: false, nis_clamp: true }
    }

    pub fn js(r: usize) -> Self {
        Self::new(r, BaseWeights::Js)
    }

    pub fn linear(r: usize) -> Self {
        Self::new(r, BaseWeights::Linear)
    }

    /// JS weights followed by `specs`, with the mapped epsilon.
    pub fn mapped(r: usize, specs: Vec<MappingSpec>) -> Self {
        Self { mapping: Some(specs), eps: EPS_MAPPED, ..Self::js(r) }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn upgraded(mut self) -> Self {
        self.is_upgrade3 = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let t = StencilTables::load(self.r)?;
        if !(self.eps > 0.0) {
            return Err(Error::Config(format!("eps must be positive, got {}", self.eps)));
        }
        let need_r = match self.base {
            BaseWeights::Z5 { q } => {
                if !(q == 1 || q == 2) {
                    return Err(Error::Config(format!("WENO5-Z exponent q must be 1 or 2, got {q}")));
                }
                Some(3)
            }
            BaseWeights::Nis5 => Some(3),
            BaseWeights::P3 | BaseWeights::F3 => Some(2),
            BaseWeights::Js | BaseWeights::Linear => None,
        };
        if let Some(nr) = need_r {
            if nr != self.r {
                return Err(Error::Config(format!("{:?} needs r = {nr}, got r = {}", self.base, self.r)));
            }
        }
        if self.is_upgrade3 && (self.r != 2 || self.base != BaseWeights::Js) {
            return Err(Error::Config("is_upgrade3 needs r = 2 with JS weights".into()));
        }
        if let Some(specs) = &self.mapping {
            if self.base != BaseWeights::Js {
                return Err(Error::Config("mapping is only allowed with JS weights".into()));
            }
            if specs.len() != self.r {
                return Err(Error::Config(format!(
                    "mapping has {} specs, r = {} needs one per sub-stencil",
                    specs.len(),
                    self.r
                )));
            }
            for (k, (s, d)) in specs.iter().zip(t.linear_weights()).enumerate() {
                if (s.dk() - d).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "mapping spec {k} has dk = {}, sub-stencil weight is {d}",
                        s.dk()
                    )));
                }
            }
        } else if self.aim_grouped {
            return Err(Error::Config("aim_grouped needs an AIM mapping".into()));
        }
        Ok(())
    }

    /// Short label such as `WENO5-JS` or `WENO5-PRM`.
    pub fn label(&self) -> String {
        let order = 2 * self.r - 1;
        let base = match self.base {
            BaseWeights::Linear => "LIN".to_string(),
            BaseWeights::Js => match &self.mapping {
                None => "JS".to_string(),
                Some(specs) => {
                    let name = specs[0].family().name().to_uppercase();
                    if self.aim_grouped {
                        format!("{name}-M")
                    } else {
                        name
                    }
                }
            },
            BaseWeights::Z5 { q } => format!("Z(q={q})"),
            BaseWeights::P3 => "P+3".to_string(),
            BaseWeights::F3 => "F3".to_string(),
            BaseWeights::Nis5 => "NIS".to_string(),
        };
        let up = if self.is_upgrade3 { "u" } else { "" };
        format!("WENO{order}{up}-{base}")
    }
}

/// Per-interface reconstruction for a fixed strategy and grid spacing.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    strategy: WeightingStrategy,
    t: StencilTables,
    t3: Option<StencilTables>,
    dx: f64,
    hw: usize,
    adaptive: bool,
}

impl Reconstructor {
    pub fn new(strategy: &WeightingStrategy, dx: f64) -> Result<Self> {
        strategy.validate()?;
        if !(dx > 0.0) {
            return Err(Error::Config(format!("dx must be positive, got {dx}")));
        }
        let t = StencilTables::load(strategy.r)?;
        let t3 = if strategy.is_upgrade3 { Some(StencilTables::load(3)?) } else { None };
        let hw = if strategy.is_upgrade3 { 2 } else { strategy.r - 1 };
        let adaptive =
            strategy.mapping.as_ref().is_some_and(|s| s.iter().any(MappingSpec::is_adaptive));
        Ok(Self { strategy: strategy.clone(), t, t3, dx, hw, adaptive })
    }

    /// Window half width: the window holds `2 * half_width() + 1` samples.
    pub fn half_width(&self) -> usize {
        self.hw
    }

    pub fn width(&self) -> usize {
        2 * self.hw + 1
    }

    pub fn strategy(&self) -> &WeightingStrategy {
        &self.strategy
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    #[inline]
    fn core<'a>(&self, f: &'a [f64]) -> &'a [f64] {
        let r = self.strategy.r;
        &f[self.hw + 1 - r..self.hw + r]
    }

    #[inline]
    fn indicators(&self, f: &[f64]) -> [f64; MAX_R] {
        match &self.t3 {
            Some(t3) => {
                let lo = indicators_raw(&f[0..5], t3);
                let mut is = [0.0; MAX_R];
                is[0] = lo[0];
                is[1] = lo[2];
                is
            }
            None => indicators_raw(self.core(f), &self.t),
        }
    }

    /// Unmapped weights and the indicators they came from.
    #[inline]
    fn base_weights(&self, f: &[f64]) -> (NonlinearWeights, [f64; MAX_R]) {
        let r = self.strategy.r;
        let d = self.t.linear_weights();
        let eps = self.strategy.eps;
        let c = self.core(f);
        match self.strategy.base {
            BaseWeights::Linear => (NonlinearWeights::linear(&self.t), [0.0; MAX_R]),
            BaseWeights::Js => {
                let is = self.indicators(f);
                (js_weights(&is[..r], d, eps), is)
            }
            BaseWeights::Z5 { q } => {
                let is = indicators_raw(c, &self.t);
                (z5_weights(&is[..3], d, q, eps), is)
            }
            BaseWeights::P3 => {
                let is = indicators_raw(c, &self.t);
                (p3_weights(&is[..2], [c[0], c[1], c[2]], d, self.dx, eps), is)
            }
            BaseWeights::F3 => {
                let is = indicators_raw(c, &self.t);
                (f3_weights(&is[..2], [c[0], c[1], c[2]], d, eps), is)
            }
            BaseWeights::Nis5 => {
                let nis = nis_raw(c, &self.t, self.strategy.nis_clamp);
                let mut is = [0.0; MAX_R];
                is[..3].copy_from_slice(&nis);
                (js_weights(&nis, d, eps), is)
            }
        }
    }

    /// Final weights of one window. `other` is the window of the opposite
    /// flux group at the same interface, used by grouped AIM.
    pub fn weights(&self, f: &[f64], other: Option<&[f64]>) -> NonlinearWeights {
        debug_assert_eq!(f.len(), self.width());
        let (w, is) = self.base_weights(f);
        match &self.strategy.mapping {
            None => w,
            Some(specs) => {
                let r = self.strategy.r;
                let mut lambda = 1.0;
                if self.adaptive {
                    lambda = aim_lambda(&is[..r], self.dx);
                    if self.strategy.aim_grouped {
                        if let Some(o) = other {
                            lambda = lambda.min(aim_lambda(&self.indicators(o)[..r], self.dx));
                        }
                    }
                }
                map_weights(&w, specs, lambda)
            }
        }
    }

    #[inline]
    fn combine(&self, f: &[f64], w: &NonlinearWeights) -> f64 {
        let q = candidates_raw(self.core(f), &self.t);
        w.as_slice().iter().zip(&q).map(|(w, q)| w * q).sum()
    }

    /// Left-biased value at `j + 1/2` from the window centred on `j`.
    pub fn reconstruct(&self, f: &[f64]) -> f64 {
        let w = self.weights(f, None);
        self.combine(f, &w)
    }

    /// Both flux groups at one interface; `fm` is already mirrored.
    pub fn reconstruct_pair(&self, fp: &[f64], fm: &[f64]) -> (f64, f64) {
        if self.strategy.aim_grouped {
            let wp = self.weights(fp, Some(fm));
            let wm = self.weights(fm, Some(fp));
            (self.combine(fp, &wp), self.combine(fm, &wm))
        } else {
            (self.reconstruct(fp), self.reconstruct(fm))
        }
    }
}

/// Semi-discrete operator of `u_t + u_x = 0` on a periodic grid.
#[derive(Debug, Clone)]
pub struct AdvectionRhs {
    recon: Reconstructor,
    padded: Vec<f64>,
    flux: Vec<f64>,
}

impl AdvectionRhs {
    pub fn new(recon: Reconstructor) -> Self {
        Self { recon, padded: Vec::new(), flux: Vec::new() }
    }

    pub fn reconstructor(&self) -> &Reconstructor {
        &self.recon
    }

    /// Writes `-(f_{j+1/2} - f_{j-1/2}) / dx` into `out`.
    pub fn eval(&mut self, u: &[f64], out: &mut [f64]) {
        let n = u.len();
        let g = self.recon.half_width() + 1;
        let w = self.recon.width();
        self.padded.clear();
        self.padded.extend((0..n + 2 * g).map(|i| u[(i + 2 * n - g) % n]));
        self.flux.resize(n + 1, 0.0);
        // flux[i] sits at interface j - 1/2 + i, centred on padded cell g - 1 + i
        for i in 0..=n {
            let c = g - 1 + i;
            let win = &self.padded[c - (w / 2)..=c + (w / 2)];
            self.flux[i] = self.recon.reconstruct(win);
        }
        let inv = 1.0 / self.recon.dx();
        for j in 0..n {
            out[j] = -(self.flux[j + 1] - self.flux[j]) * inv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::{table6_specs, Family};

    fn run_linear_order(r: usize) -> f64 {
        // exact derivative check of the operator on sin(2 pi x) over [0,1]
        let err = |n: usize| {
            let dx = 1.0 / n as f64;
            let u: Vec<f64> = (0..n).map(|j| (2.0 * std::f64::consts::PI * j as f64 * dx).sin()).collect();
            let rec = Reconstructor::new(&WeightingStrategy::linear(r), dx).unwrap();
            let mut op = AdvectionRhs::new(rec);
            let mut out = vec![0.0; n];
            op.eval(&u, &mut out);
            (0..n)
                .map(|j| {
                    let x = j as f64 * dx;
                    (out[j] + 2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * x).cos()).abs()
                })
                .fold(0.0, f64::max)
        };
        (err(32) / err(64)).log2()
    }

    #[test]
    fn linear_operator_order() {
        for r in 2..=4 {
            let p = run_linear_order(r);
            assert!((p - (2 * r - 1) as f64).abs() < 0.15, "r={r} order {p}");
        }
    }

    #[test]
    fn constant_state_has_zero_rhs() {
        for s in [
            WeightingStrategy::js(3),
            WeightingStrategy::new(3, BaseWeights::Z5 { q: 1 }),
            WeightingStrategy::new(2, BaseWeights::P3),
            WeightingStrategy::js(2).upgraded(),
            WeightingStrategy::mapped(3, table6_specs(3).unwrap()),
        ] {
            let rec = Reconstructor::new(&s, 0.1).unwrap();
            let mut op = AdvectionRhs::new(rec);
            let u = vec![0.7; 20];
            let mut out = vec![1.0; 20];
            op.eval(&u, &mut out);
            assert!(out.iter().all(|v| v.abs() < 1e-13), "{}", s.label());
        }
    }

    #[test]
    fn periodic_sum_vanishes() {
        let s = WeightingStrategy::js(3);
        let rec = Reconstructor::new(&s, 0.05).unwrap();
        let mut op = AdvectionRhs::new(rec);
        let u: Vec<f64> = (0..40).map(|j| if (10..20).contains(&j) { 1.0 } else { 0.1 * j as f64 }).collect();
        let mut out = vec![0.0; 40];
        op.eval(&u, &mut out);
        let s: f64 = out.iter().sum();
        assert!(s.abs() < 1e-11);
    }

    #[test]
    fn upgraded_indicators_use_outer_stencils() {
        let s = WeightingStrategy::js(2).upgraded();
        let rec = Reconstructor::new(&s, 1.0).unwrap();
        let f = [0.3, -1.0, 2.0, 0.5, 4.0];
        let t3 = StencilTables::load(3).unwrap();
        let is3 = indicators_raw(&f, &t3);
        let w = rec.weights(&f, None);
        let d = [1.0 / 3.0, 2.0 / 3.0];
        let oracle = js_weights(&[is3[0], is3[2]], &d, EPS_JS);
        assert_eq!(w.as_slice(), oracle.as_slice());
    }

    #[test]
    fn invariants_rejected() {
        let bad = [
            WeightingStrategy::js(3).upgraded(),
            WeightingStrategy::new(2, BaseWeights::Z5 { q: 1 }),
            WeightingStrategy::new(3, BaseWeights::P3),
            WeightingStrategy { mapping: Some(table6_specs(3).unwrap()), ..WeightingStrategy::new(3, BaseWeights::Nis5) },
            WeightingStrategy::mapped(2, table6_specs(3).unwrap()),
            WeightingStrategy::js(3).with_eps(0.0),
        ];
        for s in bad {
            assert!(Reconstructor::new(&s, 0.1).is_err(), "{:?}", s);
        }
    }

    #[test]
    fn grouped_aim_takes_smaller_lambda() {
        let d = [0.1, 0.6, 0.3];
        let specs: Vec<MappingSpec> = d
            .iter()
            .map(|&dk| {
                MappingSpec::new(
                    Family::Aim { n: 4, m: 2, scale: crate::mapping::AimScale::Adaptive { c: 1e4 } },
                    dk,
                )
                .unwrap()
            })
            .collect();
        let mut s = WeightingStrategy::mapped(3, specs);
        let rec_single = Reconstructor::new(&s, 0.1).unwrap();
        s.aim_grouped = true;
        let rec = Reconstructor::new(&s, 0.1).unwrap();
        let smooth = [0.0, 0.1, 0.2, 0.3, 0.4];
        let rough = [0.0, 0.0, 1.0, 1.0, 1.0];
        let (a, _) = rec.reconstruct_pair(&smooth, &rough);
        let b = rec_single.reconstruct(&smooth);
        // rough partner has lambda = 0, so the grouped result is unmapped JS
        let js = Reconstructor::new(&WeightingStrategy::js(3).with_eps(EPS_MAPPED), 0.1).unwrap();
        assert!((a - js.reconstruct(&smooth)).abs() < 1e-15);
        assert!((b - 0.25).abs() < 1e-12);
    }

    #[test]
    fn labels() {
        assert_eq!(WeightingStrategy::js(3).label(), "WENO5-JS");
        assert_eq!(WeightingStrategy::mapped(3, table6_specs(3).unwrap()).label(), "WENO5-PRM");
        assert_eq!(WeightingStrategy::js(2).upgraded().label(), "WENO3u-JS");
    }
}
