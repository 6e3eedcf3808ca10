//! Z-type weightings used as comparison schemes: WENO5-Z, WENO3-P+3,
//! WENO3-F3 and WENO5 with the NIS indicators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tables::{StencilTables, MAX_R};
use crate::weno::{indicators_raw, js_weights, FluxWindow, NonlinearWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZVariant {
    Z5,
    P3,
    F3,
    Nis5,
}

impl ZVariant {
    /// Stencil order the variant is defined for.
    pub fn r(self) -> usize {
        match self {
            ZVariant::Z5 | ZVariant::Nis5 => 3,
            ZVariant::P3 | ZVariant::F3 => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZConfig {
    pub variant: ZVariant,
    /// Exponent of WENO5-Z.
    pub q: u32,
    pub eps: f64,
    pub dx: f64,
    /// Clamp negative NIS indicators at zero.
    pub nis_clamp: bool,
}

impl ZConfig {
    pub fn new(variant: ZVariant, q: u32, eps: f64, dx: f64) -> Result<Self> {
        if variant == ZVariant::Z5 && !(q == 1 || q == 2) {
            return Err(Error::Config(format!("WENO5-Z exponent q must be 1 or 2, got {q}")));
        }
        if !(eps > 0.0) {
            return Err(Error::Config(format!("eps must be positive, got {eps}")));
        }
        if !(dx > 0.0) {
            return Err(Error::Config(format!("dx must be positive, got {dx}")));
        }
        Ok(Self { variant, q, eps, dx, nis_clamp: true })
    }

    /// Weights for one left-biased window.
    pub fn weights(&self, window: &FluxWindow<'_>, t: &StencilTables) -> Result<NonlinearWeights> {
        if t.r() != self.variant.r() {
            return Err(Error::Config(format!(
                "{:?} needs r = {}, tables have r = {}",
                self.variant,
                self.variant.r(),
                t.r()
            )));
        }
        let f = window.values();
        let d = t.linear_weights();
        Ok(match self.variant {
            ZVariant::Z5 => z5_weights(&indicators_raw(f, t)[..3], d, self.q, self.eps),
            ZVariant::P3 => p3_weights(&indicators_raw(f, t)[..2], [f[0], f[1], f[2]], d, self.dx, self.eps),
            ZVariant::F3 => f3_weights(&indicators_raw(f, t)[..2], [f[0], f[1], f[2]], d, self.eps),
            ZVariant::Nis5 => js_weights(&nis_raw(f, t, self.nis_clamp), d, self.eps),
        })
    }
}

fn normalise(alpha: &[f64]) -> NonlinearWeights {
    NonlinearWeights::from_raw(alpha)
}

/// `alpha_k = d_k [1 + (tau / (IS_k + eps))^q]`, `tau = |IS_0 - IS_2|`.
pub fn z5_weights(is: &[f64], d: &[f64], q: u32, eps: f64) -> NonlinearWeights {
    let tau = (is[0] - is[2]).abs();
    let mut alpha = [0.0; MAX_R];
    for k in 0..3 {
        alpha[k] = d[k] * (1.0 + (tau / (is[k] + eps)).powi(q as i32));
    }
    normalise(&alpha[..3])
}

/// WENO3-P+3 weights from the two r=2 indicators and `(f_{i-1}, f_i, f_{i+1})`.
pub fn p3_weights(is: &[f64], f: [f64; 3], d: &[f64], dx: f64, eps: f64) -> NonlinearWeights {
    let diff = f[0] - f[2];
    let tau = (0.5 * (is[0] + is[1]) - 0.25 * diff * diff).abs();
    let lambda = dx.powf(1.0 / 6.0);
    let mut alpha = [0.0; MAX_R];
    for k in 0..2 {
        let s = is[k] + eps;
        alpha[k] = d[k] * (1.0 + tau / s + lambda * s / (tau + eps));
    }
    normalise(&alpha[..2])
}

/// The extra indicator of WENO3-F3.
pub fn f3_is3(f: [f64; 3]) -> f64 {
    let a = f[0] - 2.0 * f[1] + f[2];
    let b = f[0] - f[2];
    a * a / 12.0 + 0.25 * b * b
}

/// WENO3-F3 weights, `tau = |(IS_0 + IS_1)/2 - IS_3|^{3/2}`.
pub fn f3_weights(is: &[f64], f: [f64; 3], d: &[f64], eps: f64) -> NonlinearWeights {
    let tau = (0.5 * (is[0] + is[1]) - f3_is3(f)).abs().powf(1.5);
    let mut alpha = [0.0; MAX_R];
    for k in 0..2 {
        alpha[k] = d[k] * (1.0 + tau / (is[k] + eps));
    }
    normalise(&alpha[..2])
}

/// NIS indicators of an r=3 window, unclamped.
///
/// Each correction is the product of the two inner terms of `IS_k`, so it
/// is paired with the sub-stencil whose points it uses. With
/// `IS_k = a^2/4 + 13 b^2/12` the result never drops below zero.
pub fn nis_indicators(window: &FluxWindow<'_>, t: &StencilTables) -> Result<[f64; 3]> {
    if t.r() != 3 {
        return Err(Error::Config("NIS indicators are defined for r = 3".into()));
    }
    let v = nis_raw(window.values(), t, false);
    Ok([v[0], v[1], v[2]])
}

#[inline]
pub(crate) fn nis_raw(f: &[f64], t: &StencilTables, clamp: bool) -> [f64; 3] {
    let is = indicators_raw(f, t);
    let corr = [
        (f[0] - 2.0 * f[1] + f[2]) * (f[0] - 4.0 * f[1] + 3.0 * f[2]),
        (f[1] - 2.0 * f[2] + f[3]) * (f[1] - f[3]),
        (f[2] - 2.0 * f[3] + f[4]) * (3.0 * f[2] - 4.0 * f[3] + f[4]),
    ];
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = is[k] - corr[k].abs();
        if clamp {
            out[k] = out[k].max(0.0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(r: usize) -> StencilTables {
        StencilTables::load(r).unwrap()
    }

    #[test]
    fn z5_equal_and_zero_indicators_give_d() {
        let d = [0.1, 0.6, 0.3];
        for is in [[0.4; 3], [0.0; 3]] {
            let w = z5_weights(&is, &d, 1, 1e-40);
            for k in 0..3 {
                assert!((w.as_slice()[k] - d[k]).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn z5_formula_oracle() {
        let d = [0.1, 0.6, 0.3];
        let is = [1.0, 2.0, 4.0];
        // tau = 3; alpha = d (1 + 9/IS^2)
        let a = [0.1 * 10.0, 0.6 * (1.0 + 9.0 / 4.0), 0.3 * (1.0 + 9.0 / 16.0)];
        let s: f64 = a.iter().sum();
        let w = z5_weights(&is, &d, 2, 1e-40);
        for k in 0..3 {
            assert!((w.as_slice()[k] - a[k] / s).abs() < 1e-15);
        }
    }

    #[test]
    fn z5_q2_stays_closer_to_linear_weights() {
        let d = [0.1, 0.6, 0.3];
        for is in [[1.0, 1.2, 1.5], [2.0, 2.5, 2.2], [0.8, 0.9, 1.0]] {
            let tau = (is[0] - is[2]) as f64;
            assert!(is.iter().all(|v| tau.abs() / v < 1.0));
            let dev = |q| {
                let w = z5_weights(&is, &d, q, 1e-40);
                (0..3).map(|k| (w.as_slice()[k] - d[k]).abs()).sum::<f64>()
            };
            assert!(dev(2) < dev(1));
        }
    }

    #[test]
    fn p3_cases() {
        let d = [1.0 / 3.0, 2.0 / 3.0];
        let w = p3_weights(&[0.0, 0.0], [2.0; 3], &d, 0.01, 1e-40);
        assert!((w.as_slice()[0] - d[0]).abs() < 1e-15);
        // linear data f = (0, 1, 2): IS = (1, 1), tau = |1 - 1| = 0
        let lam = 0.01f64.powf(1.0 / 6.0);
        let a = 1.0 + 0.0 + lam * (1.0 + 1e-40) / 1e-40;
        let w = p3_weights(&[1.0, 1.0], [0.0, 1.0, 2.0], &d, 0.01, 1e-40);
        let s = d[0] * a + d[1] * a;
        assert!((w.as_slice()[0] - d[0] * a / s).abs() < 1e-15);
        // symmetric data: tau reduces to the mean indicator
        let f = [1.0, 3.0, 1.0];
        let is = [4.0, 4.0];
        let tau = 0.5 * (is[0] + is[1]);
        let w = p3_weights(&is, f, &d, 0.01, 1e-40);
        let ak = |k: usize| d[k] * (1.0 + tau / (is[k] + 1e-40) + lam * (is[k] + 1e-40) / (tau + 1e-40));
        let s = ak(0) + ak(1);
        assert!((w.as_slice()[1] - ak(1) / s).abs() < 1e-15);
    }

    #[test]
    fn f3_cases() {
        let d = [1.0 / 3.0, 2.0 / 3.0];
        let w = f3_weights(&[0.0, 0.0], [5.0; 3], &d, 1e-40);
        assert_eq!(w.as_slice(), &d);
        assert_eq!(f3_is3([0.0, 1.0, 2.0]), 1.0);
        let w = f3_weights(&[1.0, 1.0], [0.0, 1.0, 2.0], &d, 1e-40);
        assert!((w.as_slice()[0] - d[0]).abs() < 1e-16);
        let f: [f64; 3] = [0.3, -1.2, 0.7];
        let is = [(f[1] - f[0]).powi(2), (f[2] - f[1]).powi(2)];
        let is3 = (f[0] - 2.0 * f[1] + f[2]).powi(2) / 12.0 + (f[0] - f[2]).powi(2) / 4.0;
        let tau = (0.5 * (is[0] + is[1]) - is3).abs().powf(1.5);
        let a: Vec<f64> = (0..2).map(|k| d[k] * (1.0 + tau / (is[k] + 1e-40))).collect();
        let w = f3_weights(&is, f, &d, 1e-40);
        assert!((w.as_slice()[0] - a[0] / (a[0] + a[1])).abs() < 1e-15);
    }

    #[test]
    fn nis_cases() {
        let t3 = t(3);
        let c = [1.5; 5];
        let w = FluxWindow::new(&c, 0.1, &t3).unwrap();
        assert_eq!(nis_indicators(&w, &t3).unwrap(), [0.0; 3]);
        let lin = [0.0, 1.0, 2.0, 3.0, 4.0];
        let w = FluxWindow::new(&lin, 1.0, &t3).unwrap();
        for v in nis_indicators(&w, &t3).unwrap() {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let f: [f64; 5] = [0.2, -0.7, 1.3, 0.4, -2.0];
        let w = FluxWindow::new(&f, 1.0, &t3).unwrap();
        let is = crate::weno::smoothness_indicators(&w, &t3);
        let oracle = [
            is[0] - ((f[0] - 2.0 * f[1] + f[2]) * (f[0] - 4.0 * f[1] + 3.0 * f[2])).abs(),
            is[1] - ((f[1] - 2.0 * f[2] + f[3]) * (f[1] - f[3])).abs(),
            is[2] - ((f[2] - 2.0 * f[3] + f[4]) * (3.0 * f[2] - 4.0 * f[3] + f[4])).abs(),
        ];
        let got = nis_indicators(&w, &t3).unwrap();
        for k in 0..3 {
            assert!((got[k] - oracle[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn variant_order_is_checked() {
        let cfg = ZConfig::new(ZVariant::Z5, 1, 1e-40, 0.1).unwrap();
        let t2 = t(2);
        let f = [1.0, 2.0, 3.0];
        let w = FluxWindow::new(&f, 0.1, &t2).unwrap();
        assert!(cfg.weights(&w, &t2).is_err());
        assert!(ZConfig::new(ZVariant::Z5, 3, 1e-40, 0.1).is_err());
    }
}
