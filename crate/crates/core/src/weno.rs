//! Candidate reconstruction, smoothness indicators and Jiang–Shu weights.
//!
//! All routines assume the left-biased orientation (positive wind): the
//! window holds `f[j-r+1..=j+r-1]` and the result approximates the flux at
//! `j + 1/2`. Right-biased reconstruction is obtained by reversing the
//! window around `j + 1`.

use crate::error::{Error, Result};
use crate::tables::{StencilTables, MAX_R};

/// A `2r - 1` point window of flux samples centred on cell `j`.
#[derive(Debug, Clone, Copy)]
pub struct FluxWindow<'a> {
    values: &'a [f64],
    dx: f64,
}

impl<'a> FluxWindow<'a> {
    pub fn new(values: &'a [f64], dx: f64, tables: &StencilTables) -> Result<Self> {
        if values.len() != tables.width() {
            return Err(Error::Config(format!(
                "window has {} samples, r = {} needs {}",
                values.len(),
                tables.r(),
                tables.width()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!("window sample {i} is not finite")));
        }
        if !(dx > 0.0) {
            return Err(Error::Config(format!("grid spacing must be positive, got {dx}")));
        }
        Ok(Self { values, dx })
    }

    pub fn values(&self) -> &'a [f64] {
        self.values
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }
}

/// Normalised nonlinear weights, one per sub-stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearWeights {
    omega: [f64; MAX_R],
    r: usize,
}

impl NonlinearWeights {
    /// Normalises non-negative raw weights.
    pub fn from_raw(alpha: &[f64]) -> Self {
        let r = alpha.len();
        debug_assert!(r <= MAX_R);
        let sum: f64 = alpha.iter().sum();
        let mut omega = [0.0; MAX_R];
        for (o, a) in omega.iter_mut().zip(alpha) {
            *o = a / sum;
        }
        Self { omega, r }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.omega[..self.r]
    }

    pub fn len(&self) -> usize {
        self.r
    }

    pub fn is_empty(&self) -> bool {
        self.r == 0
    }

    /// The linear weights of `tables`, i.e. the smooth-limit weights.
    pub fn linear(tables: &StencilTables) -> Self {
        let mut omega = [0.0; MAX_R];
        omega[..tables.r()].copy_from_slice(tables.linear_weights());
        Self { omega, r: tables.r() }
    }
}

/// Candidate fluxes `q_k` of each sub-stencil.
pub fn candidates(window: &FluxWindow<'_>, tables: &StencilTables) -> [f64; MAX_R] {
    candidates_raw(window.values, tables)
}

#[inline]
pub(crate) fn candidates_raw(f: &[f64], t: &StencilTables) -> [f64; MAX_R] {
    match t.r() {
        2 => candidates_n::<2>(f, t),
        3 => candidates_n::<3>(f, t),
        4 => candidates_n::<4>(f, t),
        _ => candidates_n::<5>(f, t),
    }
}

#[inline(always)]
fn candidates_n<const R: usize>(f: &[f64], t: &StencilTables) -> [f64; MAX_R] {
    let f = &f[..2 * R - 1];
    let mut q = [0.0; MAX_R];
    for k in 0..R {
        let a = &t.a_rows()[k];
        let mut acc = 0.0;
        for l in 0..R {
            acc += a[l] * f[k + l];
        }
        q[k] = acc;
    }
    q
}

/// Jiang–Shu smoothness indicators `IS_k`.
pub fn smoothness_indicators(window: &FluxWindow<'_>, tables: &StencilTables) -> [f64; MAX_R] {
    indicators_raw(window.values, tables)
}

#[inline]
pub(crate) fn indicators_raw(f: &[f64], t: &StencilTables) -> [f64; MAX_R] {
    match t.r() {
        2 => indicators_n::<2>(f, t),
        3 => indicators_n::<3>(f, t),
        4 => indicators_n::<4>(f, t),
        _ => indicators_n::<5>(f, t),
    }
}

#[inline(always)]
fn indicators_n<const R: usize>(f: &[f64], t: &StencilTables) -> [f64; MAX_R] {
    let f = &f[..2 * R - 1];
    let c = t.c_row();
    let mut is = [0.0; MAX_R];
    for k in 0..R {
        let rows = &t.b_rows()[k];
        let mut acc = 0.0;
        for m in 0..R - 1 {
            let b = &rows[m];
            let mut inner = 0.0;
            for l in 0..R {
                inner += b[l] * f[k + l];
            }
            acc += c[m] * (inner * inner);
        }
        is[k] = acc;
    }
    is
}

/// Jiang–Shu weights `alpha_k = d_k / (eps + IS_k)^2`, normalised.
pub fn js_weights(is: &[f64], d: &[f64], eps: f64) -> NonlinearWeights {
    debug_assert_eq!(is.len(), d.len());
    let mut alpha = [0.0; MAX_R];
    for k in 0..d.len() {
        let s = eps + is[k];
        alpha[k] = d[k] / (s * s);
    }
    NonlinearWeights::from_raw(&alpha[..d.len()])
}

/// Weighted combination of the candidate fluxes.
pub fn reconstruct(
    window: &FluxWindow<'_>,
    weights: &NonlinearWeights,
    tables: &StencilTables,
) -> f64 {
    let q = candidates_raw(window.values, tables);
    weights.as_slice().iter().zip(&q).map(|(w, q)| w * q).sum()
}
