//! Mapping functions for nonlinear weights.
//!
//! A [`MappingSpec`] is one family instance bound to a linear weight `dk`.
//! Formulas are written against [`Scalar`] so the same code evaluates
//! plain values and Taylor jets (used by [`check`]).

pub mod check;
pub mod presets;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::weno::NonlinearWeights;
use crate::tables::MAX_R;

pub use check::{check_cnm, check_cnmk, check_singularity_free, CnmReport, DerivativeSummary};
pub use presets::{table6_specs, table7_specs, Table7Variant};

/// Branch of a piecewise mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `[0, dk)`
    Left,
    /// `[dk, 1]`
    Right,
}

/// Scale `s` of the AIM family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AimScale {
    Fixed(f64),
    /// `s = c / dk * lambda` with `lambda` supplied by the solver.
    Adaptive { c: f64 },
}

/// Coefficients of one PRM branch in the absorbed form (`n1 = 1` gives the
/// production formula).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrmSide {
    pub c1: f64,
    pub c2: f64,
    pub m1: u32,
}

impl PrmSide {
    pub fn new(c1: f64, c2: f64, m1: u32) -> Self {
        Self { c1, c2, m1 }
    }

    /// Left-branch coefficients produced by mirroring a right branch with
    /// generating coefficients `(c1, c2)`.
    pub fn mirrored(dk: f64, n: u32, m: u32, n1: u32, generating: PrmSide) -> Self {
        let k = (1.0 - dk) / dk;
        let e2 = n1 as i32 + generating.m1 as i32 - n as i32;
        let e1 = m as i32 + 1 - n as i32;
        Self {
            c1: k.powi(e1) * generating.c1,
            c2: k.powi(e2) * generating.c2,
            m1: generating.m1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Identity,
    /// Henrick's mapping.
    Gm,
    /// Piecewise polynomial with `g'(0,1) = 0`, orders `(n, 1)`.
    Pm { n: u32 },
    /// Piecewise polynomial with `g'(0,1) = 1`.
    Ppm { n: u32, m: u32 },
    Im { n: u32, a: f64 },
    /// Single rational mapping with `k = 0`; `(6, 2)` is RM260.
    Rm { n: u32, m: u32 },
    Aim { n: u32, m: u32, scale: AimScale },
    /// Piecewise rational family. `left` and `right` are the free
    /// coefficient `c2` of the generating right branch; the left branch is
    /// obtained by mirroring.
    R { n: u32, m: u32, left: f64, right: f64 },
    Prm { n: u32, m: u32, n1: u32, left: PrmSide, right: PrmSide },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Identity => "identity",
            Family::Gm => "gm",
            Family::Pm { .. } => "pm",
            Family::Ppm { .. } => "ppm",
            Family::Im { .. } => "im",
            Family::Rm { .. } => "rm",
            Family::Aim { .. } => "aim",
            Family::R { .. } => "r",
            Family::Prm { .. } => "prm",
        }
    }

    /// `(n, m)` orders the family is built to satisfy, where defined.
    pub fn claimed_orders(&self) -> Option<(u32, u32)> {
        match *self {
            Family::Identity => None,
            Family::Gm => Some((2, 0)),
            Family::Pm { n } => Some((n, 1)),
            Family::Ppm { n, m } => Some((n, m)),
            Family::Im { n, .. } => Some((n, 0)),
            Family::Rm { n, m } => Some((n, m)),
            Family::Aim { n, m, .. } => Some((n, m)),
            Family::R { n, m, .. } => Some((n, m)),
            Family::Prm { n, m, left, right, .. } => {
                let m1 = left.m1.min(right.m1);
                Some((n, m.min(m1.saturating_sub(1))))
            }
        }
    }

    /// `(n, m, k)`: order at `dk`, at 0 and at 1.
    pub fn claimed_cnmk(&self) -> Option<(u32, u32, u32)> {
        match *self {
            Family::Rm { n, m } => Some((n, m, 0)),
            Family::Prm { n, m, left, right, .. } => {
                Some((n, m.min(left.m1.saturating_sub(1)), m.min(right.m1.saturating_sub(1))))
            }
            _ => self.claimed_orders().map(|(n, m)| (n, m, m)),
        }
    }
}

/// A mapping family bound to one linear weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappingSpec {
    family: Family,
    dk: f64,
    #[serde(skip)]
    poly: Vec<f64>,
}

fn domain(msg: String) -> Error {
    Error::Domain(msg)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl MappingSpec {
    pub fn new(family: Family, dk: f64) -> Result<Self> {
        if !(dk > 0.0 && dk < 1.0) {
            return Err(domain(format!("linear weight dk must lie in (0,1), got {dk}")));
        }
        let mut poly = Vec::new();
        match &family {
            Family::Identity | Family::Gm => {}
            Family::Pm { n } => {
                if *n < 1 {
                    return Err(domain("PM needs n >= 1".into()));
                }
            }
            Family::Ppm { n, m } => {
                if *n < 1 || *m > 8 {
                    return Err(domain(format!("PPM needs n >= 1 and m <= 8, got ({n},{m})")));
                }
            }
            Family::Im { n, a } => {
                if *n < 1 {
                    return Err(domain("IM needs n >= 1".into()));
                }
                positive("IM parameter A", *a)?;
            }
            Family::Rm { n, m } => {
                if *n < 1 || m > n {
                    return Err(domain(format!("RM needs 1 <= n and m <= n, got ({n},{m})")));
                }
                poly = rm_coefficients(*n, *m, dk);
            }
            Family::Aim { n, scale, .. } => {
                if *n < 1 {
                    return Err(domain("AIM needs n >= 1".into()));
                }
                match scale {
                    AimScale::Fixed(s) if !(s.is_finite() && *s >= 0.0) => {
                        return Err(domain(format!("AIM scale s must be >= 0, got {s}")))
                    }
                    AimScale::Adaptive { c } => positive("AIM constant c", *c)?,
                    _ => {}
                }
            }
            Family::R { n, m, left, right } => {
                r_family_check(*n, *m, dk, *left).map_err(|e| domain(format!("left branch: {e}")))?;
                r_family_check(*n, *m, dk, *right)
                    .map_err(|e| domain(format!("right branch: {e}")))?;
            }
            Family::Prm { n, m, n1, left, right } => {
                if *n < 1 || *n1 < 1 {
                    return Err(domain(format!("PRM needs n, n1 >= 1, got n={n}, n1={n1}")));
                }
                if m > n {
                    return Err(domain(format!("PRM needs m <= n, got m={m}, n={n}")));
                }
                for (label, s) in [("left", left), ("right", right)] {
                    if s.m1 < 1 {
                        return Err(domain(format!("PRM {label} m1 must be >= 1")));
                    }
                    positive(&format!("PRM {label} c1 (singularity-freedom)"), s.c1)?;
                    positive(&format!("PRM {label} c2 (singularity-freedom)"), s.c2)?;
                }
            }
        }
        Ok(Self { family, dk, poly })
    }

    pub fn identity(dk: f64) -> Result<Self> {
        Self::new(Family::Identity, dk)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dk(&self) -> f64 {
        self.dk
    }

    pub fn is_piecewise(&self) -> bool {
        matches!(
            self.family,
            Family::Pm { .. } | Family::Ppm { .. } | Family::R { .. } | Family::Prm { .. }
        )
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self.family, Family::Aim { scale: AimScale::Adaptive { .. }, .. })
    }

    /// Branch used for `omega`; `omega == dk` goes right.
    pub fn side(&self, omega: f64) -> Side {
        if omega < self.dk {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// AIM scale for a given `lambda`; `None` for other families.
    pub fn aim_s(&self, lambda: f64) -> Option<f64> {
        match self.family {
            Family::Aim { scale: AimScale::Fixed(s), .. } => Some(s),
            Family::Aim { scale: AimScale::Adaptive { c }, .. } => Some(c / self.dk * lambda),
            _ => None,
        }
    }

    /// `g(omega)`. Adaptive AIM uses `lambda = 1` here.
    pub fn eval(&self, omega: f64) -> f64 {
        self.eval_lambda(omega, 1.0)
    }

    pub fn eval_lambda(&self, omega: f64, lambda: f64) -> f64 {
        let w = omega.clamp(0.0, 1.0);
        self.branch(self.side(w), w, lambda)
    }

    /// Evaluates one branch formula, without clamping or side selection.
    pub fn branch<T: Scalar>(&self, side: Side, w: T, lambda: f64) -> T {
        let d = self.dk;
        let dc = T::cst(d);
        let one = T::cst(1.0);
        let u = w - dc;
        match self.family {
            Family::Identity => w,
            Family::Gm => {
                let num = w * (w * w - w.scale(3.0 * d) + T::cst((d + 1.0) * d));
                num / (w.scale(1.0 - 2.0 * d) + T::cst(d * d))
            }
            Family::Pm { n } => {
                let n1 = (n + 1) as f64;
                match side {
                    Side::Left => {
                        let k = sign(n) * n1 / d.powi(n as i32 + 1);
                        dc + u.powi(n + 1) * (w + T::cst(d / n1)).scale(k)
                    }
                    Side::Right => {
                        let k = n1 / (1.0 - d).powi(n as i32 + 1);
                        dc - u.powi(n + 1) * (w + T::cst((d - n1 - 1.0) / n1)).scale(k)
                    }
                }
            }
            Family::Ppm { n, m } => {
                let mut acc = T::cst(0.0);
                match side {
                    Side::Left => {
                        for i in 0..=m {
                            let c = ppm_coefficient(n, m, i) * d.powi(i as i32);
                            acc = acc + w.powi(m - i).scale(c);
                        }
                        let k = sign(n) / d.powi((n + m) as i32);
                        dc + u.powi(n + 1) * acc.scale(k)
                    }
                    Side::Right => {
                        let e = one - w;
                        for i in 0..=m {
                            let c = ppm_coefficient(n, m, i) * (1.0 - d).powi(i as i32);
                            acc = acc + e.powi(m - i).scale(c);
                        }
                        let k = 1.0 / (1.0 - d).powi((n + m) as i32);
                        dc + u.powi(n + 1) * acc.scale(k)
                    }
                }
            }
            Family::Im { n, a } => {
                dc + u.powi(n + 1).scale(a) / (u.powi(n).scale(a) + w * (one - w))
            }
            Family::Rm { n, .. } => {
                let mut den = T::cst(0.0);
                for &c in self.poly.iter().rev() {
                    den = den * w + T::cst(c);
                }
                dc + u.powi(n + 1) / den
            }
            Family::Aim { n, m, .. } => {
                let s = self.aim_s(lambda).unwrap_or(0.0);
                if s == 0.0 {
                    return w;
                }
                dc + u.powi(n + 1) / (u.powi(n) + (w * (one - w)).powi(m + 1).scale(s))
            }
            Family::R { n, m, left, right } => match side {
                Side::Right => r_family_right(n, m, d, right, w),
                Side::Left => left_from_right(|x| r_family_right(n, m, d, left, x), d, w),
            },
            Family::Prm { n, m, n1, left, right } => {
                let den = match side {
                    Side::Right => {
                        let e = one - w;
                        u.powi(n)
                            + u.powi(n1) * e.powi(right.m1).scale(right.c2)
                            + e.powi(m + 1).scale(right.c1)
                    }
                    Side::Left => {
                        u.powi(n)
                            + u.powi(n1) * w.powi(left.m1).scale(sign(n1 + n) * left.c2)
                            + w.powi(m + 1).scale(sign(n) * left.c1)
                    }
                };
                dc + u.powi(n + 1) / den
            }
        }
    }

    /// Denominator of a rational branch, `None` for polynomial families.
    pub fn branch_denominator(&self, side: Side, w: f64, lambda: f64) -> Option<f64> {
        let d = self.dk;
        let u = w - d;
        match self.family {
            Family::Gm => Some((1.0 - 2.0 * d) * w + d * d),
            Family::Im { n, a } => Some(a * u.powi(n as i32) + w * (1.0 - w)),
            Family::Rm { .. } => Some(self.poly.iter().rev().fold(0.0, |acc, c| acc * w + c)),
            Family::Aim { n, m, .. } => {
                let s = self.aim_s(lambda).unwrap_or(0.0);
                Some(u.powi(n as i32) + s * (w * (1.0 - w)).powi(m as i32 + 1))
            }
            Family::R { n, m, left, right } => match side {
                Side::Right => Some(r_family_denominator(n, m, d, right, w)),
                Side::Left => {
                    let x = 1.0 - (1.0 - d) / d * w;
                    Some(r_family_denominator(n, m, d, left, x))
                }
            },
            Family::Prm { n, m, n1, left, right } => Some(match side {
                Side::Right => {
                    u.powi(n as i32)
                        + right.c2 * u.powi(n1 as i32) * (1.0 - w).powi(right.m1 as i32)
                        + right.c1 * (1.0 - w).powi(m as i32 + 1)
                }
                Side::Left => {
                    u.powi(n as i32)
                        + sign(n1 + n) * left.c2 * u.powi(n1 as i32) * w.powi(left.m1 as i32)
                        + sign(n) * left.c1 * w.powi(m as i32 + 1)
                }
            }),
            _ => None,
        }
    }

    /// The RM denominator coefficients `a_0..a_{m+1}` (empty otherwise).
    pub fn rm_poly(&self) -> &[f64] {
        &self.poly
    }
}

#[inline]
fn sign(p: u32) -> f64 {
    if p % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `a_i^m` of the PPM family.
pub fn ppm_coefficient(n: u32, m: u32, i: u32) -> f64 {
    if i == m {
        return 1.0;
    }
    let num: f64 = (0..m - i).map(|j| (n + j) as f64).product();
    num / crate::jet::factorial((m - i) as usize)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Denominator coefficients of `RM_{n,m,0}`.
pub fn rm_coefficients(n: u32, m: u32, d: f64) -> Vec<f64> {
    let mut a: Vec<f64> = (0..=m)
        .map(|i| binomial(n + 1, i) * sign(n - i) * d.powi((n - i) as i32))
        .collect();
    let s: f64 = a.iter().sum();
    a.push((1.0 - d).powi(n as i32) - s);
    a
}

/// `gL(w) = dk/(1-dk) [1 - gR(1 - (1-dk)/dk w)]`.
pub fn left_from_right<T: Scalar>(g_right: impl Fn(T) -> T, dk: f64, w: T) -> T {
    let inner = T::cst(1.0) - w.scale((1.0 - dk) / dk);
    (T::cst(1.0) - g_right(inner)).scale(dk / (1.0 - dk))
}

/// Structural coefficients `(n1, c1, c3, c4)` of the R family.
pub fn r_family_structure(n: u32, m: u32, d: f64) -> Option<(u32, f64, f64, f64)> {
    let dd = 1.0 - d;
    Some(match (n, m) {
        (1..=4, 0) => (0, 0.0, 1.0, 0.0),
        (1, 1) => (1, 1.0, 0.0, 0.0),
        (2, 1) => (1, 2.0 * dd, -1.0, 0.0),
        (2, 2) => (2, 1.0, 0.0, 0.0),
        (3, 1) => (1, 3.0 * dd * dd, -2.0, 0.0),
        (3, 2) | (3, 3) => (3, 1.0, 0.0, 0.0),
        (4, 1) => (1, 4.0 * dd.powi(3), -3.0, 0.0),
        (4, 2) => (2, 2.0 * dd * dd, -1.0, 4.0 * dd * dd),
        (4, 3) | (4, 4) => (4, 1.0, 0.0, 0.0),
        _ => return None,
    })
}

/// `c2` of the R family from the free parameter `b`.
pub fn r_family_c2_from_b(n: u32, m: u32, d: f64, b: f64) -> Option<f64> {
    let frac = b / (1.0 - b * d);
    Some(match (n, m) {
        (1..=4, 0) => -b,
        (1, 1) | (3, 3) => frac,
        (2, 1) | (3, 1) | (4, 1) => b,
        (2, 2) | (4, 4) => -frac,
        (3, 2) => 1.0 - b,
        (4, 2) => -b,
        (4, 3) => -(1.0 - b),
        _ => return None,
    })
}

/// Admissible `c2` range of the R family as `(bound, inclusive)`; `c2` must
/// exceed the bound.
pub fn r_family_c2_bound(n: u32, m: u32, d: f64) -> Option<(f64, bool)> {
    let dd = 1.0 - d;
    Some(match (n, m) {
        (1, 0) => (-1.0, false),
        (2, 0) => (-dd, false),
        (3, 0) => (-dd * dd, false),
        (4, 0) => (-dd.powi(3), false),
        (2, 1) => (1.0, false),
        (3, 1) => (3.0 * dd, true),
        // the weaker c2 = 3(1-d)^2 bound admits a zero of the
        // denominator for c2 <= 4(1-d)^2.
        (4, 1) => (6.0 * dd * dd, true),
        (4, 2) => (-3.0 * dd, false),
        (1, 1) | (2, 2) | (3, 2) | (3, 3) | (4, 3) | (4, 4) => (0.0, false),
        _ => return None,
    })
}

fn r_family_check(n: u32, m: u32, d: f64, c2: f64) -> std::result::Result<(), String> {
    let (bound, inclusive) = r_family_c2_bound(n, m, d)
        .ok_or_else(|| format!("R family is tabulated for n <= 4, m <= n; got ({n},{m})"))?;
    let ok = c2.is_finite() && if inclusive { c2 >= bound } else { c2 > bound };
    if ok {
        Ok(())
    } else {
        let op = if inclusive { ">=" } else { ">" };
        Err(format!("c2 = {c2} outside valid range c2 {op} {bound} for R_({n},{m}) at dk = {d}"))
    }
}

fn r_family_denominator(n: u32, m: u32, d: f64, c2: f64, w: f64) -> f64 {
    let (n1, c1, c3, c4) = r_family_structure(n, m, d).expect("validated at construction");
    let e = 1.0 - w;
    c1 * (w - d).powi(n1 as i32)
        + c2 * e.powi(m as i32 + 1)
        + c3 * (1.0 - d).powi(n as i32)
        + c4 * e.powi(m as i32)
}

fn r_family_right<T: Scalar>(n: u32, m: u32, d: f64, c2: f64, w: T) -> T {
    let (n1, c1, c3, c4) = r_family_structure(n, m, d).expect("validated at construction");
    let u = w - T::cst(d);
    let e = T::cst(1.0) - w;
    let den = u.powi(n1).scale(c1)
        + e.powi(m + 1).scale(c2)
        + T::cst(c3 * (1.0 - d).powi(n as i32))
        + e.powi(m).scale(c4);
    T::cst(d) + u.powi(n + 1) / den
}

/// Closed-form `(g^(n+1)(dk), g^(m+1)(1))` of the R family right branch.
pub fn r_family_derivatives(n: u32, m: u32, d: f64, c: f64) -> Option<(f64, f64)> {
    let q = 1.0 - d;
    let p = |e: i32| q.powi(e);
    Some(match (n, m) {
        (1, 0) => (2.0 / ((c + 1.0) * q), c + 2.0),
        (1, 1) => (2.0 / (c * p(2)), -2.0 * c),
        (2, 0) => (6.0 / (c * q + p(2)), (c + 3.0 * q) / q),
        (2, 1) => (6.0 / (c * p(2) - p(2)), (-2.0 * c + 2.0) / q),
        (2, 2) => (6.0 / (c * p(3)), 6.0 * c / q),
        (3, 0) => (24.0 / (c * q + p(3)), (c + 4.0 * p(2)) / p(2)),
        (3, 1) => (24.0 / (c * p(2) - 2.0 * p(3)), (-2.0 * c + 6.0 * q) / p(2)),
        (3, 2) => (24.0 / (c * p(3)), 6.0 * c / p(2)),
        (3, 3) => (24.0 / (c * p(4)), -24.0 * c / p(2)),
        (4, 0) => (120.0 / (c * q + p(4)), (c + 5.0 * p(3)) / p(3)),
        (4, 1) => (120.0 / (c * p(2) - 3.0 * p(4)), (-2.0 * c + 12.0 * p(2)) / p(3)),
        // series expansion at 1 gives 24 (1-d) in the second numerator term
        (4, 2) => (120.0 / (c * p(3) + 3.0 * p(4)), (6.0 * c + 24.0 * q) / p(3)),
        (4, 3) => (120.0 / (c * p(4)), -24.0 * c / p(3)),
        (4, 4) => (120.0 / (c * p(5)), 120.0 * c / p(3)),
        _ => return None,
    })
}

/// `lambda = min IS / (max IS + dx^7)`.
pub fn aim_lambda(is: &[f64], dx: f64) -> f64 {
    let mn = is.iter().copied().fold(f64::INFINITY, f64::min);
    let mx = is.iter().copied().fold(0.0, f64::max);
    mn / (mx + dx.powi(7))
}

/// Adaptive AIM scale `s = c / dk * lambda`; the grouped rule takes the
/// smaller `lambda` of the two flux groups.
pub fn aim_scale(
    is: &[f64],
    dk: f64,
    c: f64,
    dx: f64,
    grouped: bool,
    is_other: Option<&[f64]>,
) -> Result<f64> {
    let mut lambda = aim_lambda(is, dx);
    if grouped {
        let other = is_other
            .ok_or_else(|| Error::Config("grouped AIM scale needs the other flux group".into()))?;
        lambda = lambda.min(aim_lambda(other, dx));
    }
    Ok(c / dk * lambda)
}

/// Applies per-sub-stencil mappings and renormalises.
pub fn map_weights(omega: &NonlinearWeights, specs: &[MappingSpec], lambda: f64) -> NonlinearWeights {
    let w = omega.as_slice();
    debug_assert_eq!(w.len(), specs.len());
    let mut alpha = [0.0; MAX_R];
    for k in 0..w.len() {
        alpha[k] = specs[k].eval_lambda(w[k], lambda);
    }
    let sum: f64 = alpha[..w.len()].iter().sum();
    assert!(sum > 0.0, "mapped weights sum to {sum}");
    NonlinearWeights::from_raw(&alpha[..w.len()])
}

/// One entry of the order-requirement table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderEntry {
    Value(u32),
    AtLeast(u32),
    /// Printed as "-".
    Unlisted,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRequirement {
    pub r: u32,
    pub ncp: u32,
    pub rc_js: OrderEntry,
    pub rc_mapped: OrderEntry,
    pub rcg_min: OrderEntry,
}

/// Achievable orders of WENO-JS and mapped WENO near critical points.
pub fn order_requirements() -> Vec<OrderRequirement> {
    use OrderEntry::*;
    let row = |r, ncp, rc_js, rc_mapped, rcg_min| OrderRequirement { r, ncp, rc_js, rc_mapped, rcg_min };
    vec![
        row(2, 0, Value(3), Unlisted, Unlisted),
        row(2, 1, Value(1), NotApplicable, NotApplicable),
        row(3, 0, Value(5), Unlisted, Unlisted),
        row(3, 1, Value(3), Value(5), AtLeast(2)),
        row(3, 2, Value(2), Value(2), NotApplicable),
        row(4, 0, Value(7), Unlisted, Unlisted),
        row(4, 1, Value(5), Value(7), AtLeast(2)),
        row(4, 2, Value(4), Value(6), AtLeast(3)),
        row(4, 3, Value(3), Value(3), NotApplicable),
        row(5, 0, Value(9), Value(9), Unlisted),
        row(5, 1, Value(7), Value(9), AtLeast(2)),
        row(5, 2, Value(6), Value(9), AtLeast(2)),
        row(5, 3, Value(5), Value(7), AtLeast(4)),
        row(5, 4, Value(4), Value(4), NotApplicable),
    ]
}
