//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] carries the Taylor coefficients `t_i = g^(i)(x0) / i!` of a
//! function about one point. Mapping formulas are written once against
//! [`Scalar`] and evaluated either on `f64` or on jets, which yields
//! derivatives up to order [`JET_LEN`]` - 1` to rounding accuracy.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub const JET_LEN: usize = 10;

/// Arithmetic needed by the mapping formulas.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(v: f64) -> Self;
    fn value(&self) -> f64;

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::cst(1.0);
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn scale(self, k: f64) -> Self {
        self * Self::cst(k)
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn powi(self, n: u32) -> Self {
        match n {
            0 => 1.0,
            1 => self,
            2 => self * self,
            3 => self * self * self,
            4 => {
                let s = self * self;
                s * s
            }
            5 => {
                let s = self * self;
                s * s * self
            }
            6 => {
                let s = self * self * self;
                s * s
            }
            7 => {
                let s = self * self * self;
                s * s * self
            }
            8 => {
                let s = self * self;
                let q = s * s;
                q * q
            }
            _ => f64::powi(self, n as i32),
        }
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub c: [f64; JET_LEN],
}

impl Jet {
    /// The independent variable expanded about `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = x0;
        c[1] = 1.0;
        Jet { c }
    }

    /// `i`-th derivative at the expansion point.
    pub fn derivative(&self, i: usize) -> f64 {
        self.c[i] * factorial(i)
    }
}

pub fn factorial(i: usize) -> f64 {
    (1..=i).map(|k| k as f64).product()
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        for i in 0..JET_LEN {
            self.c[i] += o.c[i];
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        for i in 0..JET_LEN {
            self.c[i] -= o.c[i];
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for v in &mut self.c {
            *v = -*v;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for i in 0..JET_LEN {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..JET_LEN - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let mut q = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut acc = self.c[k];
            for j in 0..k {
                acc -= q[j] * o.c[k - j];
            }
            q[k] = acc / o.c[0];
        }
        Jet { c: q }
    }
}

impl Scalar for Jet {
    fn cst(v: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Jet { c }
    }
    fn value(&self) -> f64 {
        self.c[0]
    }
    fn scale(mut self, k: f64) -> Self {
        for v in &mut self.c {
            *v *= k;
        }
        self
    }
}
