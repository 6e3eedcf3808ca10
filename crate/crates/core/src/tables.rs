//! Jiang–Shu coefficient tables for r = 2..5.
//!
//! Every coefficient is stored as an exact integer ratio. Candidate
//! coefficients and linear weights share one denominator per `r`, so the
//! consistency checks in [`StencilTables::load`] are done in integer
//! arithmetic before anything is converted to `f64`.

use crate::error::{Error, Result};

/// Largest supported number of sub-stencils.
pub const MAX_R: usize = 5;

const A_DEN: [i64; 4] = [2, 6, 12, 60];
const D_DEN: [i64; 4] = [3, 10, 35, 126];

// candidate coefficients a[k][l], numerators over A_DEN
const A2: [[i64; 2]; 2] = [[-1, 3], [1, 1]];
const A3: [[i64; 3]; 3] = [[2, -7, 11], [-1, 5, 2], [2, 5, -1]];
const A4: [[i64; 4]; 4] = [
    [-3, 13, -23, 25],
    [1, -5, 13, 3],
    [-1, 7, 7, -1],
    [3, 13, -5, 1],
];
const A5: [[i64; 5]; 5] = [
    [12, -63, 137, -163, 137],
    [-3, 17, -43, 77, 12],
    [2, -13, 47, 27, -3],
    [-3, 27, 47, -13, 2],
    [12, 77, -43, 17, -3],
];

const D2: [i64; 2] = [1, 2];
const D3: [i64; 3] = [1, 6, 3];
const D4: [i64; 4] = [1, 12, 18, 4];
const D5: [i64; 5] = [1, 20, 60, 40, 5];

// smoothness-indicator inner coefficients b[k][m][l]
const B2: [[[i64; 2]; 1]; 2] = [[[-1, 1]], [[-1, 1]]];
const B3: [[[i64; 3]; 2]; 3] = [
    [[1, -4, 3], [1, -2, 1]],
    [[-1, 0, 1], [1, -2, 1]],
    [[3, -4, 1], [1, -2, 1]],
];
const B4: [[[i64; 4]; 3]; 4] = [
    [[-2, 9, -18, 11], [-1, 4, -5, 2], [-1, 3, -3, 1]],
    [[1, -6, 3, 2], [0, 1, -2, 1], [-1, 3, -3, 1]],
    [[-2, -3, 6, -1], [1, -2, 1, 0], [-1, 3, -3, 1]],
    [[-11, 18, -9, 2], [2, -5, 4, -1], [-1, 3, -3, 1]],
];
// k=2, m=0 carries (1, -8, 0, 8, -1); a 9 in the fourth slot would break
// consistency on constant data.
const B5: [[[i64; 5]; 4]; 5] = [
    [
        [3, -16, 36, -48, 25],
        [119, -606, 1234, -1126, 379],
        [3, -14, 24, -18, 5],
        [1, -4, 6, -4, 1],
    ],
    [
        [1, -6, 18, -10, -3],
        [11, -44, -64, 216, -119],
        [1, -6, 12, -10, 3],
        [1, -4, 6, -4, 1],
    ],
    [
        [1, -8, 0, 8, -1],
        [11, -174, 326, -174, 11],
        [1, -2, 0, 2, -1],
        [1, -4, 6, -4, 1],
    ],
    [
        [3, 10, -18, 6, -1],
        [119, -216, 64, 44, -11],
        [3, -10, 12, -6, 1],
        [1, -4, 6, -4, 1],
    ],
    [
        [25, -48, 36, -16, 3],
        [379, -1126, 1234, -606, 119],
        [5, -18, 24, -14, 3],
        [1, -4, 6, -4, 1],
    ],
];

// outer coefficients c[m] as (numerator, denominator)
const C2: [(i64, i64); 1] = [(1, 1)];
const C3: [(i64, i64); 2] = [(1, 4), (13, 12)];
const C4: [(i64, i64); 3] = [(1, 36), (13, 12), (781, 720)];
const C5: [(i64, i64); 4] = [(1, 144), (13, 202800), (781, 2880), (1421461, 1310400)];

/// Exact rational tables for one `r`, used to build [`StencilTables`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTables {
    pub r: usize,
    pub a_den: i64,
    pub a_num: Vec<Vec<i64>>,
    pub d_den: i64,
    pub d_num: Vec<i64>,
    pub b: Vec<Vec<Vec<i64>>>,
    pub c: Vec<(i64, i64)>,
}

impl RationalTables {
    pub fn get(r: usize) -> Result<Self> {
        fn rows<const N: usize>(t: &[[i64; N]]) -> Vec<Vec<i64>> {
            t.iter().map(|row| row.to_vec()).collect()
        }
        fn cube<const N: usize, const M: usize>(t: &[[[i64; N]; M]]) -> Vec<Vec<Vec<i64>>> {
            t.iter().map(|k| rows(k)).collect()
        }
        let (a_num, d_num, b, c) = match r {
            2 => (rows(&A2), D2.to_vec(), cube(&B2), C2.to_vec()),
            3 => (rows(&A3), D3.to_vec(), cube(&B3), C3.to_vec()),
            4 => (rows(&A4), D4.to_vec(), cube(&B4), C4.to_vec()),
            5 => (rows(&A5), D5.to_vec(), cube(&B5), C5.to_vec()),
            _ => {
                return Err(Error::Config(format!(
                    "stencil order r = {r} is not supported (expected 2..=5)"
                )))
            }
        };
        Ok(Self {
            r,
            a_den: A_DEN[r - 2],
            a_num,
            d_den: D_DEN[r - 2],
            d_num,
            b,
            c,
        })
    }

    /// Integer-exact consistency checks: candidate rows and linear weights
    /// sum to one, linear weights and outer coefficients are positive, and
    /// every indicator row annihilates constants.
    pub fn validate(&self) -> Result<()> {
        for (k, row) in self.a_num.iter().enumerate() {
            let s: i64 = row.iter().sum();
            if s != self.a_den {
                return Err(Error::Table(format!(
                    "r={} candidate row k={k} sums to {s}/{}",
                    self.r, self.a_den
                )));
            }
        }
        if self.d_num.iter().sum::<i64>() != self.d_den {
            return Err(Error::Table(format!("r={} linear weights do not sum to 1", self.r)));
        }
        if self.d_num.iter().any(|&d| d <= 0) {
            return Err(Error::Table(format!("r={} has a non-positive linear weight", self.r)));
        }
        if self.c.iter().any(|&(n, d)| n <= 0 || d <= 0) {
            return Err(Error::Table(format!("r={} has a non-positive indicator weight", self.r)));
        }
        for (k, rows) in self.b.iter().enumerate() {
            for (m, row) in rows.iter().enumerate() {
                if row.iter().sum::<i64>() != 0 {
                    return Err(Error::Table(format!(
                        "r={} indicator row k={k} m={m} does not annihilate constants",
                        self.r
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Floating-point coefficient tables for one stencil order.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilTables {
    r: usize,
    a: [[f64; MAX_R]; MAX_R],
    d: [f64; MAX_R],
    b: [[[f64; MAX_R]; MAX_R - 1]; MAX_R],
    c: [f64; MAX_R - 1],
}

impl StencilTables {
    /// Loads and validates the tables for `r` sub-stencils.
    pub fn load(r: usize) -> Result<Self> {
        let exact = RationalTables::get(r)?;
        exact.validate()?;
        let mut t = StencilTables {
            r,
            a: [[0.0; MAX_R]; MAX_R],
            d: [0.0; MAX_R],
            b: [[[0.0; MAX_R]; MAX_R - 1]; MAX_R],
            c: [0.0; MAX_R - 1],
        };
        for k in 0..r {
            for l in 0..r {
                t.a[k][l] = exact.a_num[k][l] as f64 / exact.a_den as f64;
            }
            t.d[k] = exact.d_num[k] as f64 / exact.d_den as f64;
            for m in 0..r - 1 {
                for l in 0..r {
                    t.b[k][m][l] = exact.b[k][m][l] as f64;
                }
            }
        }
        for m in 0..r - 1 {
            let (n, d) = exact.c[m];
            t.c[m] = n as f64 / d as f64;
        }
        Ok(t)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Width of the full upwind stencil, `2r - 1`.
    pub fn width(&self) -> usize {
        2 * self.r - 1
    }

    pub fn a(&self, k: usize) -> &[f64] {
        &self.a[k][..self.r]
    }

    pub fn linear_weights(&self) -> &[f64] {
        &self.d[..self.r]
    }

    pub fn b(&self, k: usize, m: usize) -> &[f64] {
        &self.b[k][m][..self.r]
    }

    pub fn c(&self) -> &[f64] {
        &self.c[..self.r - 1]
    }

    #[inline]
    pub(crate) fn a_rows(&self) -> &[[f64; MAX_R]; MAX_R] {
        &self.a
    }

    #[inline]
    pub(crate) fn b_rows(&self) -> &[[[f64; MAX_R]; MAX_R - 1]; MAX_R] {
        &self.b
    }

    #[inline]
    pub(crate) fn c_row(&self) -> &[f64; MAX_R - 1] {
        &self.c
    }

    /// Combined (2r-1)-point coefficients of the linear upstream scheme.
    pub fn linear_scheme(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.width()];
        for k in 0..self.r {
            for l in 0..self.r {
                w[k + l] += self.d[k] * self.a[k][l];
            }
        }
        w
    }
}
