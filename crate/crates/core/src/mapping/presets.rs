//! Production PRM parameters and the comparison sets.

use serde::{Deserialize, Serialize};

use super::{Family, MappingSpec, PrmSide};
use crate::error::{Error, Result};

/// One row: `(r, k, dk numerator, dk denominator, L (c1, c2, m1), R (c1, c2, m1))`.
pub type PrmRow = (usize, usize, u32, u32, (f64, f64, u32), (f64, f64, u32));

pub const PRM_TABLE: [PrmRow; 9] = [
    (2, 0, 1, 3, (1.0, 7e7, 5), (1.0, 3e6, 5)),
    (2, 1, 2, 3, (1.0, 1e5, 4), (1.0, 3e6, 4)),
    (3, 0, 1, 10, (1.0, 1e9, 5), (1.0, 5e4, 6)),
    (3, 1, 6, 10, (1.0, 6e5, 6), (1.0, 6e7, 6)),
    (3, 2, 3, 10, (1.0, 3e8, 6), (1.0, 2e5, 6)),
    (4, 0, 1, 35, (1.0, 1e11, 5), (1.0, 5e2, 5)),
    (4, 1, 12, 35, (1.0, 3e4, 5), (1.0, 3e3, 4)),
    (4, 2, 18, 35, (1.0, 1e4, 5), (1.0, 2e4, 4)),
    (4, 3, 4, 35, (1.0, 5e7, 5), (1.0, 5e2, 4)),
];

/// `R_{2,2}` comparison constants `(k, L, R)` at the WENO5 linear weights.
pub const R322_TABLE: [(usize, f64, f64); 3] = [
    (0, 30090.0, 676.6666),
    (1, 1235.6790, 8335.0),
    (2, 12970.7047, 929.2592),
];

/// Imitation sets at `dk = 6/10`: `(L (c1, c2, m1), R (c1, c2, m1))`.
pub const MIMIC_PM: ((f64, f64, u32), (f64, f64, u32)) = ((26.0, 13.0, 2), (40.0, 20.0, 2));
pub const MIMIC_RM: ((f64, f64, u32), (f64, f64, u32)) = ((1.0, 7500.0, 5), (1000.0, 10000.0, 2));

fn side(t: (f64, f64, u32)) -> PrmSide {
    PrmSide::new(t.0, t.1, t.2)
}

/// PRM specs `PRM_{n,n;1}` with `n = r - 1`, one per sub-stencil.
pub fn table6_specs(r: usize) -> Result<Vec<MappingSpec>> {
    if !(2..=4).contains(&r) {
        return Err(Error::Config(format!(
            "no production PRM parameters for r = {r} (available for r = 2, 3, 4)"
        )));
    }
    let n = (r - 1) as u32;
    PRM_TABLE
        .iter()
        .filter(|row| row.0 == r)
        .map(|&(_, _, num, den, l, rr)| {
            MappingSpec::new(
                Family::Prm { n, m: n, n1: 1, left: side(l), right: side(rr) },
                num as f64 / den as f64,
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Table7Variant {
    R322,
    MimicPm,
    MimicRm,
}

impl std::str::FromStr for Table7Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "r322" => Ok(Self::R322),
            "mimic_pm" => Ok(Self::MimicPm),
            "mimic_rm" => Ok(Self::MimicRm),
            other => Err(Error::Config(format!("unknown comparison set '{other}'"))),
        }
    }
}

/// `R322` returns one spec per WENO5 linear weight; the imitation sets
/// return a single spec at `dk = 6/10`.
///
/// `R322` is the `c2 = 0` reduction of the n = m = 2 PRM. It is stored as
/// an R-family spec whose left parameter is the generating right-branch
/// value `c_L * dk / (1 - dk)`.
pub fn table7_specs(variant: Table7Variant) -> Result<Vec<MappingSpec>> {
    match variant {
        Table7Variant::R322 => {
            let d = [0.1, 0.6, 0.3];
            R322_TABLE
                .iter()
                .map(|&(k, l, r)| {
                    let dk = d[k];
                    MappingSpec::new(Family::R { n: 2, m: 2, left: l * dk / (1.0 - dk), right: r }, dk)
                })
                .collect()
        }
        Table7Variant::MimicPm | Table7Variant::MimicRm => {
            let (l, r) = if variant == Table7Variant::MimicPm { MIMIC_PM } else { MIMIC_RM };
            Ok(vec![MappingSpec::new(
                Family::Prm { n: 2, m: 2, n1: 1, left: side(l), right: side(r) },
                0.6,
            )?])
        }
    }
}
