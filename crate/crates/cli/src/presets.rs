//! Named mapping presets.

use std::str::FromStr;

use weno_prm::mapping::{table6_specs, table7_specs, AimScale, Family, MappingSpec, Table7Variant};
use weno_prm::tables::StencilTables;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Production PRM parameters for r = 2, 3, 4.
    Prm,
    R322,
    MimicPm,
    MimicRm,
    Gm,
    Pm6,
    Im,
    Rm260,
    Aim,
    /// AIM with the scale shared by both flux groups.
    AimM,
}

pub const NAMES: [&str; 10] = ["prm", "r322", "mimic_pm", "mimic_rm", "gm", "pm6", "im", "rm260", "aim", "aim_m"];

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "prm" => Preset::Prm,
            "r322" => Preset::R322,
            "mimic_pm" => Preset::MimicPm,
            "mimic_rm" => Preset::MimicRm,
            "gm" => Preset::Gm,
            "pm6" => Preset::Pm6,
            "im" => Preset::Im,
            "rm260" => Preset::Rm260,
            "aim" => Preset::Aim,
            "aim_m" => Preset::AimM,
            other => return Err(format!("unknown preset '{other}' (expected one of {})", NAMES.join(", "))),
        })
    }
}

impl Preset {
    /// Family applied to every sub-stencil, for the uniform presets.
    pub fn family(self) -> Option<Family> {
        match self {
            Preset::Gm => Some(Family::Gm),
            Preset::Pm6 => Some(Family::Pm { n: 6 }),
            Preset::Im => Some(Family::Im { n: 2, a: 0.1 }),
            Preset::Rm260 => Some(Family::Rm { n: 6, m: 2 }),
            Preset::Aim | Preset::AimM => Some(Family::Aim { n: 4, m: 2, scale: AimScale::Adaptive { c: 1e4 } }),
            _ => None,
        }
    }

    pub fn grouped(self) -> bool {
        self == Preset::AimM
    }

    /// One spec per linear weight of `r`.
    pub fn specs(self, r: usize) -> Result<Vec<MappingSpec>, String> {
        let e = |e: weno_prm::Error| e.to_string();
        match self {
            Preset::Prm => table6_specs(r).map_err(e),
            Preset::R322 => {
                if r != 3 {
                    return Err(format!("r322 is defined for r = 3 only, got r = {r}"));
                }
                table7_specs(Table7Variant::R322).map_err(e)
            }
            Preset::MimicPm | Preset::MimicRm => Err(
                "the imitation sets are defined at dk = 6/10 only; use them with map-profile or check-cnm".into(),
            ),
            _ => {
                let f = self.family().expect("uniform preset");
                let t = StencilTables::load(r).map_err(e)?;
                t.linear_weights().iter().map(|&d| MappingSpec::new(f.clone(), d).map_err(e)).collect()
            }
        }
    }

    /// Spec at sub-stencil `k`, or the single imitation spec.
    pub fn spec(self, r: usize, k: usize) -> Result<MappingSpec, String> {
        match self {
            Preset::MimicPm | Preset::MimicRm => {
                let v = if self == Preset::MimicPm { Table7Variant::MimicPm } else { Table7Variant::MimicRm };
                Ok(table7_specs(v).map_err(|e| e.to_string())?.remove(0))
            }
            _ => {
                let mut specs = self.specs(r)?;
                if k >= specs.len() {
                    return Err(format!("sub-stencil index k = {k} out of range for r = {r}"));
                }
                Ok(specs.swap_remove(k))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in NAMES {
            assert!(n.parse::<Preset>().is_ok(), "{n}");
        }
        assert_eq!("AIM-M".parse::<Preset>(), Ok(Preset::AimM));
        assert!("pm7".parse::<Preset>().is_err());
    }

    #[test]
    fn uniform_presets_follow_linear_weights() {
        let specs = Preset::Pm6.specs(4).unwrap();
        assert_eq!(specs.len(), 4);
        assert!((specs[0].dk() - 1.0 / 35.0).abs() < 1e-15);
        assert!(Preset::R322.specs(2).is_err());
        assert!(Preset::MimicPm.specs(3).is_err());
        assert!(Preset::Prm.spec(3, 3).is_err());
        assert!((Preset::MimicRm.spec(3, 0).unwrap().dk() - 0.6).abs() < 1e-15);
    }
}
