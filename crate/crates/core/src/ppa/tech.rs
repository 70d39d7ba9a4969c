// SPDX-License-Identifier: Apache-2.0

//! Process and design parameters.
//!
//! Tech files are TOML with one key per field below; missing keys take the
//! default. Lengths are in nm, resistances in Ω, capacitances in fF.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::PpaError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TechParams {
    /// Channel length.
    pub l_g_nm: f64,
    /// Source/drain length as tabulated.
    pub l_src_nm: f64,
    /// Alternate source/drain length. Stored only; area comes from calibration.
    pub l_src_alt_nm: f64,
    pub w_src_nm: f64,
    /// Interlayer dielectric thickness. Not used by the analytical model.
    pub t_ild_nm: f64,
    pub t_miv_nm: f64,
    pub w_m1_nm: f64,
    pub pitch_m1_nm: f64,
    /// Gate-region width. Not used by the analytical model.
    pub w_gate_nm: f64,
    pub r_int_sq_ohm: f64,
    pub r_via_ohm: f64,
    pub c_int_ff_per_mm: f64,
    pub r_miv_ohm: f64,
    pub c_miv_ff: f64,
    pub koz_nm: f64,
    pub cell_tracks: u32,
    pub v_dd: f64,
    pub c_load_ff: f64,
    /// Node-to-node and input-to-node wirelength as a fraction of cell height.
    pub route_fraction: f64,
}

impl Default for TechParams {
    fn default() -> Self {
        Self {
            l_g_nm: 50.0,
            l_src_nm: 50.0,
            l_src_alt_nm: 90.0,
            w_src_nm: 90.0,
            t_ild_nm: 120.0,
            t_miv_nm: 50.0,
            w_m1_nm: 65.0,
            pitch_m1_nm: 130.0,
            w_gate_nm: 50.0,
            r_int_sq_ohm: 0.38,
            r_via_ohm: 6.0,
            c_int_ff_per_mm: 179.93,
            r_miv_ohm: 5.5,
            c_miv_ff: 0.04,
            koz_nm: 50.0,
            cell_tracks: 14,
            v_dd: 1.1,
            c_load_ff: 1.0,
            route_fraction: 1.0,
        }
    }
}

impl TechParams {
    pub fn from_toml(text: &str) -> Result<Self, PpaError> {
        let t: TechParams = toml::from_str(text).map_err(|e| PpaError::Config(format!("tech file: {e}")))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("tech parameters serialize")
    }

    /// Every parameter must be positive; MIV parasitics may be zero.
    pub fn validate(&self) -> Result<(), PpaError> {
        let positive = [
            ("l_g_nm", self.l_g_nm),
            ("l_src_nm", self.l_src_nm),
            ("l_src_alt_nm", self.l_src_alt_nm),
            ("w_src_nm", self.w_src_nm),
            ("t_ild_nm", self.t_ild_nm),
            ("t_miv_nm", self.t_miv_nm),
            ("w_m1_nm", self.w_m1_nm),
            ("pitch_m1_nm", self.pitch_m1_nm),
            ("w_gate_nm", self.w_gate_nm),
            ("r_int_sq_ohm", self.r_int_sq_ohm),
            ("r_via_ohm", self.r_via_ohm),
            ("c_int_ff_per_mm", self.c_int_ff_per_mm),
            ("koz_nm", self.koz_nm),
            ("cell_tracks", self.cell_tracks as f64),
            ("v_dd", self.v_dd),
            ("c_load_ff", self.c_load_ff),
            ("route_fraction", self.route_fraction),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(PpaError::Tech { name, value });
            }
        }
        for (name, value) in [("r_miv_ohm", self.r_miv_ohm), ("c_miv_ff", self.c_miv_ff)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(PpaError::Tech { name, value });
            }
        }
        Ok(())
    }

    /// Standard cell height in nm.
    pub fn cell_height_nm(&self) -> f64 {
        self.cell_tracks as f64 * self.pitch_m1_nm
    }
}

/// Planar or transistor-level monolithic 3D implementation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "2D")]
    TwoD,
    #[serde(rename = "M3D")]
    M3d,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Mode::TwoD => "2D",
            Mode::M3d => "M3D",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = PpaError;

    fn from_str(s: &str) -> Result<Self, PpaError> {
        match s.to_ascii_uppercase().as_str() {
            "2D" => Ok(Mode::TwoD),
            "M3D" | "3D" => Ok(Mode::M3d),
            _ => Err(PpaError::Config(format!("unknown mode `{s}` (expected 2D or M3D)"))),
        }
    }
}

/// Rejects alpha outside (0, 1], and any alpha other than 1 in 2D.
pub fn check_alpha(mode: Mode, alpha: f64) -> Result<(), PpaError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(PpaError::Alpha(alpha));
    }
    if mode == Mode::TwoD && alpha != 1.0 {
        return Err(PpaError::Alpha2d(alpha));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_valid_and_round_trip() {
        let t = TechParams::default();
        t.validate().unwrap();
        assert_eq!(TechParams::from_toml(&t.to_toml()).unwrap(), t);
        assert_eq!(t.cell_height_nm(), 1820.0);
    }

    #[test]
    fn bundled_file_is_default() {
        let t = TechParams::from_toml(include_str!("../../data/tech_default.toml")).unwrap();
        assert_eq!(t, TechParams::default());
    }

    #[test]
    fn partial_file_and_errors() {
        let t = TechParams::from_toml("v_dd = 1.0\nc_miv_ff = 0.0\n").unwrap();
        assert_eq!(t.v_dd, 1.0);
        assert_eq!(t.c_miv_ff, 0.0);
        assert!(matches!(TechParams::from_toml("v_dd = -1.0"), Err(PpaError::Tech { name: "v_dd", .. })));
        assert!(TechParams::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn alpha_rules() {
        assert!(check_alpha(Mode::M3d, 0.7).is_ok());
        assert!(check_alpha(Mode::TwoD, 1.0).is_ok());
        assert_eq!(check_alpha(Mode::TwoD, 0.7), Err(PpaError::Alpha2d(0.7)));
        assert_eq!(check_alpha(Mode::M3d, 0.0), Err(PpaError::Alpha(0.0)));
        assert!(check_alpha(Mode::M3d, 1.2).is_err());
        assert_eq!("m3d".parse::<Mode>().unwrap(), Mode::M3d);
    }
}
