// SPDX-License-Identifier: Apache-2.0

//! Intra-cell routing parasitics for the four wiring scenarios.

use serde::Serialize;

use super::tech::{check_alpha, Mode, TechParams};
use crate::error::PpaError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scenario {
    VddToNode,
    NodeToGnd,
    NodeToNode,
    InputToNode,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::VddToNode,
        Scenario::NodeToGnd,
        Scenario::NodeToNode,
        Scenario::InputToNode,
    ];

    /// Whether the scenario crosses tiers in M3D and is alpha-scaled.
    pub fn spans_tiers(self) -> bool {
        matches!(self, Scenario::NodeToNode | Scenario::InputToNode)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WireParasitics {
    pub length_nm: f64,
    pub r_ohm: f64,
    pub c_ff: f64,
    pub includes_miv: bool,
}

/// R and C of one wire segment. Rail connections run half the cell height;
/// the other two scenarios run `route_fraction` of it. Each segment carries
/// one contact via.
pub fn wire_parasitics(scenario: Scenario, tech: &TechParams, mode: Mode, alpha: f64) -> Result<WireParasitics, PpaError> {
    check_alpha(mode, alpha)?;
    let h = tech.cell_height_nm();
    let mut length_nm = if scenario.spans_tiers() {
        h * tech.route_fraction
    } else {
        h / 2.0
    };
    let m3d_span = mode == Mode::M3d && scenario.spans_tiers();
    if m3d_span {
        length_nm *= alpha;
    }
    let mut r_ohm = tech.r_int_sq_ohm * length_nm / tech.w_m1_nm + tech.r_via_ohm;
    let mut c_ff = tech.c_int_ff_per_mm * length_nm * 1e-6;
    if m3d_span {
        r_ohm += tech.r_miv_ohm;
        c_ff += tech.c_miv_ff;
    }
    Ok(WireParasitics {
        length_nm,
        r_ohm,
        c_ff,
        includes_miv: m3d_span,
    })
}
