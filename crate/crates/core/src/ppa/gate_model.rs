// SPDX-License-Identifier: Apache-2.0

//! Per-gate area, delay, skew and power.
//!
//! A gate is one pull network per tier joined by its internal wiring: one
//! VDD and one GND rail segment, two node-to-node segments and one
//! input-to-node segment per input. In M3D every tier-crossing net carries
//! one MIV.

use serde::Serialize;

use super::calibrate::Calibration;
use super::parasitics::{wire_parasitics, Scenario};
use super::tech::{check_alpha, Mode, TechParams};
use crate::error::PpaError;
use crate::gate::GateSpec;

/// Ω·fF in ps.
pub(crate) const OHM_FF_PS: f64 = 1e-3;
/// MHz·fF·V² in µW.
pub(crate) const MHZ_FJ_UW: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PpaReport {
    pub t_d_ps: f64,
    pub t_s_ps: f64,
    pub power_uw: f64,
    pub area_um2: f64,
    pub mode: Mode,
    pub alpha: f64,
}

/// Lumped drive resistance and switched capacitance of one gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GateRc {
    pub stack_depth: f64,
    pub r_path_ohm: f64,
    /// Device plus intra-cell wire capacitance, without the output load.
    pub c_own_ff: f64,
}

impl GateRc {
    pub fn delay_ps(&self, load_ff: f64) -> f64 {
        std::f64::consts::LN_2 * self.r_path_ohm * (self.c_own_ff + load_ff) * OHM_FF_PS
    }
}

/// Nets with devices in both tiers: every input, the internal node and the
/// output.
pub fn miv_count(spec: &GateSpec) -> Result<u32, PpaError> {
    match spec.miv_override {
        Some(n) => Ok(n),
        None if spec.counts_estimated => Err(PpaError::Model(format!(
            "gate `{}` is not cataloged and has no MIV override",
            spec.name
        ))),
        None => Ok(spec.arity() as u32 + 2),
    }
}

/// Effective series depth of the switching path: mean product length plus
/// the reset network's share per input.
pub fn stack_depth(spec: &GateSpec, cal: &Calibration) -> f64 {
    spec.set_function.mean_product_len() + cal.reset_weight * spec.arity() as f64
}

pub(crate) fn segment_counts(spec: &GateSpec) -> [(Scenario, f64); 4] {
    [
        (Scenario::VddToNode, 1.0),
        (Scenario::NodeToGnd, 1.0),
        (Scenario::NodeToNode, 2.0),
        (Scenario::InputToNode, spec.arity() as f64),
    ]
}

/// Total wire capacitance and worst segment resistance.
pub fn cell_wiring(spec: &GateSpec, tech: &TechParams, mode: Mode, alpha: f64) -> Result<(f64, f64), PpaError> {
    let mivs = if mode == Mode::M3d { miv_count(spec)? as f64 } else { 0.0 };
    let mut c = mivs * tech.c_miv_ff;
    let mut r: f64 = 0.0;
    for (s, n) in segment_counts(spec) {
        let w = wire_parasitics(s, tech, mode, alpha)?;
        if w.includes_miv {
            c += n * (w.c_ff - tech.c_miv_ff);
            let r_wire = if mivs > 0.0 { w.r_ohm } else { w.r_ohm - tech.r_miv_ohm };
            r = r.max(r_wire);
        } else {
            c += n * w.c_ff;
            r = r.max(w.r_ohm);
        }
    }
    Ok((c, r))
}

pub fn gate_rc(spec: &GateSpec, tech: &TechParams, cal: &Calibration, mode: Mode, alpha: f64) -> Result<GateRc, PpaError> {
    cal.require_fitted()?;
    let depth = stack_depth(spec, cal);
    let (c_wire, r_wire) = cell_wiring(spec, tech, mode, alpha)?;
    Ok(GateRc {
        stack_depth: depth,
        r_path_ohm: cal.r_drive_ohm * depth + r_wire,
        c_own_ff: cal.c_dev_ff * depth + c_wire,
    })
}

pub fn gate_area(spec: &GateSpec, cal: &Calibration, mode: Mode) -> Result<f64, PpaError> {
    let c = spec.counts;
    Ok(match mode {
        Mode::TwoD => c.total() as f64 * cal.a_unit_um2,
        Mode::M3d => c.pmos.max(c.nmos) as f64 * cal.a_unit_um2 + miv_count(spec)? as f64 * cal.a_miv_eff_um2,
    })
}

/// `(t_d, t_s)` in ps with the standard output load.
pub fn gate_delay_skew(spec: &GateSpec, tech: &TechParams, cal: &Calibration, mode: Mode, alpha: f64) -> Result<(f64, f64), PpaError> {
    let t_d = gate_rc(spec, tech, cal, mode, alpha)?.delay_ps(tech.c_load_ff);
    Ok((t_d, cal.k_skew * t_d))
}

pub fn gate_power(spec: &GateSpec, tech: &TechParams, cal: &Calibration, mode: Mode, alpha: f64) -> Result<f64, PpaError> {
    let rc = gate_rc(spec, tech, cal, mode, alpha)?;
    let c = rc.c_own_ff + tech.c_load_ff;
    Ok(cal.activity_mhz * c * tech.v_dd * tech.v_dd * MHZ_FJ_UW + spec.counts.total() as f64 * cal.p_leak_per_t_uw)
}

pub fn gate_ppa(spec: &GateSpec, tech: &TechParams, cal: &Calibration, mode: Mode, alpha: f64) -> Result<PpaReport, PpaError> {
    check_alpha(mode, alpha)?;
    let (t_d_ps, t_s_ps) = gate_delay_skew(spec, tech, cal, mode, alpha)?;
    Ok(PpaReport {
        t_d_ps,
        t_s_ps,
        power_uw: gate_power(spec, tech, cal, mode, alpha)?,
        area_um2: gate_area(spec, cal, mode)?,
        mode,
        alpha,
    })
}

/// `100 · (base − other) / base`.
pub fn improvement_pct(base: f64, other: f64) -> f64 {
    100.0 * (base - other) / base
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{spec_from_name, GateCatalog, STUDIED_GATES};
    use crate::ppa::default_calibration;
    use proptest::prelude::*;

    fn degenerate() -> (TechParams, Calibration) {
        let t = TechParams {
            r_miv_ohm: 0.0,
            c_miv_ff: 0.0,
            ..TechParams::default()
        };
        let c = Calibration {
            a_miv_eff_um2: 0.0,
            ..default_calibration().clone()
        };
        (t, c)
    }

    #[test]
    fn miv_counts() {
        assert_eq!(miv_count(&spec_from_name("TH22").unwrap()).unwrap(), 4);
        assert_eq!(miv_count(&spec_from_name("TH24").unwrap()).unwrap(), 6);
        let mut s = spec_from_name("TH22").unwrap();
        s.miv_override = Some(0);
        assert_eq!(miv_count(&s).unwrap(), 0);
        assert!(miv_count(&spec_from_name("TH14").unwrap()).is_err());
    }

    #[test]
    fn th22_area_example() {
        let cal = default_calibration();
        let s = spec_from_name("TH22").unwrap();
        assert!((gate_area(&s, cal, Mode::TwoD).unwrap() - 0.2052).abs() < 0.2052 * 0.01);
    }

    #[test]
    fn balanced_zero_overhead_halves_area() {
        let (_, cal) = degenerate();
        let mut s = spec_from_name("TH24").unwrap();
        s.miv_override = Some(0);
        let a2 = gate_area(&s, &cal, Mode::TwoD).unwrap();
        assert_eq!(gate_area(&s, &cal, Mode::M3d).unwrap(), a2 / 2.0);
    }

    #[test]
    fn degenerate_identity_every_gate() {
        let (t, cal) = degenerate();
        for s in GateCatalog::builtin().iter() {
            let a = gate_ppa(s, &t, &cal, Mode::TwoD, 1.0).unwrap();
            let b = gate_ppa(s, &t, &cal, Mode::M3d, 1.0).unwrap();
            assert_eq!((a.t_d_ps, a.t_s_ps, a.power_uw), (b.t_d_ps, b.t_s_ps, b.power_uw), "{}", s.name);
            let c = s.counts;
            assert_eq!(b.area_um2, c.pmos.max(c.nmos) as f64 * cal.a_unit_um2);
        }
    }

    #[test]
    fn zero_activity_zero_leak_is_zero_power() {
        let cal = Calibration {
            activity_mhz: 0.0,
            p_leak_per_t_uw: 0.0,
            ..default_calibration().clone()
        };
        let s = spec_from_name("TH34").unwrap();
        assert_eq!(gate_power(&s, &TechParams::default(), &cal, Mode::TwoD, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn m3d_smaller_for_every_catalog_gate() {
        let cal = default_calibration();
        let mut total = 0.0;
        for s in GateCatalog::builtin().iter() {
            let a2 = gate_area(s, cal, Mode::TwoD).unwrap();
            let a3 = gate_area(s, cal, Mode::M3d).unwrap();
            assert!(a3 < a2, "{}", s.name);
        }
        for g in STUDIED_GATES {
            let s = spec_from_name(g).unwrap();
            total += improvement_pct(gate_area(&s, cal, Mode::TwoD).unwrap(), gate_area(&s, cal, Mode::M3d).unwrap());
        }
        let avg = total / STUDIED_GATES.len() as f64;
        assert!((40.0..=48.0).contains(&avg), "{avg}");
    }

    #[test]
    fn uncalibrated_rejected() {
        let s = spec_from_name("TH22").unwrap();
        let r = gate_delay_skew(&s, &TechParams::default(), &Calibration::default(), Mode::TwoD, 1.0);
        assert!(r.is_err());
    }

    proptest! {
        #[test]
        fn nondecreasing_in_alpha(g in 0usize..6, a in 0.05f64..1.0, b in 0.05f64..1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let s = spec_from_name(STUDIED_GATES[g]).unwrap();
            let t = TechParams::default();
            let cal = default_calibration();
            let p = gate_ppa(&s, &t, cal, Mode::M3d, lo).unwrap();
            let q = gate_ppa(&s, &t, cal, Mode::M3d, hi).unwrap();
            prop_assert!(p.t_d_ps <= q.t_d_ps && p.t_s_ps <= q.t_s_ps && p.power_uw <= q.power_uw);
        }
    }
}
