// SPDX-License-Identifier: Apache-2.0

//! Fitting model constants to reference gate characterizations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gate_model::{cell_wiring, improvement_pct, miv_count, MHZ_FJ_UW, OHM_FF_PS};
use super::tech::{Mode, TechParams};
use crate::error::PpaError;
use crate::gate::{GateCatalog, GateSpec, STUDIED_GATES};

/// Largest accepted relative residual of fitted delay, skew and power.
pub const FIT_LIMIT_PCT: f64 = 10.0;
/// Largest accepted deviation of a gate's area per transistor from the mean.
pub const A_UNIT_LIMIT_PCT: f64 = 1.0;

/// Fitted model constants. Calibration files are TOML with these keys.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Calibration {
    /// Area per transistor (µm²).
    pub a_unit_um2: f64,
    /// Area per tier-crossing net (µm²).
    pub a_miv_eff_um2: f64,
    pub r_drive_ohm: f64,
    /// Device capacitance per unit of stack depth (fF).
    pub c_dev_ff: f64,
    /// Reset-network contribution to stack depth, per input.
    pub reset_weight: f64,
    /// Skew as a fraction of delay.
    pub k_skew: f64,
    /// Switching rate of the single-gate characterization (MHz).
    pub activity_mhz: f64,
    pub p_leak_per_t_uw: f64,
    /// Inter-cell route per fanout branch in circuits (µm).
    pub route_um_per_fanout: f64,
    /// Operation rate that circuit power is normalized to (MHz).
    pub op_rate_mhz: f64,
}

impl Calibration {
    pub fn from_toml(text: &str) -> Result<Self, PpaError> {
        let c: Calibration = toml::from_str(text).map_err(|e| PpaError::Config(format!("calibration file: {e}")))?;
        let fields = [
            c.a_unit_um2,
            c.a_miv_eff_um2,
            c.r_drive_ohm,
            c.c_dev_ff,
            c.reset_weight,
            c.k_skew,
            c.activity_mhz,
            c.p_leak_per_t_uw,
            c.route_um_per_fanout,
            c.op_rate_mhz,
        ];
        if fields.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(PpaError::Config("calibration values must be finite and non-negative".into()));
        }
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("calibration serializes")
    }

    pub(crate) fn require_fitted(&self) -> Result<(), PpaError> {
        if self.r_drive_ohm > 0.0 && self.a_unit_um2 > 0.0 {
            Ok(())
        } else {
            Err(PpaError::Model("calibration has no fitted drive resistance or unit area".into()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefMetrics {
    pub t_d_ps: f64,
    pub t_s_ps: f64,
    pub power_uw: f64,
    pub area_um2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefImprovement {
    pub t_d: f64,
    pub t_s: f64,
    pub power: f64,
    pub area: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefGate {
    pub planar: RefMetrics,
    pub m3d: Option<RefMetrics>,
    pub improvement_pct: Option<RefImprovement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefCircuitImprovement {
    pub t_d: f64,
    pub power: f64,
    pub area: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefCircuit {
    pub width: usize,
    pub t_d_ps: f64,
    pub power_uw: f64,
    pub m3d_t_d_ps: f64,
    pub m3d_power_uw: f64,
    pub transistors: u64,
    pub improvement_pct: RefCircuitImprovement,
}

/// Reference characterization: per-gate 2D and M3D values at one alpha,
/// optionally a multiplier row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceTable {
    pub alpha: f64,
    pub gates: BTreeMap<String, RefGate>,
    pub average_improvement_pct: Option<RefImprovement>,
    pub multiplier: Option<RefCircuit>,
}

impl ReferenceTable {
    pub fn from_toml(text: &str) -> Result<Self, PpaError> {
        toml::from_str(text).map_err(|e| PpaError::Config(format!("reference table: {e}")))
    }

    pub fn builtin() -> &'static ReferenceTable {
        static T: std::sync::OnceLock<ReferenceTable> = std::sync::OnceLock::new();
        T.get_or_init(|| {
            ReferenceTable::from_toml(include_str!("../../data/reference.toml")).expect("bundled reference table parses")
        })
    }

    /// The M3D area a gate should reach: from the improvement column when
    /// present, else the M3D area column.
    pub fn m3d_area_target(&self, gate: &str) -> Option<f64> {
        let g = self.gates.get(gate)?;
        match (g.improvement_pct, g.m3d) {
            (Some(i), _) => Some(g.planar.area_um2 * (1.0 - i.area / 100.0)),
            (None, Some(m)) => Some(m.area_um2),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateFit {
    pub gate: String,
    pub t_d_pct: f64,
    pub t_s_pct: f64,
    pub power_pct: f64,
    pub a_unit_pct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationFit {
    pub calibration: Calibration,
    pub residuals: Vec<GateFit>,
}

/// Least squares for two unknowns via the normal equations.
fn lsq2(rows: &[[f64; 2]], rhs: &[f64]) -> Option<[f64; 2]> {
    let (mut a, mut b, mut c, mut u, mut v) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (r, y) in rows.iter().zip(rhs) {
        a += r[0] * r[0];
        b += r[0] * r[1];
        c += r[1] * r[1];
        u += r[0] * y;
        v += r[1] * y;
    }
    let det = a * c - b * b;
    if det.abs() <= f64::EPSILON * a * c {
        return None;
    }
    Some([(u * c - v * b) / det, (a * v - b * u) / det])
}

/// One-unknown least squares along column `k`.
fn lsq1(rows: &[[f64; 2]], rhs: &[f64], k: usize) -> f64 {
    let num: f64 = rows.iter().zip(rhs).map(|(r, y)| r[k] * y).sum();
    let den: f64 = rows.iter().map(|r| r[k] * r[k]).sum();
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Two-unknown least squares with both unknowns clamped at zero.
fn nnls2(rows: &[[f64; 2]], rhs: &[f64]) -> [f64; 2] {
    let sse = |x: [f64; 2]| -> f64 { rows.iter().zip(rhs).map(|(r, y)| (r[0] * x[0] + r[1] * x[1] - y).powi(2)).sum() };
    if let Some(x) = lsq2(rows, rhs) {
        if x[0] >= 0.0 && x[1] >= 0.0 {
            return x;
        }
    }
    let a = [lsq1(rows, rhs, 0).max(0.0), 0.0];
    let b = [0.0, lsq1(rows, rhs, 1).max(0.0)];
    if sse(a) <= sse(b) {
        a
    } else {
        b
    }
}

struct GateData {
    name: String,
    spec: GateSpec,
    planar: RefMetrics,
    c_wire: f64,
    r_wire: f64,
}

fn rel(pred: f64, target: f64) -> f64 {
    100.0 * (pred - target) / target
}

/// Fits delay constants for one reset weight; returns `(r_drive, c_dev)`.
fn fit_delay(data: &[GateData], tech: &TechParams, kappa: f64) -> Option<(f64, f64)> {
    let ln2 = std::f64::consts::LN_2 * OHM_FF_PS;
    let cl = tech.c_load_ff;
    let mut c_dev = 0.0;
    let mut x = (0.0, 0.0);
    // The wire-resistance cross term is tiny; a few passes settle it.
    for _ in 0..4 {
        let mut rows = Vec::with_capacity(data.len());
        let mut rhs = Vec::with_capacity(data.len());
        for g in data {
            let dep = g.spec.set_function.mean_product_len() + kappa * g.spec.arity() as f64;
            let td = g.planar.t_d_ps;
            rows.push([ln2 * dep * dep / td, ln2 * dep * (g.c_wire + cl) / td]);
            rhs.push(1.0 - ln2 * g.r_wire * (c_dev * dep + g.c_wire + cl) / td);
        }
        let (a, b) = match lsq2(&rows, &rhs) {
            Some([a, b]) if a >= 0.0 => (a, b),
            _ => (0.0, lsq1(&rows, &rhs, 1)),
        };
        if !(b > 0.0) {
            return None;
        }
        c_dev = a / b;
        x = (b, c_dev);
    }
    Some(x)
}

/// Fits the model to the reference table's 2D rows and M3D areas.
///
/// Reset weight is searched on a 0.01 grid over [0, 1]; drive resistance
/// and device capacitance come from a linear least-squares fit of relative
/// delay residuals, skew fraction and power terms from closed-form fits.
pub fn calibrate(tech: &TechParams, table: &ReferenceTable, catalog: &GateCatalog) -> Result<CalibrationFit, PpaError> {
    tech.validate()?;
    let mut data = Vec::new();
    for name in STUDIED_GATES {
        let g = table.gates.get(name).ok_or_else(|| PpaError::MissingGate(name.to_string()))?;
        let spec = catalog.spec(name)?;
        let (c_wire, r_wire) = cell_wiring(&spec, tech, Mode::TwoD, 1.0)?;
        data.push(GateData {
            name: name.to_string(),
            spec,
            planar: g.planar,
            c_wire,
            r_wire,
        });
    }

    let per_t: Vec<f64> = data.iter().map(|g| g.planar.area_um2 / g.spec.counts.total() as f64).collect();
    let a_unit = per_t.iter().sum::<f64>() / per_t.len() as f64;

    let mut miv_rows = (0.0, 0.0);
    for g in &data {
        if let Some(target) = table.m3d_area_target(&g.name) {
            let m = miv_count(&g.spec)? as f64;
            let c = g.spec.counts;
            miv_rows.0 += m * (target - c.pmos.max(c.nmos) as f64 * a_unit);
            miv_rows.1 += m * m;
        }
    }
    if miv_rows.1 == 0.0 {
        return Err(PpaError::Config("reference table has no M3D areas".into()));
    }
    let a_miv = (miv_rows.0 / miv_rows.1).max(0.0);

    let mut best: Option<(f64, Calibration)> = None;
    for step in 0..=100 {
        let kappa = step as f64 / 100.0;
        let Some((r_drive, c_dev)) = fit_delay(&data, tech, kappa) else {
            continue;
        };
        let mut cal = Calibration {
            a_unit_um2: a_unit,
            a_miv_eff_um2: a_miv,
            r_drive_ohm: r_drive,
            c_dev_ff: c_dev,
            reset_weight: kappa,
            k_skew: 1.0,
            ..Calibration::default()
        };
        let mut obj = 0.0;
        let (mut s1, mut s2) = (0.0, 0.0);
        for g in &data {
            let td = super::gate_delay_skew(&g.spec, tech, &cal, Mode::TwoD, 1.0)?.0;
            obj += (td / g.planar.t_d_ps - 1.0).powi(2);
            let r = td / g.planar.t_s_ps;
            s1 += r;
            s2 += r * r;
        }
        cal.k_skew = s1 / s2;
        for g in &data {
            let ts = super::gate_delay_skew(&g.spec, tech, &cal, Mode::TwoD, 1.0)?.1;
            obj += (ts / g.planar.t_s_ps - 1.0).powi(2);
        }
        if best.as_ref().is_none_or(|(o, _)| obj < *o) {
            best = Some((obj, cal));
        }
    }
    let (_, mut cal) = best.ok_or_else(|| PpaError::Model("no admissible delay fit".into()))?;

    let v2 = tech.v_dd * tech.v_dd;
    let mut rows = Vec::new();
    for g in &data {
        let rc = super::gate_rc(&g.spec, tech, &cal, Mode::TwoD, 1.0)?;
        let p = g.planar.power_uw;
        rows.push([(rc.c_own_ff + tech.c_load_ff) * v2 * MHZ_FJ_UW / p, g.spec.counts.total() as f64 / p]);
    }
    let [act, leak] = nnls2(&rows, &vec![1.0; rows.len()]);
    cal.activity_mhz = act;
    cal.p_leak_per_t_uw = leak;

    let mut residuals = Vec::new();
    for (g, pt) in data.iter().zip(&per_t) {
        let (td, ts) = super::gate_delay_skew(&g.spec, tech, &cal, Mode::TwoD, 1.0)?;
        let p = super::gate_power(&g.spec, tech, &cal, Mode::TwoD, 1.0)?;
        let fit = GateFit {
            gate: g.name.clone(),
            t_d_pct: rel(td, g.planar.t_d_ps),
            t_s_pct: rel(ts, g.planar.t_s_ps),
            power_pct: rel(p, g.planar.power_uw),
            a_unit_pct: rel(*pt, a_unit),
        };
        for (metric, r, limit) in [
            ("t_d", fit.t_d_pct, FIT_LIMIT_PCT),
            ("t_s", fit.t_s_pct, FIT_LIMIT_PCT),
            ("power", fit.power_pct, FIT_LIMIT_PCT),
            ("area per transistor", fit.a_unit_pct, A_UNIT_LIMIT_PCT),
        ] {
            if r.abs() > limit {
                return Err(PpaError::FitResidual {
                    gate: g.name.clone(),
                    metric,
                    residual_pct: r,
                    limit_pct: limit,
                });
            }
        }
        residuals.push(fit);
    }
    Ok(CalibrationFit {
        calibration: cal,
        residuals,
    })
}

/// Area improvement a calibration predicts for one gate.
pub fn predicted_area_improvement(spec: &GateSpec, cal: &Calibration) -> Result<f64, PpaError> {
    let a2 = super::gate_area(spec, cal, Mode::TwoD)?;
    let a3 = super::gate_area(spec, cal, Mode::M3d)?;
    Ok(improvement_pct(a2, a3))
}
