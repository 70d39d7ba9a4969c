// SPDX-License-Identifier: Apache-2.0

//! Circuit-level rollups over a pipelined netlist.
//!
//! Every cell gets the gate model's delay with its own load: the standard
//! output load plus inter-cell routing of `route_um_per_fanout` per fanout
//! branch. In M3D that routing shrinks by alpha and by the square root of
//! the footprint ratio. Delay is the worst C/L latency over the vectors,
//! skew the widest spread of C/L output arrivals in one wavefront, and power
//! the measured switching energy per operation at `op_rate_mhz` plus
//! leakage.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use super::calibrate::Calibration;
use super::gate_model::{gate_area, gate_rc, GateRc, PpaReport, MHZ_FJ_UW};
use super::tech::{check_alpha, Mode, TechParams};
use crate::error::PpaError;
use crate::gate::{spec_from_name, GateSpec, TransistorCounts};
use crate::netlist::Netlist;
use crate::sim::{build_pipeline, measure, simulate, CellKind, DelayAssignment, PipelineSystem, Trace};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircuitPpa {
    pub report: PpaReport,
    pub vectors: usize,
    /// Gates in the combinational logic.
    pub gates: usize,
    pub transistors: u64,
    /// Switching energy per operation (fJ).
    pub energy_fj: f64,
    pub leakage_uw: f64,
    pub max_forward_latency_ps: f64,
}

/// A static inverter: one device per tier, input and output span tiers.
fn inverter_spec() -> Arc<GateSpec> {
    static S: OnceLock<Arc<GateSpec>> = OnceLock::new();
    Arc::clone(S.get_or_init(|| {
        let mut s = spec_from_name("TH11").expect("TH11 is well formed");
        s.name = "INV".into();
        s.counts = TransistorCounts { pmos: 1, nmos: 1 };
        s.counts_estimated = false;
        s.miv_override = Some(2);
        Arc::new(s)
    }))
}

fn cell_spec(kind: &CellKind) -> Arc<GateSpec> {
    match kind {
        CellKind::Threshold(s) => Arc::clone(s),
        CellKind::Inverter => inverter_spec(),
    }
}

/// Sum of gate areas of the combinational logic.
pub fn circuit_area(netlist: &Netlist, cal: &Calibration, mode: Mode) -> Result<f64, PpaError> {
    netlist.gates().iter().map(|g| gate_area(&g.spec, cal, mode)).sum()
}

/// Inter-cell route scale relative to 2D.
fn route_scale(netlist: &Netlist, cal: &Calibration, mode: Mode, alpha: f64) -> Result<f64, PpaError> {
    Ok(match mode {
        Mode::TwoD => 1.0,
        Mode::M3d => {
            let a2 = circuit_area(netlist, cal, Mode::TwoD)?;
            let a3 = circuit_area(netlist, cal, Mode::M3d)?;
            alpha * (a3 / a2).sqrt()
        }
    })
}

struct CellLoads {
    rc: Vec<GateRc>,
    load_ff: Vec<f64>,
}

fn cell_loads(sys: &PipelineSystem, tech: &TechParams, cal: &Calibration, mode: Mode, alpha: f64) -> Result<CellLoads, PpaError> {
    let scale = route_scale(sys.cl(), cal, mode, alpha)?;
    let mut cache: HashMap<String, GateRc> = HashMap::new();
    let mut rc = Vec::with_capacity(sys.cells().len());
    let mut load_ff = Vec::with_capacity(sys.cells().len());
    for c in sys.cells() {
        let spec = cell_spec(&c.kind);
        let r = match cache.get(&spec.name) {
            Some(r) => *r,
            None => {
                let r = gate_rc(&spec, tech, cal, mode, alpha)?;
                cache.insert(spec.name.clone(), r);
                r
            }
        };
        let branches = sys.fanout_of(c.output).max(1) as f64;
        let route_mm = cal.route_um_per_fanout * branches * scale * 1e-3;
        rc.push(r);
        load_ff.push(tech.c_load_ff + tech.c_int_ff_per_mm * route_mm);
    }
    Ok(CellLoads { rc, load_ff })
}

/// Model delays of every cell of a pipeline, equal for both edges.
pub fn circuit_delays(sys: &PipelineSystem, tech: &TechParams, cal: &Calibration, mode: Mode, alpha: f64) -> Result<DelayAssignment, PpaError> {
    check_alpha(mode, alpha)?;
    let l = cell_loads(sys, tech, cal, mode, alpha)?;
    Ok(DelayAssignment::from_fn(sys, |i, _| {
        let d = l.rc[i].delay_ps(l.load_ff[i]);
        (d, d)
    })?)
}

/// Widest spread of rising C/L output rails within one DATA wavefront.
fn output_skew_ps(trace: &Trace) -> f64 {
    let mut is_out = vec![false; trace.net_names.len()];
    for &n in trace.cl_outputs.iter() {
        is_out[n] = true;
    }
    let mut worst = 0u64;
    for w in &trace.wavefronts {
        let times = trace
            .transitions
            .iter()
            .filter(|t| t.value && is_out[t.net] && t.time_fs >= w.data_applied_fs && t.time_fs <= w.output_data_fs)
            .map(|t| t.time_fs);
        if let (Some(lo), Some(hi)) = (times.clone().min(), times.max()) {
            worst = worst.max(hi - lo);
        }
    }
    worst as f64 / crate::sim::FS_PER_PS
}

pub fn circuit_ppa(
    netlist: &Netlist,
    vectors: &[u64],
    tech: &TechParams,
    cal: &Calibration,
    mode: Mode,
    alpha: f64,
) -> Result<CircuitPpa, PpaError> {
    check_alpha(mode, alpha)?;
    if netlist.outputs().is_empty() {
        return Err(PpaError::Model("netlist has no outputs to time".into()));
    }
    if vectors.is_empty() {
        return Err(PpaError::Model("at least one input vector is required".into()));
    }
    let sys = build_pipeline(netlist, 1)?;
    let loads = cell_loads(&sys, tech, cal, mode, alpha)?;
    let delays = DelayAssignment::from_fn(&sys, |i, _| {
        let d = loads.rc[i].delay_ps(loads.load_ff[i]);
        (d, d)
    })?;
    let trace = simulate(&sys, vectors, &delays)?;
    let m = measure(&trace)?;

    let v2 = tech.v_dd * tech.v_dd;
    let mut energy_fj = 0.0;
    let mut leakage_uw = 0.0;
    let mut transistors = 0u64;
    for (i, c) in sys.cells().iter().enumerate() {
        if c.cl_gate.is_none() {
            continue;
        }
        let toggles = m.transitions_per_net[c.output] as f64 / vectors.len() as f64;
        energy_fj += toggles * 0.5 * (loads.rc[i].c_own_ff + loads.load_ff[i]) * v2;
        let n = cell_spec(&c.kind).counts.total();
        leakage_uw += n as f64 * cal.p_leak_per_t_uw;
        transistors += n as u64;
    }
    Ok(CircuitPpa {
        report: PpaReport {
            t_d_ps: m.max_cl_latency_ps(),
            t_s_ps: output_skew_ps(&trace),
            power_uw: cal.op_rate_mhz * energy_fj * MHZ_FJ_UW + leakage_uw,
            area_um2: circuit_area(netlist, cal, mode)?,
            mode,
            alpha,
        },
        vectors: vectors.len(),
        gates: netlist.gates().len(),
        transistors,
        energy_fj,
        leakage_uw,
        max_forward_latency_ps: m.max_forward_latency_ps(),
    })
}

/// Sets `route_um_per_fanout` so the 2D delay equals `target_t_d_ps`, then
/// `op_rate_mhz` so the 2D power equals `target_power_uw`.
pub fn calibrate_circuit(
    netlist: &Netlist,
    vectors: &[u64],
    tech: &TechParams,
    cal: &Calibration,
    target_t_d_ps: f64,
    target_power_uw: f64,
) -> Result<Calibration, PpaError> {
    let mut c = cal.clone();
    let mut delay_at = |route: f64| -> Result<f64, PpaError> {
        c.route_um_per_fanout = route;
        Ok(circuit_ppa(netlist, vectors, tech, &c, Mode::TwoD, 1.0)?.report.t_d_ps)
    };
    if delay_at(0.0)? > target_t_d_ps {
        return Err(PpaError::Model(format!(
            "target delay {target_t_d_ps} ps is below the unrouted delay"
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while delay_at(hi)? < target_t_d_ps {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(PpaError::Model("route search diverged".into()));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if delay_at(mid)? < target_t_d_ps {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-9 * hi {
            break;
        }
    }
    let mut out = cal.clone();
    out.route_um_per_fanout = 0.5 * (lo + hi);
    out.op_rate_mhz = 0.0;
    let p = circuit_ppa(netlist, vectors, tech, &out, Mode::TwoD, 1.0)?;
    let dynamic = target_power_uw - p.leakage_uw;
    if !(dynamic > 0.0) || p.energy_fj <= 0.0 {
        return Err(PpaError::Model(format!(
            "target power {target_power_uw} µW does not exceed leakage {:.3} µW",
            p.leakage_uw
        )));
    }
    out.op_rate_mhz = dynamic / (p.energy_fj * MHZ_FJ_UW);
    Ok(out)
}
