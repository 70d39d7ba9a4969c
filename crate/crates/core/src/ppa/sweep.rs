// SPDX-License-Identifier: Apache-2.0

//! M3D improvement over 2D as a function of alpha.

use rayon::prelude::*;
use serde::Serialize;

use super::calibrate::Calibration;
use super::circuit::circuit_ppa;
use super::gate_model::{gate_ppa, improvement_pct, PpaReport};
use super::tech::{check_alpha, Mode, TechParams};
use crate::error::PpaError;
use crate::gate::GateSpec;
use crate::netlist::Netlist;

/// Label of the per-alpha mean row in gate sweeps.
pub const AVERAGE_ROW: &str = "average";
/// Label of circuit sweep rows.
pub const CIRCUIT_ROW: &str = "circuit";

pub enum SweepTarget<'a> {
    Gates(&'a [GateSpec]),
    Circuit { netlist: &'a Netlist, vectors: &'a [u64] },
}

/// Percent improvements of M3D over 2D, `100 · (2D − M3D) / 2D`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub subject: String,
    pub t_d_pct: f64,
    pub t_s_pct: f64,
    pub power_pct: f64,
    pub area_pct: f64,
}

impl SweepRow {
    fn between(alpha: f64, subject: &str, base: &PpaReport, m3d: &PpaReport) -> Self {
        Self {
            alpha,
            subject: subject.to_string(),
            t_d_pct: improvement_pct(base.t_d_ps, m3d.t_d_ps),
            t_s_pct: improvement_pct(base.t_s_ps, m3d.t_s_ps),
            power_pct: improvement_pct(base.power_uw, m3d.power_uw),
            area_pct: improvement_pct(base.area_um2, m3d.area_um2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sweep {
    /// Sorted by alpha descending; within one alpha, gates in input order
    /// then the average row.
    pub rows: Vec<SweepRow>,
    /// Whether delay, skew and power improvements of the summary rows rise
    /// strictly as alpha falls.
    pub monotone: bool,
}

impl Sweep {
    /// The average row (gate sweeps) or the circuit row at each alpha.
    pub fn summary(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.subject == AVERAGE_ROW || r.subject == CIRCUIT_ROW)
    }
}

fn mean_row(alpha: f64, rows: &[SweepRow]) -> SweepRow {
    let n = rows.len() as f64;
    let avg = |f: fn(&SweepRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
    SweepRow {
        alpha,
        subject: AVERAGE_ROW.into(),
        t_d_pct: avg(|r| r.t_d_pct),
        t_s_pct: avg(|r| r.t_s_pct),
        power_pct: avg(|r| r.power_pct),
        area_pct: avg(|r| r.area_pct),
    }
}

pub fn gate_improvements(gates: &[GateSpec], tech: &TechParams, cal: &Calibration, alpha: f64) -> Result<Vec<SweepRow>, PpaError> {
    let mut rows = Vec::with_capacity(gates.len() + 1);
    for g in gates {
        let a = gate_ppa(g, tech, cal, Mode::TwoD, 1.0)?;
        let b = gate_ppa(g, tech, cal, Mode::M3d, alpha)?;
        rows.push(SweepRow::between(alpha, &g.name, &a, &b));
    }
    if !rows.is_empty() {
        let m = mean_row(alpha, &rows);
        rows.push(m);
    }
    Ok(rows)
}

pub fn sweep_alpha(target: &SweepTarget<'_>, alphas: &[f64], tech: &TechParams, cal: &Calibration) -> Result<Sweep, PpaError> {
    if alphas.is_empty() {
        return Err(PpaError::Config("empty alpha list".into()));
    }
    for &a in alphas {
        check_alpha(Mode::M3d, a)?;
    }
    let mut sorted = alphas.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.dedup();

    let base = match target {
        SweepTarget::Circuit { netlist, vectors } => Some(circuit_ppa(netlist, vectors, tech, cal, Mode::TwoD, 1.0)?.report),
        SweepTarget::Gates(_) => None,
    };
    let per_alpha: Vec<Vec<SweepRow>> = sorted
        .par_iter()
        .map(|&alpha| match target {
            SweepTarget::Gates(g) => gate_improvements(g, tech, cal, alpha),
            SweepTarget::Circuit { netlist, vectors } => {
                let m3d = circuit_ppa(netlist, vectors, tech, cal, Mode::M3d, alpha)?.report;
                Ok(vec![SweepRow::between(alpha, CIRCUIT_ROW, base.as_ref().expect("2D baseline"), &m3d)])
            }
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<SweepRow> = per_alpha.into_iter().flatten().collect();
    let summary: Vec<&SweepRow> = rows.iter().filter(|r| r.subject == AVERAGE_ROW || r.subject == CIRCUIT_ROW).collect();
    let monotone = summary
        .windows(2)
        .all(|w| w[1].t_d_pct > w[0].t_d_pct && w[1].t_s_pct > w[0].t_s_pct && w[1].power_pct > w[0].power_pct);
    Ok(Sweep { rows, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{spec_from_name, STUDIED_GATES};
    use crate::ppa::default_calibration;

    fn studied() -> Vec<GateSpec> {
        STUDIED_GATES.iter().map(|g| spec_from_name(g).unwrap()).collect()
    }

    #[test]
    fn gate_sweep_sorted_and_monotone() {
        let g = studied();
        let s = sweep_alpha(&SweepTarget::Gates(&g), &[0.6, 0.8, 0.7], &TechParams::default(), default_calibration()).unwrap();
        assert_eq!(s.rows.len(), 3 * 7);
        let alphas: Vec<f64> = s.summary().map(|r| r.alpha).collect();
        assert_eq!(alphas, vec![0.8, 0.7, 0.6]);
        assert!(s.monotone);
    }

    #[test]
    fn degenerate_alpha_one() {
        let t = TechParams {
            r_miv_ohm: 0.0,
            c_miv_ff: 0.0,
            ..TechParams::default()
        };
        let cal = Calibration {
            a_miv_eff_um2: 0.0,
            ..default_calibration().clone()
        };
        let g = vec![spec_from_name("TH22").unwrap(), spec_from_name("TH24").unwrap()];
        let s = sweep_alpha(&SweepTarget::Gates(&g), &[1.0], &t, &cal).unwrap();
        for r in &s.rows {
            assert_eq!((r.t_d_pct, r.t_s_pct, r.power_pct, r.area_pct), (0.0, 0.0, 0.0, 50.0));
        }
    }

    #[test]
    fn errors_and_empty() {
        let t = TechParams::default();
        let cal = default_calibration();
        assert!(sweep_alpha(&SweepTarget::Gates(&[]), &[], &t, cal).is_err());
        assert!(sweep_alpha(&SweepTarget::Gates(&[]), &[1.5], &t, cal).is_err());
        assert!(sweep_alpha(&SweepTarget::Gates(&[]), &[0.7], &t, cal).unwrap().rows.is_empty());
    }
}
