// SPDX-License-Identifier: Apache-2.0

//! Analytical power, performance and area model for 2D and M3D cells.

mod calibrate;
mod circuit;
mod gate_model;
mod parasitics;
mod sweep;
mod tech;

pub use calibrate::{
    calibrate, predicted_area_improvement, Calibration, CalibrationFit, GateFit, RefCircuit, RefCircuitImprovement,
    RefGate, RefImprovement, RefMetrics, ReferenceTable, A_UNIT_LIMIT_PCT, FIT_LIMIT_PCT,
};
pub use gate_model::{
    cell_wiring, gate_area, gate_delay_skew, gate_power, gate_ppa, gate_rc, improvement_pct, miv_count, stack_depth,
    GateRc, PpaReport,
};
pub use circuit::{calibrate_circuit, circuit_area, circuit_delays, circuit_ppa, CircuitPpa};
pub use parasitics::{wire_parasitics, Scenario, WireParasitics};
pub use sweep::{gate_improvements, sweep_alpha, Sweep, SweepRow, SweepTarget, AVERAGE_ROW, CIRCUIT_ROW};
pub use tech::{check_alpha, Mode, TechParams};

use crate::error::PpaError;
use crate::gate::GateCatalog;
use crate::synth::build_array_multiplier;

/// Every input word of a `width`-bit multiplier.
pub fn exhaustive_words(width: usize) -> Vec<u64> {
    (0..1u64 << (2 * width)).collect()
}

/// Full calibration from a reference table: gate constants, then circuit
/// routing and operation rate from the multiplier row (if present) over all
/// of its input words.
pub fn calibrate_all(tech: &TechParams, table: &ReferenceTable, catalog: &GateCatalog) -> Result<CalibrationFit, PpaError> {
    let mut fit = calibrate(tech, table, catalog)?;
    if let Some(m) = table.multiplier {
        let n = build_array_multiplier(m.width).map_err(|e| PpaError::Model(e.to_string()))?;
        fit.calibration = calibrate_circuit(&n, &exhaustive_words(m.width), tech, &fit.calibration, m.t_d_ps, m.power_uw)?;
    }
    Ok(fit)
}

/// Calibration fitted to the bundled reference table with default tech.
pub fn default_calibration() -> &'static Calibration {
    static C: std::sync::OnceLock<Calibration> = std::sync::OnceLock::new();
    C.get_or_init(|| {
        calibrate_all(&TechParams::default(), ReferenceTable::builtin(), GateCatalog::builtin())
            .expect("bundled reference table calibrates")
            .calibration
    })
}
