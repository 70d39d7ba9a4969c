// SPDX-License-Identifier: Apache-2.0

//! Boolean netlist ingestion, dual-rail expansion and generators.

mod boolnet;
mod expand;
mod multiplier;

use serde::Serialize;

use crate::error::{GateError, SynthError};
use crate::netlist::Netlist;

pub use boolnet::{
    parse_boolean_netlist, parse_boolean_netlist_named, BoolBuilder, BoolGate, BoolKind,
    BoolNetlist,
};
pub use expand::{expand_dual_rail, expand_dual_rail_with};
pub use multiplier::{
    array_multiplier_boolean, build_array_multiplier, build_array_multiplier_with, AdderStyle,
    MAX_WIDTH, MIN_WIDTH,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransistorTally {
    pub total: u64,
    pub pmos: u64,
    pub nmos: u64,
}

/// Sums catalog transistor counts over all gate instances. Gates whose counts
/// are only estimated (not in a catalog) are rejected.
pub fn count_transistors(netlist: &Netlist) -> Result<TransistorTally, SynthError> {
    let mut t = TransistorTally::default();
    for g in netlist.gates() {
        if g.spec.counts_estimated {
            return Err(GateError::UnknownGate(g.spec.name.clone()).into());
        }
        t.pmos += g.spec.counts.pmos as u64;
        t.nmos += g.spec.counts.nmos as u64;
    }
    t.total = t.pmos + t.nmos;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{check_input_completeness, check_observability, parse_netlist};

    #[test]
    fn single_th22() {
        let n = parse_netlist("input A a1 a0\ngate g TH22 a1 a0 -> z\n").unwrap();
        assert_eq!(count_transistors(&n).unwrap(), TransistorTally { total: 12, pmos: 6, nmos: 6 });
    }

    #[test]
    fn and_template_is_32() {
        let n = expand_dual_rail(&parse_boolean_netlist("AND2 a b -> z").unwrap()).unwrap();
        assert_eq!(count_transistors(&n).unwrap().total, 32);
    }

    #[test]
    fn estimated_gate_rejected() {
        let n = parse_netlist("input A a1 a0\ngate g TH11 a1 -> z\n").unwrap();
        assert!(count_transistors(&n).is_err());
    }

    #[test]
    fn multiplier_counts() {
        let m = build_array_multiplier(4).unwrap();
        assert_eq!(m.gates().len(), 128);
        assert_eq!(count_transistors(&m).unwrap().total, 2128);
        let t = build_array_multiplier_with(4, AdderStyle::ThresholdGates, crate::gate::GateCatalog::builtin()).unwrap();
        assert_eq!(count_transistors(&t).unwrap().total, 1424);
    }

    #[test]
    fn multiplier_width3_is_delay_insensitive() {
        for style in [AdderStyle::BooleanCells, AdderStyle::ThresholdGates] {
            let m = build_array_multiplier_with(3, style, crate::gate::GateCatalog::builtin()).unwrap();
            assert_eq!(check_input_completeness(&m).unwrap(), vec![], "{style:?}");
            assert_eq!(check_observability(&m).unwrap(), vec![], "{style:?}");
        }
    }

    #[test]
    fn gate_count_grows_quadratically() {
        let counts: Vec<f64> = (2..=6)
            .map(|w| build_array_multiplier(w).unwrap().gates().len() as f64)
            .collect();
        assert!(counts.windows(2).all(|p| p[1] > p[0]));
        // Second differences of a quadratic are constant.
        let d2: Vec<f64> = counts.windows(3).map(|p| p[2] - 2.0 * p[1] + p[0]).collect();
        assert!(d2.iter().all(|&d| (d - d2[0]).abs() < 1e-9 && d > 0.0), "{d2:?}");
    }
}
