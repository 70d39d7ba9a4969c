// SPDX-License-Identifier: Apache-2.0

use super::{DualRail, GateId, Netlist};
use crate::error::NetlistError;

/// Net values plus the held output of every gate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WavefrontState {
    pub net_values: Vec<bool>,
    pub gate_states: Vec<bool>,
}

impl WavefrontState {
    /// All nets low, all gates reset.
    pub fn reset(netlist: &Netlist) -> Self {
        Self {
            net_values: vec![false; netlist.net_count()],
            gate_states: vec![false; netlist.gates().len()],
        }
    }

    pub fn port_values(&self, ports: &[super::DualRailPort]) -> Vec<DualRail> {
        ports
            .iter()
            .map(|p| DualRail::from_rails(self.net_values[p.rail1], self.net_values[p.rail0]))
            .collect()
    }

    pub fn outputs(&self, netlist: &Netlist) -> Vec<DualRail> {
        self.port_values(netlist.outputs())
    }
}

/// Applies `input_rails` (`rail1, rail0` per input port, in port order) and
/// evaluates every gate to the fixpoint.
///
/// The gate graph is acyclic, so one pass in topological order reaches the
/// fixpoint; a second pass confirms it.
pub fn settle(
    netlist: &Netlist,
    input_rails: &[bool],
    state: WavefrontState,
) -> Result<WavefrontState, NetlistError> {
    settle_frozen(netlist, input_rails, state, None)
}

/// [`settle`] with one gate's output held at 0.
pub fn settle_frozen(
    netlist: &Netlist,
    input_rails: &[bool],
    mut state: WavefrontState,
    frozen: Option<GateId>,
) -> Result<WavefrontState, NetlistError> {
    if input_rails.len() != netlist.input_rail_count() {
        return Err(NetlistError::RailCount {
            expected: netlist.input_rail_count(),
            got: input_rails.len(),
        });
    }
    if state.net_values.len() != netlist.net_count()
        || state.gate_states.len() != netlist.gates().len()
    {
        return Err(NetlistError::Invalid("state does not match netlist".into()));
    }
    let order = netlist
        .topo_order()
        .map_err(|_| NetlistError::NonConvergence { passes: 0 })?;
    for (p, port) in netlist.inputs().iter().enumerate() {
        state.net_values[port.rail1] = input_rails[2 * p];
        state.net_values[port.rail0] = input_rails[2 * p + 1];
    }
    for pass in 0..2 {
        let mut changed = false;
        for &g in order {
            let inst = &netlist.gates()[g];
            let next = if frozen == Some(g) {
                false
            } else {
                let mask = inst
                    .inputs
                    .iter()
                    .enumerate()
                    .fold(0u8, |m, (i, &n)| m | ((state.net_values[n] as u8) << i));
                inst.spec.next_mask(mask, state.gate_states[g])
            };
            if next != state.gate_states[g] || next != state.net_values[inst.output] {
                changed = true;
            }
            state.gate_states[g] = next;
            state.net_values[inst.output] = next;
        }
        if pass == 1 && changed {
            return Err(NetlistError::NonConvergence { passes: 2 });
        }
    }
    Ok(state)
}

/// Input rails for a DATA word (bit `i` of `word` goes to input port `i`).
pub(crate) fn data_rails(n_inputs: usize, word: u64) -> Vec<bool> {
    (0..n_inputs)
        .flat_map(|i| {
            let b = (word >> i) & 1 == 1;
            [b, !b]
        })
        .collect()
}

/// Settles a DATA vector from the reset state and returns the outputs.
pub fn eval_data(netlist: &Netlist, values: &[bool]) -> Result<Vec<DualRail>, NetlistError> {
    let rails: Vec<bool> = values.iter().flat_map(|&b| [b, !b]).collect();
    let s = settle(netlist, &rails, WavefrontState::reset(netlist))?;
    Ok(s.outputs(netlist))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn oracle_and(a: bool, b: bool) -> DualRail {
        DualRail::data(a && b)
    }

    #[test]
    fn reset_stays_low() {
        let n = and_complete();
        let s = settle(&n, &[false; 4], WavefrontState::reset(&n)).unwrap();
        assert!(s.net_values.iter().all(|v| !v));
    }

    #[test]
    fn and_truth_table() {
        let n = and_complete();
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(eval_data(&n, &[a, b]).unwrap(), vec![oracle_and(a, b)]);
            }
        }
    }

    #[test]
    fn hysteresis_holds_until_all_null() {
        let n = and_complete();
        let s = settle(&n, &data_rails(2, 0b11), WavefrontState::reset(&n)).unwrap();
        assert_eq!(s.outputs(&n), vec![DualRail::Data1]);
        // A returns to NULL, B still DATA1: output holds.
        let s = settle(&n, &[false, false, true, false], s).unwrap();
        assert_eq!(s.outputs(&n), vec![DualRail::Data1]);
        let s = settle(&n, &[false; 4], s).unwrap();
        assert_eq!(s.outputs(&n), vec![DualRail::Null]);
    }

    #[test]
    fn rail_count_checked() {
        let n = and_complete();
        assert!(matches!(
            settle(&n, &[false; 3], WavefrontState::reset(&n)),
            Err(NetlistError::RailCount { expected: 4, got: 3 })
        ));
    }

    /// Input rails after `k` inputs of `order` have received their DATA value.
    fn partial(word: u64, order: &[usize], k: usize) -> Vec<bool> {
        let mut r = vec![false; 4];
        for &i in &order[..k] {
            let b = (word >> i) & 1 == 1;
            r[2 * i] = b;
            r[2 * i + 1] = !b;
        }
        r
    }

    proptest! {
        #[test]
        fn idempotent(rails in proptest::collection::vec(any::<bool>(), 4), st in proptest::collection::vec(any::<bool>(), 2)) {
            let n = and_complete();
            let mut s0 = WavefrontState::reset(&n);
            s0.gate_states = st;
            let once = settle(&n, &rails, s0).unwrap();
            let twice = settle(&n, &rails, once.clone()).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn wavefronts_are_monotone(word in 0u64..4, swap in any::<bool>()) {
            let n = and_complete();
            let order = if swap { [1, 0] } else { [0, 1] };
            let mut s = WavefrontState::reset(&n);
            let mut prev = s.net_values.clone();
            for k in 0..=2 {
                s = settle(&n, &partial(word, &order, k), s).unwrap();
                prop_assert!(prev.iter().zip(&s.net_values).all(|(a, b)| !a || *b));
                prev = s.net_values.clone();
            }
            for k in (0..2).rev() {
                s = settle(&n, &partial(word, &order, k), s).unwrap();
                prop_assert!(prev.iter().zip(&s.net_values).all(|(a, b)| *a || !b));
                prop_assert!(s.outputs(&n).iter().all(|v| *v != DualRail::Invalid));
                prev = s.net_values.clone();
            }
        }
    }
}
