// SPDX-License-Identifier: Apache-2.0

//! Behavioural delay-insensitivity checks.
//!
//! Input-completeness: outputs may not complete a NULL to DATA (or DATA to
//! NULL) transition while some input is still in the old phase. Observability:
//! every gate must be able to change some output rail.
//!
//! Only maximal strict subsets are simulated. Settling is monotone in the
//! applied inputs, so if any strict subset completes the outputs, a maximal
//! one containing it does too; each reported subset therefore covers all
//! smaller violating subsets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::settle::{data_rails, settle, settle_frozen};
use super::{Netlist, WavefrontState};
use crate::error::NetlistError;

/// Largest input count swept exhaustively.
pub const EXHAUSTIVE_INPUT_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    NullToData,
    DataToNull,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessViolation {
    /// DATA value per input port.
    pub vector: Vec<bool>,
    /// Inputs that had switched when the outputs completed.
    pub subset: Vec<String>,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservabilityViolation {
    pub gate: String,
}

fn vectors(netlist: &Netlist, mode: CheckMode) -> Result<Vec<u64>, NetlistError> {
    let n = netlist.inputs().len();
    match mode {
        CheckMode::Exhaustive => {
            if n > EXHAUSTIVE_INPUT_LIMIT {
                return Err(NetlistError::SizeGuard {
                    inputs: n,
                    limit: EXHAUSTIVE_INPUT_LIMIT,
                });
            }
            Ok((0..1u64 << n).collect())
        }
        CheckMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
            Ok((0..trials).map(|_| rng.random::<u64>() & mask).collect())
        }
    }
}

/// Rails with only the inputs in `keep` carrying their DATA value.
fn masked_rails(full: &[bool], keep: impl Fn(usize) -> bool) -> Vec<bool> {
    full.iter()
        .enumerate()
        .map(|(r, &v)| v && keep(r / 2))
        .collect()
}

fn all_outputs(netlist: &Netlist, s: &WavefrontState, pred: impl Fn(bool, bool) -> bool) -> bool {
    netlist
        .outputs()
        .iter()
        .all(|p| pred(s.net_values[p.rail1], s.net_values[p.rail0]))
}

pub fn check_input_completeness(
    netlist: &Netlist,
) -> Result<Vec<CompletenessViolation>, NetlistError> {
    check_input_completeness_with(netlist, CheckMode::Exhaustive)
}

pub fn check_input_completeness_with(
    netlist: &Netlist,
    mode: CheckMode,
) -> Result<Vec<CompletenessViolation>, NetlistError> {
    netlist.ensure_valid()?;
    let n = netlist.inputs().len();
    let mut out = Vec::new();
    if n == 0 || netlist.outputs().is_empty() {
        return Ok(out);
    }
    let names: Vec<String> = netlist.inputs().iter().map(|p| p.name.clone()).collect();
    let reset = WavefrontState::reset(netlist);
    for word in vectors(netlist, mode)? {
        let full = data_rails(n, word);
        let vector: Vec<bool> = (0..n).map(|i| (word >> i) & 1 == 1).collect();
        let data_state = settle(netlist, &full, reset.clone())?;
        for skip in 0..n {
            // NULL -> DATA with input `skip` still NULL.
            let rails = masked_rails(&full, |i| i != skip);
            let s = settle(netlist, &rails, reset.clone())?;
            if all_outputs(netlist, &s, |r1, r0| r1 || r0) {
                out.push(CompletenessViolation {
                    vector: vector.clone(),
                    subset: (0..n).filter(|&i| i != skip).map(|i| names[i].clone()).collect(),
                    direction: Direction::NullToData,
                });
            }
            // DATA -> NULL with only input `skip` still DATA.
            let rails = masked_rails(&full, |i| i == skip);
            let s = settle(netlist, &rails, data_state.clone())?;
            if all_outputs(netlist, &s, |r1, r0| !r1 && !r0) {
                out.push(CompletenessViolation {
                    vector: vector.clone(),
                    subset: (0..n).filter(|&i| i != skip).map(|i| names[i].clone()).collect(),
                    direction: Direction::DataToNull,
                });
            }
        }
    }
    Ok(out)
}

pub fn check_observability(netlist: &Netlist) -> Result<Vec<ObservabilityViolation>, NetlistError> {
    check_observability_with(netlist, CheckMode::Exhaustive)
}

/// Flags gates whose output, held at 0, changes no output rail for any DATA
/// wavefront applied from reset.
pub fn check_observability_with(
    netlist: &Netlist,
    mode: CheckMode,
) -> Result<Vec<ObservabilityViolation>, NetlistError> {
    netlist.ensure_valid()?;
    let n = netlist.inputs().len();
    let reset = WavefrontState::reset(netlist);
    let words = vectors(netlist, mode)?;
    let reference: Vec<WavefrontState> = words
        .iter()
        .map(|&w| settle(netlist, &data_rails(n, w), reset.clone()))
        .collect::<Result<_, _>>()?;
    let rails_of = |s: &WavefrontState| -> Vec<bool> {
        netlist
            .outputs()
            .iter()
            .flat_map(|p| [s.net_values[p.rail1], s.net_values[p.rail0]])
            .collect()
    };
    let mut out = Vec::new();
    for (g, inst) in netlist.gates().iter().enumerate() {
        let mut observable = false;
        for (k, &w) in words.iter().enumerate() {
            if !reference[k].net_values[inst.output] {
                continue; // the gate does not switch on this wavefront
            }
            let s = settle_frozen(netlist, &data_rails(n, w), reset.clone(), Some(g))?;
            if rails_of(&s) != rails_of(&reference[k]) {
                observable = true;
                break;
            }
        }
        if !observable {
            out.push(ObservabilityViolation {
                gate: inst.name.clone(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    /// Brute force over every strict subset, as a reference for the
    /// maximal-subset shortcut.
    fn all_subsets_flags(netlist: &Netlist) -> Vec<(u64, Direction)> {
        let n = netlist.inputs().len();
        let reset = WavefrontState::reset(netlist);
        let mut flagged = Vec::new();
        for word in 0..1u64 << n {
            let full = data_rails(n, word);
            let data = settle(netlist, &full, reset.clone()).unwrap();
            for subset in 0..(1u64 << n) - 1 {
                let s = settle(netlist, &masked_rails(&full, |i| subset >> i & 1 == 1), reset.clone()).unwrap();
                if all_outputs(netlist, &s, |a, b| a || b) {
                    flagged.push((word, Direction::NullToData));
                }
                let s = settle(netlist, &masked_rails(&full, |i| subset >> i & 1 == 0), data.clone()).unwrap();
                if all_outputs(netlist, &s, |a, b| !a && !b) {
                    flagged.push((word, Direction::DataToNull));
                }
            }
        }
        flagged.sort_by_key(|(w, d)| (*w, *d as u8));
        flagged.dedup();
        flagged
    }

    fn flagged_pairs(v: &[CompletenessViolation]) -> Vec<(u64, Direction)> {
        let mut p: Vec<(u64, Direction)> = v
            .iter()
            .map(|x| {
                let w = x.vector.iter().enumerate().fold(0u64, |a, (i, &b)| a | (b as u64) << i);
                (w, x.direction)
            })
            .collect();
        p.sort_by_key(|(w, d)| (*w, *d as u8));
        p.dedup();
        p
    }

    #[test]
    fn complete_and_passes() {
        let n = and_complete();
        assert_eq!(check_input_completeness(&n).unwrap(), vec![]);
        assert_eq!(check_observability(&n).unwrap(), vec![]);
    }

    #[test]
    fn relaxed_and_is_flagged() {
        let n = and_relaxed();
        let v = check_input_completeness(&n).unwrap();
        assert!(v.contains(&CompletenessViolation {
            vector: vec![false, false],
            subset: vec!["A".into()],
            direction: Direction::NullToData,
        }));
        assert_eq!(flagged_pairs(&v), all_subsets_flags(&n));
    }

    #[test]
    fn maximal_subsets_agree_with_brute_force() {
        for n in [and_complete(), and_relaxed(), duplicate_fixture()] {
            let v = check_input_completeness(&n).unwrap();
            assert_eq!(flagged_pairs(&v), all_subsets_flags(&n));
        }
    }

    #[test]
    fn buffer_is_complete() {
        let mut n = Netlist::new();
        n.add_input("A", "A1", "A0");
        n.add_output("Z", "Z1", "Z0");
        n.add_gate("b1", spec("TH11"), &["A1"], "Z1");
        n.add_gate("b0", spec("TH11"), &["A0"], "Z0");
        assert_eq!(check_input_completeness(&n).unwrap(), vec![]);
        assert_eq!(check_observability(&n).unwrap(), vec![]);
    }

    fn duplicate_fixture() -> Netlist {
        let mut n = Netlist::new();
        n.add_input("A", "A1", "A0");
        n.add_input("B", "B1", "B0");
        n.add_output("Z", "Z1", "Z0");
        n.add_gate("n1", spec("TH22"), &["A1", "B1"], "n1");
        n.add_gate("n2", spec("TH22"), &["A1", "B1"], "n2");
        n.add_gate("x", spec("TH12"), &["n1", "n2"], "x");
        n.add_gate("z1", spec("TH22"), &["n1", "x"], "Z1");
        n.add_gate("z0", spec("THand0"), &["A0", "B0", "A1", "B1"], "Z0");
        n
    }

    #[test]
    fn duplicate_gate_is_unobservable() {
        let v = check_observability(&duplicate_fixture()).unwrap();
        assert_eq!(v, vec![ObservabilityViolation { gate: "n2".into() }]);
    }

    #[test]
    fn dead_gate_is_unobservable() {
        let mut n = and_complete();
        n.add_gate("dead", spec("TH22"), &["A0", "B0"], "dangling");
        let v = check_observability(&n).unwrap();
        assert_eq!(v, vec![ObservabilityViolation { gate: "dead".into() }]);
    }

    #[test]
    fn size_guard() {
        let mut n = Netlist::new();
        for i in 0..13 {
            n.add_input(&format!("I{i}"), &format!("I{i}_1"), &format!("I{i}_0"));
        }
        n.add_output("Z", "I0_1", "I0_0");
        assert!(matches!(
            check_input_completeness(&n),
            Err(NetlistError::SizeGuard { inputs: 13, .. })
        ));
        assert!(check_input_completeness_with(&n, CheckMode::Sampled { trials: 8, seed: 1 }).is_ok());
    }
}
