// SPDX-License-Identifier: Apache-2.0

//! Handshaking pipeline simulation.

mod di;
mod engine;
mod measure;
mod pipeline;
mod vectors;

pub use di::{check_delay_insensitivity, random_delays, Counterexample, DiReport, MAX_DELAY_PS, MIN_DELAY_PS};
pub use engine::{simulate, simulate_with, DelayAssignment, SimOptions, Trace, Transition, WavefrontMarks, FS_PER_PS};
pub use measure::{measure, Metrics};
pub use pipeline::{build_pipeline, build_pipeline_with, Bank, Cell, CellId, CellKind, NetClass, PipelineSystem, RailPair, Stage};
pub use vectors::{format_vectors, parse_vectors};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::SimError;
    use crate::gate::spec_from_name;
    use crate::netlist::Netlist;
    use crate::synth::build_array_multiplier;
    use std::sync::Arc;

    fn identity(width: usize) -> Netlist {
        let mut n = Netlist::new();
        for i in 0..width {
            let (r1, r0) = (format!("x{i}.1"), format!("x{i}.0"));
            n.add_input(&format!("x{i}"), &r1, &r0);
            n.add_output(&format!("y{i}"), &r1, &r0);
        }
        n
    }

    /// One TH12 per rail: a dual-rail buffer of depth `depth`.
    fn buffer_chain(depth: usize) -> Netlist {
        let mut n = Netlist::new();
        n.add_input("x", "x.1", "x.0");
        let th = Arc::new(spec_from_name("TH12").unwrap());
        let mut prev = ("x.1".to_string(), "x.0".to_string());
        for k in 0..depth {
            let cur = (format!("n{k}.1"), format!("n{k}.0"));
            n.add_gate(&cur.0, Arc::clone(&th), &[&prev.0, &prev.0], &cur.0);
            n.add_gate(&cur.1, Arc::clone(&th), &[&prev.1, &prev.1], &cur.1);
            prev = cur;
        }
        n.add_output("y", &prev.0, &prev.1);
        n
    }

    fn mult_word(a: u64, b: u64) -> u64 {
        a | (b << 4)
    }

    #[test]
    fn identity_one_wavefront() {
        let s = build_pipeline(&identity(1), 1).unwrap();
        let d = DelayAssignment::uniform(&s, 10.0).unwrap();
        let t = simulate(&s, &[1], &d).unwrap();
        assert_eq!(t.words(), vec![1]);
        let out1 = s.find_net("out/y0.1").unwrap();
        let rises: Vec<bool> = t.transitions.iter().filter(|x| x.net == out1).map(|x| x.value).collect();
        assert_eq!(rises, vec![true, false]);
    }

    #[test]
    fn empty_vector_list() {
        let s = build_pipeline(&identity(2), 2).unwrap();
        let d = DelayAssignment::uniform(&s, 1.0).unwrap();
        let t = simulate(&s, &[], &d).unwrap();
        assert!(t.transitions.is_empty() && t.wavefronts.is_empty());
    }

    #[test]
    fn multiplier_seven_times_nine() {
        let s = build_pipeline(&build_array_multiplier(4).unwrap(), 1).unwrap();
        let d = DelayAssignment::uniform(&s, 1.0).unwrap();
        let t = simulate(&s, &[mult_word(7, 9)], &d).unwrap();
        assert_eq!(t.words(), vec![63]);
    }

    #[test]
    fn single_and_series_gate_latency() {
        for (depth, delays) in [(1usize, vec![37.0]), (2, vec![11.0, 29.0])] {
            let s = build_pipeline(&buffer_chain(depth), 1).unwrap();
            let mut d = DelayAssignment::uniform(&s, 5.0).unwrap();
            for (id, c) in s.cells().iter().enumerate() {
                if let Some(g) = c.cl_gate {
                    let ps = delays[g / 2];
                    d.set_ps(id, ps, ps).unwrap();
                }
            }
            let m = measure(&simulate(&s, &[0, 1], &d).unwrap()).unwrap();
            let sum: f64 = delays.iter().sum();
            assert_eq!(m.cl_latency_ps, vec![sum, sum]);
            // Two register stages of 5 ps around the C/L. Later wavefronts
            // also wait for the previous NULL to clear the output bank.
            assert_eq!(m.forward_latency_ps[0], sum + 10.0);
            assert!(m.forward_latency_ps[1] >= m.forward_latency_ps[0]);
            assert_eq!(m.cycle_time_ps.len(), 1);
        }
    }

    #[test]
    fn multiplier_unit_latency_is_dag_depth() {
        let cl = build_array_multiplier(4).unwrap();
        let depth = cl.depths().unwrap();
        let crit = cl.outputs().iter().flat_map(|p| [depth[p.rail1], depth[p.rail0]]).max().unwrap();
        let s = build_pipeline(&cl, 1).unwrap();
        let d = DelayAssignment::uniform(&s, 1.0).unwrap();
        let words: Vec<u64> = (0..256).collect();
        let m = measure(&simulate(&s, &words, &d).unwrap()).unwrap();
        assert_eq!(m.max_cl_latency_ps(), crit as f64);
        assert_eq!(crit, 12);
    }

    #[test]
    fn deterministic_traces() {
        let s = build_pipeline(&build_array_multiplier(3).unwrap(), 1).unwrap();
        let d = random_delays(&s, 7, 3);
        let a = simulate(&s, &[1, 20, 63], &d).unwrap();
        let b = simulate(&s, &[1, 20, 63], &d).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_table(), b.to_table());
    }

    #[test]
    fn multistage_identity_chain() {
        let s = build_pipeline(&identity(3), 3).unwrap();
        let d = random_delays(&s, 1, 0);
        let words: Vec<u64> = (0..8).collect();
        assert_eq!(simulate(&s, &words, &d).unwrap().words(), words);
    }

    #[test]
    fn vector_width_checked() {
        let s = build_pipeline(&identity(2), 1).unwrap();
        let d = DelayAssignment::uniform(&s, 1.0).unwrap();
        assert!(matches!(simulate(&s, &[4], &d), Err(SimError::VectorWidth { .. })));
        assert!(DelayAssignment::uniform(&s, 0.0).is_err());
    }

    #[test]
    fn di_passes_on_identity_and_multiplier() {
        let s = build_pipeline(&identity(2), 1).unwrap();
        assert!(check_delay_insensitivity(&s, &[0, 1, 2, 3], 10, 3).unwrap().passed);
        let s = build_pipeline(&build_array_multiplier(3).unwrap(), 1).unwrap();
        let words: Vec<u64> = (0..64).collect();
        let r = check_delay_insensitivity(&s, &words, 8, 11).unwrap();
        assert!(r.passed, "{:?}", r.counterexample.map(|c| c.failure));
        assert_eq!(r.reference, (0..64u64).map(|w| (w & 7) * (w >> 3)).collect::<Vec<_>>());
    }

    /// Relaxed AND whose rail0 passes through a slow buffer: the buffered
    /// DATA0 can arrive after the NULL wavefront has been acknowledged.
    pub(crate) fn orphan_and() -> Netlist {
        let mut n = Netlist::new();
        n.add_input("A", "A1", "A0");
        n.add_input("B", "B1", "B0");
        n.add_output("Z", "Z1", "Z0");
        n.add_gate("z1", Arc::new(spec_from_name("TH22").unwrap()), &["A1", "B1"], "Z1");
        n.add_gate("m", Arc::new(spec_from_name("TH11").unwrap()), &["B0"], "m");
        n.add_gate("z0", Arc::new(spec_from_name("TH12").unwrap()), &["A0", "m"], "Z0");
        n
    }

    #[test]
    fn orphan_detected_with_slow_buffer() {
        let s = build_pipeline(&orphan_and(), 1).unwrap();
        let slow = s.cells().iter().position(|c| c.name == "s0/m").unwrap();
        let mut d = DelayAssignment::uniform(&s, 1.0).unwrap();
        d.set_ps(slow, 50.0, 50.0).unwrap();
        // A=0,B=0 then A=1,B=1: the late DATA0 on m collides with DATA1.
        let r = simulate(&s, &[0b00, 0b11], &d);
        assert!(r.is_err() || r.unwrap().words() != vec![0, 1]);
        let words = [0b00, 0b11].repeat(8);
        let report = check_delay_insensitivity(&s, &words, 400, 5).unwrap();
        assert!(!report.passed);
        let ce = report.counterexample.unwrap();
        assert_eq!(ce.delays.len(), s.cells().len());
    }
}
