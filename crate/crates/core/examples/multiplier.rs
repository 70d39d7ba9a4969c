// SPDX-License-Identifier: Apache-2.0

//! The 4x4 array multiplier: structure, exhaustive check, both adder styles.
//!
//! `cargo run --release --example multiplier`

use ncl3d::gate::GateCatalog;
use ncl3d::sim::{build_pipeline, measure, simulate, DelayAssignment};
use ncl3d::synth::{build_array_multiplier_with, count_transistors, AdderStyle};
use std::collections::BTreeMap;

fn main() {
    for style in [AdderStyle::BooleanCells, AdderStyle::ThresholdGates] {
        let n = build_array_multiplier_with(4, style, GateCatalog::builtin()).unwrap();
        let mut mix: BTreeMap<&str, usize> = BTreeMap::new();
        for g in n.gates() {
            *mix.entry(g.spec.name.as_str()).or_default() += 1;
        }
        let t = count_transistors(&n).unwrap();
        println!("{style:?}: {} gates, {} transistors, mix {mix:?}", n.gates().len(), t.total);

        let sys = build_pipeline(&n, 1).unwrap();
        let words: Vec<u64> = (0..256).collect();
        let trace = simulate(&sys, &words, &DelayAssignment::uniform(&sys, 1.0).unwrap()).unwrap();
        let ok = trace.words().iter().zip(&words).filter(|(p, w)| **p == (*w & 15) * (*w >> 4)).count();
        let m = measure(&trace).unwrap();
        println!("  {ok}/256 products correct, unit-delay C/L depth {}", m.max_cl_latency_ps());
    }
}
