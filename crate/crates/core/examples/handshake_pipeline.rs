// SPDX-License-Identifier: Apache-2.0

//! Four-phase handshaking pipeline: latency, cycle time, random delays.
//!
//! `cargo run --release --example handshake_pipeline`

use ncl3d::sim::{
    build_pipeline, check_delay_insensitivity, measure, random_delays, simulate, DelayAssignment, NetClass,
};
use ncl3d::synth::{expand_dual_rail, parse_boolean_netlist};

fn main() {
    let adder = expand_dual_rail(&parse_boolean_netlist(include_str!("../data/rca4.bnet")).unwrap()).unwrap();
    let sys = build_pipeline(&adder, 1).unwrap();
    println!(
        "pipeline: {} cells, {} banks, {} register cells",
        sys.cells().len(),
        sys.banks().len(),
        sys.cells().iter().filter(|c| c.class == NetClass::Register).count()
    );

    let words = [0u64, 0x11, 0x1f, 0xff, 0x5a];
    let unit = DelayAssignment::uniform(&sys, 10.0).unwrap();
    let trace = simulate(&sys, &words, &unit).unwrap();
    let m = measure(&trace).unwrap();
    for (w, out) in words.iter().zip(trace.words()) {
        println!("{:>3} + {:>3} = {:>3}", w & 15, w >> 4, out);
    }
    println!("C/L latency (10 ps gates): {:?} ps", m.cl_latency_ps);
    println!("mean cycle time: {:.1} ps", m.mean_cycle_time_ps().unwrap());
    println!("transitions by class: {:?}", m.transitions_by_class);

    let skewed = random_delays(&sys, 42, 0);
    let t = simulate(&sys, &words, &skewed).unwrap();
    println!("\nrandom delays give the same words: {}", t.words() == trace.words());
    let di = check_delay_insensitivity(&sys, &words, 50, 42).unwrap();
    println!("delay-insensitivity check, {} trials: {}", di.trials, if di.passed { "pass" } else { "fail" });
    println!("\nfirst transitions:\n{}", trace.to_table().lines().take(8).collect::<Vec<_>>().join("\n"));
}
