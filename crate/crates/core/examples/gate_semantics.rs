// SPDX-License-Identifier: Apache-2.0

//! Threshold gates with hysteresis: set functions, hold and reset.
//!
//! `cargo run --example gate_semantics`

use ncl3d::gate::{next_output, spec_from_name, GateCatalog};

fn main() {
    for name in ["TH22", "TH34", "TH54w322", "TH24comp", "THand0", "TH34W2W1W1W1"] {
        let s = spec_from_name(name).unwrap();
        println!(
            "{:<14} arity {}  Z = {:<28} pmos {:>2} nmos {:>2}{}",
            name,
            s.arity(),
            s.set_function.to_string(),
            s.counts.pmos,
            s.counts.nmos,
            if s.counts_estimated { " (estimated)" } else { "" }
        );
    }

    // A TH22 behaves as a C-element: it sets on 11, resets on 00, holds otherwise.
    let th22 = spec_from_name("TH22").unwrap();
    let mut z = false;
    print!("\nTH22 trace:");
    for inputs in [[false, false], [true, false], [true, true], [false, true], [false, false]] {
        z = next_output(&th22, &inputs, z).unwrap();
        print!("  {}{}->{}", inputs[0] as u8, inputs[1] as u8, z as u8);
    }
    println!();

    println!("\ncatalog gates: {}", GateCatalog::builtin().names().collect::<Vec<_>>().join(" "));
    match spec_from_name("TH55w2") {
        Err(e) => println!("TH55w2 rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
