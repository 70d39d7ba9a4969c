// SPDX-License-Identifier: Apache-2.0

//! Boolean netlist to dual-rail NCL, then an input-completeness check.
//!
//! `cargo run --example synthesize_boolean`

use ncl3d::netlist::{check_input_completeness, check_observability, eval_data, word_value};
use ncl3d::synth::{count_transistors, expand_dual_rail, parse_boolean_netlist};

fn main() {
    let b = parse_boolean_netlist(include_str!("../data/rca4.bnet")).unwrap();
    let n = expand_dual_rail(&b).unwrap();
    let t = count_transistors(&n).unwrap();
    println!("rca4: {} Boolean gates -> {} threshold gates, {} transistors", b.gates().len(), n.gates().len(), t.total);

    // The dual-rail circuit agrees with the Boolean one on every input.
    for word in 0..256u64 {
        let bits: Vec<bool> = (0..8).map(|i| word >> i & 1 == 1).collect();
        let got = word_value(&eval_data(&n, &bits).unwrap()).unwrap();
        assert_eq!(got, b.eval_word(word));
    }
    println!("dual-rail output matches the Boolean netlist on all 256 inputs");
    println!("{} + {} = {}", 9, 6, b.eval_word(9 | 6 << 4));

    let ic = check_input_completeness(&n).unwrap();
    let obs = check_observability(&n).unwrap();
    println!("input-completeness violations: {}, unobservable gates: {}", ic.len(), obs.len());
    print!("\n{}", n.to_text().lines().take(12).collect::<Vec<_>>().join("\n"));
    println!("\n...");
}
