// SPDX-License-Identifier: Apache-2.0

//! Dual-rail settling and the input-completeness / observability checkers.
//!
//! `cargo run --example dual_rail_checks`

use ncl3d::netlist::{
    check_input_completeness, check_observability, eval_data, parse_netlist, word_value, DualRail,
};

fn main() {
    let complete = parse_netlist(include_str!("../data/and_complete.ncl")).unwrap();
    let relaxed = parse_netlist(include_str!("../data/and_relaxed.ncl")).unwrap();

    for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
        let out: Vec<DualRail> = eval_data(&complete, &[a, b]).unwrap();
        println!("AND {} {} -> {} ({:?})", a as u8, b as u8, out[0], word_value(&out));
    }

    for (label, n) in [("complete AND", &complete), ("relaxed AND", &relaxed)] {
        let ic = check_input_completeness(n).unwrap();
        let obs = check_observability(n).unwrap();
        println!("\n{label}: {} completeness violation(s), {} unobservable gate(s)", ic.len(), obs.len());
        for v in ic.iter().take(3) {
            println!("  {:?}: only {:?} switched, vector {:?}", v.direction, v.subset, v.vector);
        }
    }
}
