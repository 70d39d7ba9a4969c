// SPDX-License-Identifier: Apache-2.0

//! M3D improvement across alpha for the gates and for the 4x4 multiplier.
//!
//! `cargo run --release --example alpha_sweep`

use ncl3d::gate::{spec_from_name, STUDIED_GATES};
use ncl3d::ppa::{default_calibration, exhaustive_words, sweep_alpha, SweepTarget, TechParams};
use ncl3d::synth::build_array_multiplier;

fn main() {
    let tech = TechParams::default();
    let cal = default_calibration();
    let alphas = [1.0, 0.9, 0.8, 0.7, 0.6, 0.5];

    let gates: Vec<_> = STUDIED_GATES.iter().map(|g| spec_from_name(g).unwrap()).collect();
    let g = sweep_alpha(&SweepTarget::Gates(&gates), &alphas, &tech, cal).unwrap();
    let n = build_array_multiplier(4).unwrap();
    let words = exhaustive_words(4);
    let c = sweep_alpha(&SweepTarget::Circuit { netlist: &n, vectors: &words }, &alphas, &tech, cal).unwrap();

    println!("{:>5} | {:>6} {:>6} {:>6} {:>6} | {:>6} {:>6} {:>6}", "alpha", "gT_D", "gT_S", "gP", "gA", "mT_D", "mP", "mA");
    for (a, b) in g.summary().zip(c.summary()) {
        println!(
            "{:>5.2} | {:>6.1} {:>6.1} {:>6.1} {:>6.1} | {:>6.1} {:>6.1} {:>6.1}",
            a.alpha, a.t_d_pct, a.t_s_pct, a.power_pct, a.area_pct, b.t_d_pct, b.power_pct, b.area_pct
        );
    }
    println!("monotone: gates {}, multiplier {}", g.monotone, c.monotone);
}
