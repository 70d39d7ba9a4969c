// SPDX-License-Identifier: Apache-2.0

//! Wire parasitics of the four intra-cell routing scenarios, 2D vs M3D.
//!
//! `cargo run --example parasitics`

use ncl3d::ppa::{wire_parasitics, Mode, Scenario, TechParams};

fn main() {
    let t = TechParams::default();
    println!("cell height {} nm", t.cell_height_nm());
    println!("{:<12} {:<4} {:>5} {:>8} {:>8} {:>8}", "scenario", "mode", "alpha", "L nm", "R ohm", "C fF");
    for s in Scenario::ALL {
        for (mode, alpha) in [(Mode::TwoD, 1.0), (Mode::M3d, 0.8), (Mode::M3d, 0.7), (Mode::M3d, 0.6)] {
            let w = wire_parasitics(s, &t, mode, alpha).unwrap();
            println!(
                "{:<12} {:<4} {:>5.2} {:>8.1} {:>8.2} {:>8.4}{}",
                format!("{s:?}"),
                mode.to_string(),
                alpha,
                w.length_nm,
                w.r_ohm,
                w.c_ff,
                if w.includes_miv { "  +MIV" } else { "" }
            );
        }
    }
}
