// SPDX-License-Identifier: Apache-2.0

//! Circuit-level PPA of the multiplier from simulated activity and timing.
//!
//! `cargo run --release --example circuit_ppa`

use ncl3d::ppa::{circuit_ppa, default_calibration, exhaustive_words, improvement_pct, Mode, TechParams};
use ncl3d::synth::build_array_multiplier;

fn main() {
    let tech = TechParams::default();
    let cal = default_calibration();
    println!(
        "circuit calibration: {:.3} um route per fanout, {:.1} MHz operation rate",
        cal.route_um_per_fanout, cal.op_rate_mhz
    );
    let n = build_array_multiplier(4).unwrap();
    let words = exhaustive_words(4);
    let a = circuit_ppa(&n, &words, &tech, cal, Mode::TwoD, 1.0).unwrap();
    for alpha in [0.8, 0.7, 0.6] {
        let b = circuit_ppa(&n, &words, &tech, cal, Mode::M3d, alpha).unwrap();
        println!(
            "alpha {alpha}: T_D {:.0} -> {:.0} ps ({:.1}%), P {:.1} -> {:.1} uW ({:.1}%), A {:.2} -> {:.2} um2 ({:.1}%)",
            a.report.t_d_ps,
            b.report.t_d_ps,
            improvement_pct(a.report.t_d_ps, b.report.t_d_ps),
            a.report.power_uw,
            b.report.power_uw,
            improvement_pct(a.report.power_uw, b.report.power_uw),
            a.report.area_um2,
            b.report.area_um2,
            improvement_pct(a.report.area_um2, b.report.area_um2)
        );
    }
    println!("{} gates, {} transistors, {:.1} fJ per operation in 2D", a.gates, a.transistors, a.energy_fj);
}
