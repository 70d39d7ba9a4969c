// SPDX-License-Identifier: Apache-2.0

//! Calibrate against the bundled reference data and print per-gate PPA.
//!
//! `cargo run --release --example gate_ppa_table`

use ncl3d::gate::{spec_from_name, GateCatalog, STUDIED_GATES};
use ncl3d::ppa::{calibrate, gate_ppa, improvement_pct, miv_count, Mode, ReferenceTable, TechParams};

fn main() {
    let tech = TechParams::default();
    let fit = calibrate(&tech, ReferenceTable::builtin(), GateCatalog::builtin()).unwrap();
    let c = &fit.calibration;
    println!(
        "A_unit {:.5} um2, A_miv_eff {:.5} um2, R_drive {:.0} ohm, C_dev {:.4} fF, reset weight {:.2}, k_skew {:.3}",
        c.a_unit_um2, c.a_miv_eff_um2, c.r_drive_ohm, c.c_dev_ff, c.reset_weight, c.k_skew
    );
    println!("{:<9} {:>7} {:>7} {:>7}   (2D fit residuals, %)", "gate", "T_D", "T_S", "P");
    for r in &fit.residuals {
        println!("{:<9} {:>7.2} {:>7.2} {:>7.2}", r.gate, r.t_d_pct, r.t_s_pct, r.power_pct);
    }

    println!("\n{:<9} {:>4} {:>8} {:>8} {:>8} {:>8}  (alpha 0.7)", "gate", "MIVs", "dT_D%", "dT_S%", "dP%", "dA%");
    for g in STUDIED_GATES {
        let s = spec_from_name(g).unwrap();
        let a = gate_ppa(&s, &tech, c, Mode::TwoD, 1.0).unwrap();
        let b = gate_ppa(&s, &tech, c, Mode::M3d, 0.7).unwrap();
        println!(
            "{:<9} {:>4} {:>8.1} {:>8.1} {:>8.1} {:>8.1}",
            g,
            miv_count(&s).unwrap(),
            improvement_pct(a.t_d_ps, b.t_d_ps),
            improvement_pct(a.t_s_ps, b.t_s_ps),
            improvement_pct(a.power_uw, b.power_uw),
            improvement_pct(a.area_um2, b.area_um2)
        );
    }
}
