// SPDX-License-Identifier: Apache-2.0

//! The shipped data files parse, check and simulate as documented.

use ncl3d::gate::GateCatalog;
use ncl3d::netlist::{check_input_completeness, check_observability, eval_data, parse_netlist, word_value};
use ncl3d::ppa::{Calibration, ReferenceTable, TechParams};
use ncl3d::sim::{build_pipeline, parse_vectors, simulate, DelayAssignment};
use ncl3d::synth::{expand_dual_rail, parse_boolean_netlist};
use ncl3d::{NetlistError, ParseError};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

fn read(name: &str) -> String {
    std::fs::read_to_string(format!("{DATA}/{name}")).unwrap()
}

#[test]
fn complete_templates_are_clean_and_compute() {
    for (file, f) in [
        ("and_complete.ncl", (|a, b| a & b) as fn(bool, bool) -> bool),
        ("or_complete.ncl", |a, b| a | b),
        ("xor_complete.ncl", |a, b| a ^ b),
    ] {
        let n = parse_netlist(&read(file)).unwrap();
        assert!(check_input_completeness(&n).unwrap().is_empty(), "{file}");
        assert!(check_observability(&n).unwrap().is_empty(), "{file}");
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            let out = eval_data(&n, &[a, b]).unwrap();
            assert_eq!(word_value(&out), Some(f(a, b) as u64), "{file} {a} {b}");
        }
    }
}

#[test]
fn relaxed_and_is_flagged() {
    let n = parse_netlist(&read("and_relaxed.ncl")).unwrap();
    let v = check_input_completeness(&n).unwrap();
    assert!(!v.is_empty());
    assert!(v.iter().all(|v| v.subset.len() == 1));
}

#[test]
fn shipped_rca4_matches_synthesis() {
    let b = parse_boolean_netlist(&read("rca4.bnet")).unwrap();
    let synthesized = expand_dual_rail(&b).unwrap();
    let shipped = parse_netlist(&read("rca4.ncl")).unwrap();
    assert_eq!(shipped.to_text(), synthesized.to_text());
}

#[test]
fn rca4_vectors_simulate_to_sums() {
    let n = parse_netlist(&read("rca4.ncl")).unwrap();
    let words = parse_vectors(&read("rca4.vec"), 8, "rca4.vec").unwrap();
    assert!(!words.is_empty());
    let sys = build_pipeline(&n, 1).unwrap();
    let t = simulate(&sys, &words, &DelayAssignment::uniform(&sys, 5.0).unwrap()).unwrap();
    let sums: Vec<u64> = words.iter().map(|w| (w & 15) + (w >> 4)).collect();
    assert_eq!(t.words(), sums);
}

#[test]
fn mult4_vectors_fit_the_multiplier() {
    let words = parse_vectors(&read("mult4.vec"), 8, "mult4.vec").unwrap();
    assert!(words.iter().all(|&w| w < 256));
}

#[test]
fn config_files_load() {
    assert_eq!(TechParams::from_toml(&read("tech_default.toml")).unwrap(), TechParams::default());
    let cat = GateCatalog::from_toml(&read("catalog.toml")).unwrap();
    assert_eq!(cat.len(), GateCatalog::builtin().len());
    assert!(ReferenceTable::builtin().multiplier.is_some());
    let cal = ncl3d::ppa::default_calibration();
    assert_eq!(&Calibration::from_toml(&cal.to_toml()).unwrap(), cal);
    assert_eq!(&Calibration::from_toml(&read("calibration.toml")).unwrap(), cal);
}

#[test]
fn malformed_netlist_reports_location() {
    let text = "input a a.1 a.0\noutput z z.1 z.0\ngate g TH22 a.1 z.1\n";
    match parse_netlist(text) {
        Err(NetlistError::Parse(ParseError { line, .. })) => assert_eq!(line, 3),
        other => panic!("expected a located parse error, got {other:?}"),
    }
    let e = parse_netlist("input a a.1 a.0\ngate g TH99 a.1 a.0 -> z\n").unwrap_err();
    assert!(e.to_string().contains("TH99"), "{e}");
}
