// SPDX-License-Identifier: Apache-2.0

//! Unsigned array (Braun) multiplier generator.
//!
//! Partial products `a_j & b_i` feed a carry-save array: row 1 uses half
//! adders, rows 2..w-1 full adders, and a final ripple row resolves the
//! remaining carries. A width-`w` array has `w*w` AND cells, `w` half adders
//! and `w*(w-2)` full adders.
//!
//! Ports: inputs `a0..a{w-1}` then `b0..b{w-1}`; outputs `p0..p{2w-1}`, LSB
//! first. The input word for `(a, b)` is therefore `a | b << w`.

use std::sync::Arc;

use super::boolnet::{BoolBuilder, BoolKind, BoolNetlist};
use super::expand::{emit2, expand_dual_rail_with, Specs};
use crate::error::SynthError;
use crate::gate::GateCatalog;
use crate::netlist::Netlist;

pub const MIN_WIDTH: usize = 2;
pub const MAX_WIDTH: usize = 8;

/// How adder cells are mapped to threshold gates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AdderStyle {
    /// Full adder as two XOR2, two AND2 and one OR2 Boolean cells, each
    /// expanded with the TH22 / THand0 / TH24comp templates.
    #[default]
    BooleanCells,
    /// Dedicated dual-rail full adder: carries from TH23, sums from TH34w2
    /// with the opposite carry rail at weight 2.
    ThresholdGates,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Cell {
    And { a: String, b: String, z: String },
    Half { a: String, b: String, s: String, c: String },
    Full { a: String, b: String, ci: String, s: String, co: String },
}

/// Cells of the array plus the net carrying each product bit.
fn braun_cells(width: usize) -> (Vec<Cell>, Vec<String>) {
    let mut cells = Vec::new();
    let pp = |i: usize, j: usize| format!("pp{i}_{j}");
    for i in 0..width {
        for j in 0..width {
            cells.push(Cell::And {
                a: format!("a{j}"),
                b: format!("b{i}"),
                z: pp(i, j),
            });
        }
    }
    let mut outs = vec![pp(0, 0)];
    // Row 1: half adders over rows 0 and 1 of the partial products.
    let mut sums = Vec::new();
    let mut carries = Vec::new();
    for j in 0..width - 1 {
        let (s, c) = (format!("s1_{j}"), format!("c1_{j}"));
        cells.push(Cell::Half { a: pp(0, j + 1), b: pp(1, j), s: s.clone(), c: c.clone() });
        sums.push(s);
        carries.push(c);
    }
    sums.push(pp(1, width - 1));
    outs.push(sums[0].clone());
    for i in 2..width {
        let mut ns = Vec::new();
        let mut nc = Vec::new();
        for j in 0..width - 1 {
            let (s, c) = (format!("s{i}_{j}"), format!("c{i}_{j}"));
            cells.push(Cell::Full {
                a: sums[j + 1].clone(),
                b: pp(i, j),
                ci: carries[j].clone(),
                s: s.clone(),
                co: c.clone(),
            });
            ns.push(s);
            nc.push(c);
        }
        ns.push(pp(i, width - 1));
        sums = ns;
        carries = nc;
        outs.push(sums[0].clone());
    }
    // Final ripple row.
    let mut carry: Option<String> = None;
    for j in 0..width - 1 {
        let (s, c) = (format!("sf_{j}"), format!("cf_{j}"));
        let (x, y) = (sums[j + 1].clone(), carries[j].clone());
        match carry.take() {
            None => cells.push(Cell::Half { a: x, b: y, s: s.clone(), c: c.clone() }),
            Some(ci) => cells.push(Cell::Full { a: x, b: y, ci, s: s.clone(), co: c.clone() }),
        }
        outs.push(s);
        carry = Some(c);
    }
    outs.push(carry.expect("width >= 2"));
    (cells, outs)
}

fn check_width(width: usize) -> Result<(), SynthError> {
    if !(MIN_WIDTH..=MAX_WIDTH).contains(&width) {
        return Err(SynthError::Width(width));
    }
    Ok(())
}

/// The multiplier as a Boolean netlist (full adders in Boolean cells).
pub fn array_multiplier_boolean(width: usize) -> Result<BoolNetlist, SynthError> {
    check_width(width)?;
    let (cells, outs) = braun_cells(width);
    let mut b = BoolBuilder::new();
    for j in 0..width {
        b.input(&format!("a{j}"))?;
    }
    for i in 0..width {
        b.input(&format!("b{i}"))?;
    }
    for k in 0..2 * width {
        b.output(&format!("p{k}"));
    }
    for cell in &cells {
        match cell {
            Cell::And { a, b: bb, z } => {
                b.gate(BoolKind::And2, &[a, bb], z)?;
            }
            Cell::Half { a, b: bb, s, c } => {
                b.gate(BoolKind::Xor2, &[a, bb], s)?;
                b.gate(BoolKind::And2, &[a, bb], c)?;
            }
            Cell::Full { a, b: bb, ci, s, co } => {
                let (t, g, p) = (format!("{s}_t"), format!("{co}_g"), format!("{co}_p"));
                b.gate(BoolKind::Xor2, &[a, bb], &t)?;
                b.gate(BoolKind::Xor2, &[&t, ci], s)?;
                b.gate(BoolKind::And2, &[a, bb], &g)?;
                b.gate(BoolKind::And2, &[&t, ci], &p)?;
                b.gate(BoolKind::Or2, &[&g, &p], co)?;
            }
        }
    }
    for (k, o) in outs.iter().enumerate() {
        b.gate(BoolKind::Buf, &[o], &format!("p{k}"))?;
    }
    b.finish()
}

pub fn build_array_multiplier(width: usize) -> Result<Netlist, SynthError> {
    build_array_multiplier_with(width, AdderStyle::default(), GateCatalog::builtin())
}

pub fn build_array_multiplier_with(
    width: usize,
    style: AdderStyle,
    cat: &GateCatalog,
) -> Result<Netlist, SynthError> {
    check_width(width)?;
    if style == AdderStyle::BooleanCells {
        return expand_dual_rail_with(&array_multiplier_boolean(width)?, cat);
    }
    let specs = Specs::load(cat)?;
    let th23 = Arc::new(cat.spec("TH23")?);
    let th34w2 = Arc::new(cat.spec("TH34w2")?);
    let rails = |n: &str| (format!("{n}.1"), format!("{n}.0"));
    let mut out = Netlist::new();
    for p in ["a", "b"] {
        for j in 0..width {
            let n = format!("{p}{j}");
            let r = rails(&n);
            out.add_input(&n, &r.0, &r.1);
        }
    }
    let (cells, outs) = braun_cells(width);
    for cell in &cells {
        match cell {
            Cell::And { a, b, z } => {
                emit2(&mut out, &specs, BoolKind::And2, &rails(a), &rails(b), z);
            }
            Cell::Half { a, b, s, c } => {
                emit2(&mut out, &specs, BoolKind::Xor2, &rails(a), &rails(b), s);
                emit2(&mut out, &specs, BoolKind::And2, &rails(a), &rails(b), c);
            }
            Cell::Full { a, b, ci, s, co } => {
                let (a, b, ci, s, co) = (rails(a), rails(b), rails(ci), rails(s), rails(co));
                out.add_gate(&co.0, Arc::clone(&th23), &[&a.0, &b.0, &ci.0], &co.0);
                out.add_gate(&co.1, Arc::clone(&th23), &[&a.1, &b.1, &ci.1], &co.1);
                out.add_gate(&s.0, Arc::clone(&th34w2), &[&co.1, &a.0, &b.0, &ci.0], &s.0);
                out.add_gate(&s.1, Arc::clone(&th34w2), &[&co.0, &a.1, &b.1, &ci.1], &s.1);
            }
        }
    }
    for (k, o) in outs.iter().enumerate() {
        let r = rails(o);
        out.add_output(&format!("p{k}"), &r.0, &r.1);
    }
    out.ensure_valid()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{eval_data, word_value};

    fn product_of(n: &Netlist, width: usize, a: u64, b: u64) -> u64 {
        let ins: Vec<bool> = (0..2 * width)
            .map(|i| ((a | (b << width)) >> i) & 1 == 1)
            .collect();
        word_value(&eval_data(n, &ins).unwrap()).unwrap()
    }

    #[test]
    fn cell_counts() {
        for w in 2..=6 {
            let (cells, outs) = braun_cells(w);
            let and = cells.iter().filter(|c| matches!(c, Cell::And { .. })).count();
            let half = cells.iter().filter(|c| matches!(c, Cell::Half { .. })).count();
            let full = cells.iter().filter(|c| matches!(c, Cell::Full { .. })).count();
            assert_eq!((and, half, full), (w * w, w, w * (w - 2)), "width {w}");
            assert_eq!(outs.len(), 2 * w);
        }
    }

    #[test]
    fn boolean_array_multiplies() {
        for w in 2..=5 {
            let m = array_multiplier_boolean(w).unwrap();
            for a in 0..1u64 << w {
                for b in 0..1u64 << w {
                    assert_eq!(m.eval_word(a | (b << w)), a * b, "w={w} {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn both_styles_exhaustive_width4() {
        for style in [AdderStyle::BooleanCells, AdderStyle::ThresholdGates] {
            let n = build_array_multiplier_with(4, style, GateCatalog::builtin()).unwrap();
            for a in 0..16 {
                for b in 0..16 {
                    assert_eq!(product_of(&n, 4, a, b), a * b, "{style:?} {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn width_guard() {
        assert_eq!(build_array_multiplier(1).unwrap_err(), SynthError::Width(1));
        assert_eq!(build_array_multiplier(9).unwrap_err(), SynthError::Width(9));
    }

    #[test]
    fn port_names() {
        let n = build_array_multiplier(3).unwrap();
        let ins: Vec<&str> = n.inputs().iter().map(|p| p.name.as_str()).collect();
        assert_eq!(ins, ["a0", "a1", "a2", "b0", "b1", "b2"]);
        let outs: Vec<&str> = n.outputs().iter().map(|p| p.name.as_str()).collect();
        assert_eq!(outs, ["p0", "p1", "p2", "p3", "p4", "p5"]);
    }
}
