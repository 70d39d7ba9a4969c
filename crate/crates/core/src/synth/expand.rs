// SPDX-License-Identifier: Apache-2.0

//! Boolean to dual-rail expansion.
//!
//! Each Boolean net `n` becomes rails `n.1` / `n.0`. Templates, with `X1`
//! and `X0` the rails of input `X`:
//!
//! | kind | rail1                          | rail0                          |
//! |------|--------------------------------|--------------------------------|
//! | AND2 | TH22(A1, B1)                   | THand0(A0, B0, A1, B1)         |
//! | OR2  | THand0(A1, B1, A0, B0)         | TH22(A0, B0)                   |
//! | XOR2 | TH24comp(A1, B1, A0, B0)       | TH24comp(A1, B0, A0, B1)       |
//! | INV  | A0 (rail swap, no gates)       | A1                             |
//! | BUF  | A1 (alias)                     | A0                             |
//!
//! NAND2, NOR2 and XNOR2 use the AND2, OR2 and XOR2 templates with the
//! output rails exchanged.

use std::sync::Arc;

use super::boolnet::{BoolKind, BoolNetlist};
use crate::error::SynthError;
use crate::gate::{GateCatalog, GateSpec};
use crate::netlist::Netlist;

pub(crate) struct Specs {
    pub th22: Arc<GateSpec>,
    pub thand0: Arc<GateSpec>,
    pub th24comp: Arc<GateSpec>,
}

impl Specs {
    pub fn load(cat: &GateCatalog) -> Result<Self, SynthError> {
        Ok(Self {
            th22: Arc::new(cat.spec("TH22")?),
            thand0: Arc::new(cat.spec("THand0")?),
            th24comp: Arc::new(cat.spec("TH24comp")?),
        })
    }
}

/// Rail net names of one Boolean net: `(rail1, rail0)`.
type Rails = (String, String);

/// Emits the template for a two-input kind; returns the output rails.
pub(crate) fn emit2(
    out: &mut Netlist,
    specs: &Specs,
    kind: BoolKind,
    a: &Rails,
    b: &Rails,
    z: &str,
) -> Rails {
    let (t, f) = (format!("{z}.1"), format!("{z}.0"));
    // Inverted kinds reuse the base template with rail names exchanged.
    let (base, hi, lo) = match kind {
        BoolKind::And2 => (BoolKind::And2, &t, &f),
        BoolKind::Nand2 => (BoolKind::And2, &f, &t),
        BoolKind::Or2 => (BoolKind::Or2, &t, &f),
        BoolKind::Nor2 => (BoolKind::Or2, &f, &t),
        BoolKind::Xor2 => (BoolKind::Xor2, &t, &f),
        BoolKind::Xnor2 => (BoolKind::Xor2, &f, &t),
        BoolKind::Inv | BoolKind::Buf => unreachable!("single-input kinds have no gates"),
    };
    let (a1, a0, b1, b0) = (a.0.as_str(), a.1.as_str(), b.0.as_str(), b.1.as_str());
    match base {
        BoolKind::And2 => {
            out.add_gate(hi, Arc::clone(&specs.th22), &[a1, b1], hi);
            out.add_gate(lo, Arc::clone(&specs.thand0), &[a0, b0, a1, b1], lo);
        }
        BoolKind::Or2 => {
            out.add_gate(hi, Arc::clone(&specs.thand0), &[a1, b1, a0, b0], hi);
            out.add_gate(lo, Arc::clone(&specs.th22), &[a0, b0], lo);
        }
        _ => {
            out.add_gate(hi, Arc::clone(&specs.th24comp), &[a1, b1, a0, b0], hi);
            out.add_gate(lo, Arc::clone(&specs.th24comp), &[a1, b0, a0, b1], lo);
        }
    }
    (t, f)
}

pub fn expand_dual_rail(bool_net: &BoolNetlist) -> Result<Netlist, SynthError> {
    expand_dual_rail_with(bool_net, GateCatalog::builtin())
}

pub fn expand_dual_rail_with(bool_net: &BoolNetlist, cat: &GateCatalog) -> Result<Netlist, SynthError> {
    let specs = Specs::load(cat)?;
    let mut out = Netlist::new();
    let mut rails: Vec<Option<Rails>> = vec![None; bool_net.net_names().len()];
    for &i in bool_net.inputs() {
        let name = bool_net.net_name(i);
        let r = (format!("{name}.1"), format!("{name}.0"));
        out.add_input(name, &r.0, &r.1);
        rails[i] = Some(r);
    }
    for &g in bool_net.topo_order() {
        let gate = &bool_net.gates()[g];
        let a = rails[gate.inputs[0]].clone().expect("topological order");
        let z = match gate.kind {
            BoolKind::Inv => (a.1, a.0),
            BoolKind::Buf => a,
            kind => {
                let b = rails[gate.inputs[1]].clone().expect("topological order");
                emit2(&mut out, &specs, kind, &a, &b, bool_net.net_name(gate.output))
            }
        };
        rails[gate.output] = Some(z);
    }
    for &o in bool_net.outputs() {
        let r = rails[o].as_ref().expect("outputs are driven");
        out.add_output(bool_net.net_name(o), &r.0, &r.1);
    }
    out.ensure_valid()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::boolnet::parse_boolean_netlist;
    use super::*;
    use crate::netlist::{check_input_completeness, check_observability, eval_data, DualRail};

    fn expand(text: &str) -> Netlist {
        expand_dual_rail(&parse_boolean_netlist(text).unwrap()).unwrap()
    }

    #[test]
    fn templates_match_boolean_and_are_di() {
        for k in BoolKind::ALL.into_iter().filter(|k| k.arity() == 2) {
            let n = expand(&format!("{k} a b -> z"));
            assert_eq!(n.gates().len(), 2, "{k}");
            for w in 0..4u8 {
                let (a, b) = (w & 1 == 1, w & 2 == 2);
                assert_eq!(eval_data(&n, &[a, b]).unwrap(), vec![DualRail::data(k.eval(a, b))], "{k} {a} {b}");
            }
            assert_eq!(check_input_completeness(&n).unwrap(), vec![], "{k}");
            assert_eq!(check_observability(&n).unwrap(), vec![], "{k}");
        }
    }

    #[test]
    fn xor_rail1_asserts_on_mixed_inputs_only() {
        let n = expand("XOR2 a b -> z");
        for w in 0..4u8 {
            let (a, b) = (w & 1 == 1, w & 2 == 2);
            let out = eval_data(&n, &[a, b]).unwrap()[0];
            assert_eq!(out.rails().0, a != b);
        }
    }

    #[test]
    fn inverter_chain_is_rail_permutation() {
        for k in 1..6 {
            let mut text = String::from("input x0\n");
            for i in 0..k {
                text += &format!("INV x{i} -> x{}\n", i + 1);
            }
            let n = expand(&text);
            assert_eq!(n.gates().len(), 0);
            let z = &n.outputs()[0];
            let expect = if k % 2 == 1 { ("x0.0", "x0.1") } else { ("x0.1", "x0.0") };
            assert_eq!((n.net_name(z.rail1), n.net_name(z.rail0)), expect);
        }
    }

    #[test]
    fn deterministic_text() {
        let src = "AND2 a b -> t\nXOR2 t c -> s\nNOR2 s a -> q\n";
        assert_eq!(expand(src).to_text(), expand(src).to_text());
    }
}
