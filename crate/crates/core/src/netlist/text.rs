// SPDX-License-Identifier: Apache-2.0

//! Line-oriented netlist format.
//!
//! ```text
//! # comment
//! input  A A1 A0          # port, rail1 net, rail0 net
//! output Z Z1 Z0
//! gate   g1 TH22 A1 B1 -> Z1
//! ```
//!
//! Gate types resolve through a [`GateCatalog`] (catalog names, then the
//! `THmn` grammar). [`Netlist::to_text`] writes inputs, outputs, then gates
//! in construction order, so `to_text(parse(to_text(n)))` is byte-identical.

use std::fmt::Write as _;
use std::sync::Arc;

use super::Netlist;
use crate::error::{NetlistError, ParseError};
use crate::gate::GateCatalog;

/// Whitespace-separated tokens with their 1-based columns, comments removed.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_netlist(text: &str) -> Result<Netlist, NetlistError> {
    parse_netlist_with(text, "<netlist>", GateCatalog::builtin())
}

pub fn parse_netlist_with(
    text: &str,
    source_name: &str,
    catalog: &GateCatalog,
) -> Result<Netlist, NetlistError> {
    let mut n = Netlist::new();
    let mut specs = std::collections::HashMap::new();
    let mut gate_names = std::collections::HashSet::new();
    for (ln, line) in text.lines().enumerate() {
        let toks = tokens(line);
        let Some(&(col, kw)) = toks.first() else {
            continue;
        };
        let err = |c: usize, m: String| ParseError::new(source_name, ln + 1, c, m);
        match kw {
            "input" | "output" => {
                if toks.len() != 4 {
                    return Err(err(col, format!("`{kw}` takes a port name and two rail nets")).into());
                }
                let (name, r1, r0) = (toks[1].1, toks[2].1, toks[3].1);
                if r1 == r0 {
                    return Err(err(toks[3].0, "rails of one port must differ".into()).into());
                }
                if kw == "input" {
                    n.add_input(name, r1, r0);
                } else {
                    n.add_output(name, r1, r0);
                }
            }
            "gate" => {
                let arrow = toks.iter().position(|t| t.1 == "->");
                let Some(arrow) = arrow else {
                    return Err(err(col, "expected `->` before the output net".into()).into());
                };
                if arrow < 3 || arrow + 2 != toks.len() {
                    return Err(err(
                        col,
                        "expected `gate NAME TYPE IN... -> OUT`".into(),
                    )
                    .into());
                }
                let (name, ty) = (toks[1].1, toks[2]);
                if !gate_names.insert(name.to_string()) {
                    return Err(err(toks[1].0, format!("duplicate gate name `{name}`")).into());
                }
                let spec = match specs.get(ty.1) {
                    Some(s) => Arc::clone(s),
                    None => {
                        let s = Arc::new(
                            catalog
                                .spec(ty.1)
                                .map_err(|e| err(ty.0, e.to_string()))?,
                        );
                        specs.insert(ty.1.to_string(), Arc::clone(&s));
                        s
                    }
                };
                let ins: Vec<&str> = toks[3..arrow].iter().map(|t| t.1).collect();
                if ins.len() != spec.arity() {
                    return Err(err(
                        toks[3].0,
                        format!("{} expects {} inputs, got {}", ty.1, spec.arity(), ins.len()),
                    )
                    .into());
                }
                n.add_gate(name, spec, &ins, toks[arrow + 1].1);
            }
            other => {
                return Err(err(col, format!("unknown directive `{other}`")).into());
            }
        }
    }
    Ok(n)
}

impl Netlist {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in self.inputs() {
            let _ = writeln!(s, "input {} {} {}", p.name, self.net_name(p.rail1), self.net_name(p.rail0));
        }
        for p in self.outputs() {
            let _ = writeln!(s, "output {} {} {}", p.name, self.net_name(p.rail1), self.net_name(p.rail0));
        }
        for g in self.gates() {
            let _ = write!(s, "gate {} {}", g.name, g.spec.name);
            for &i in &g.inputs {
                let _ = write!(s, " {}", self.net_name(i));
            }
            let _ = writeln!(s, " -> {}", self.net_name(g.output));
        }
        s
    }
}
