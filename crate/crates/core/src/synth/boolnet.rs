// SPDX-License-Identifier: Apache-2.0

//! Single-rail Boolean netlists.
//!
//! ```text
//! input a b cin        # optional; inferred from undriven nets if absent
//! output s cout        # optional; inferred from unread driven nets if absent
//! XOR2 a b -> t
//! XOR2 t cin -> s
//! ```
//!
//! Gate kinds: AND2 OR2 XOR2 NAND2 NOR2 XNOR2 INV BUF.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{ParseError, SynthError};
use crate::netlist::text::tokens;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolKind {
    And2,
    Or2,
    Xor2,
    Nand2,
    Nor2,
    Xnor2,
    Inv,
    Buf,
}

impl BoolKind {
    pub const ALL: [BoolKind; 8] = [
        BoolKind::And2,
        BoolKind::Or2,
        BoolKind::Xor2,
        BoolKind::Nand2,
        BoolKind::Nor2,
        BoolKind::Xnor2,
        BoolKind::Inv,
        BoolKind::Buf,
    ];

    pub fn arity(self) -> usize {
        match self {
            BoolKind::Inv | BoolKind::Buf => 1,
            _ => 2,
        }
    }

    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BoolKind::And2 => a && b,
            BoolKind::Or2 => a || b,
            BoolKind::Xor2 => a ^ b,
            BoolKind::Nand2 => !(a && b),
            BoolKind::Nor2 => !(a || b),
            BoolKind::Xnor2 => !(a ^ b),
            BoolKind::Inv => !a,
            BoolKind::Buf => a,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoolKind::And2 => "AND2",
            BoolKind::Or2 => "OR2",
            BoolKind::Xor2 => "XOR2",
            BoolKind::Nand2 => "NAND2",
            BoolKind::Nor2 => "NOR2",
            BoolKind::Xnor2 => "XNOR2",
            BoolKind::Inv => "INV",
            BoolKind::Buf => "BUF",
        }
    }
}

impl fmt::Display for BoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoolKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        BoolKind::ALL.into_iter().find(|k| k.name() == s).ok_or(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolGate {
    pub kind: BoolKind,
    pub inputs: Vec<usize>,
    pub output: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoolNetlist {
    nets: Vec<String>,
    index: HashMap<String, usize>,
    gates: Vec<BoolGate>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    order: Vec<usize>,
}

impl BoolNetlist {
    pub fn net_names(&self) -> &[String] {
        &self.nets
    }

    pub fn net_name(&self, id: usize) -> &str {
        &self.nets[id]
    }

    pub fn gates(&self) -> &[BoolGate] {
        &self.gates
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Gate indices in topological order.
    pub fn topo_order(&self) -> &[usize] {
        &self.order
    }

    /// Evaluates every output for one assignment of the primary inputs.
    pub fn eval(&self, inputs: &[bool]) -> Vec<bool> {
        let mut v = vec![false; self.nets.len()];
        for (&n, &b) in self.inputs.iter().zip(inputs) {
            v[n] = b;
        }
        for &g in &self.order {
            let gate = &self.gates[g];
            let a = v[gate.inputs[0]];
            let b = gate.inputs.get(1).map(|&n| v[n]).unwrap_or(false);
            v[gate.output] = gate.kind.eval(a, b);
        }
        self.outputs.iter().map(|&n| v[n]).collect()
    }

    /// Evaluates with input `i` taken from bit `i` of `word`; outputs packed LSB first.
    pub fn eval_word(&self, word: u64) -> u64 {
        let ins: Vec<bool> = (0..self.inputs.len()).map(|i| (word >> i) & 1 == 1).collect();
        self.eval(&ins)
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let names = |ids: &[usize]| ids.iter().map(|&i| self.nets[i].as_str()).collect::<Vec<_>>().join(" ");
        if !self.inputs.is_empty() {
            let _ = writeln!(s, "input {}", names(&self.inputs));
        }
        if !self.outputs.is_empty() {
            let _ = writeln!(s, "output {}", names(&self.outputs));
        }
        for g in &self.gates {
            let _ = writeln!(s, "{} {} -> {}", g.kind, names(&g.inputs), self.nets[g.output]);
        }
        s
    }
}

/// Incremental builder used by the parser and the generators.
#[derive(Default)]
pub struct BoolBuilder {
    n: BoolNetlist,
    driver: Vec<Option<usize>>,
    declared_inputs: bool,
    declared_outputs: bool,
}

impl BoolBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn net(&mut self, name: &str) -> usize {
        if let Some(&i) = self.n.index.get(name) {
            return i;
        }
        let i = self.n.nets.len();
        self.n.nets.push(name.to_string());
        self.n.index.insert(name.to_string(), i);
        self.driver.push(None);
        i
    }

    pub fn input(&mut self, name: &str) -> Result<usize, SynthError> {
        let i = self.net(name);
        if self.driver[i].is_some() || self.n.inputs.contains(&i) {
            return Err(SynthError::DuplicateDriver(name.to_string()));
        }
        self.n.inputs.push(i);
        self.declared_inputs = true;
        Ok(i)
    }

    pub fn output(&mut self, name: &str) -> usize {
        let i = self.net(name);
        self.n.outputs.push(i);
        self.declared_outputs = true;
        i
    }

    pub fn gate(&mut self, kind: BoolKind, inputs: &[&str], output: &str) -> Result<usize, SynthError> {
        let ins: Vec<usize> = inputs.iter().map(|s| self.net(s)).collect();
        let out = self.net(output);
        if self.driver[out].is_some() || self.n.inputs.contains(&out) {
            return Err(SynthError::DuplicateDriver(output.to_string()));
        }
        self.driver[out] = Some(self.n.gates.len());
        self.n.gates.push(BoolGate {
            kind,
            inputs: ins,
            output: out,
        });
        Ok(out)
    }

    pub fn finish(mut self) -> Result<BoolNetlist, SynthError> {
        let n_nets = self.n.nets.len();
        let is_input: Vec<bool> = {
            let mut v = vec![false; n_nets];
            for &i in &self.n.inputs {
                v[i] = true;
            }
            v
        };
        let mut read = vec![false; n_nets];
        for g in &self.n.gates {
            for &i in &g.inputs {
                read[i] = true;
            }
        }
        for &o in &self.n.outputs {
            read[o] = true;
        }
        for id in 0..n_nets {
            if self.driver[id].is_none() && !is_input[id] {
                if self.declared_inputs {
                    return Err(SynthError::UndeclaredNet(self.n.nets[id].clone()));
                }
                self.n.inputs.push(id);
            }
        }
        if !self.declared_outputs {
            self.n.outputs = self
                .n
                .gates
                .iter()
                .map(|g| g.output)
                .filter(|&o| !read[o])
                .collect();
        }
        // Kahn's algorithm in gate order keeps the result deterministic.
        let mut indeg = vec![0usize; self.n.gates.len()];
        let mut fanout = vec![Vec::new(); self.n.gates.len()];
        for (g, gate) in self.n.gates.iter().enumerate() {
            for &i in &gate.inputs {
                if let Some(d) = self.driver[i] {
                    indeg[g] += 1;
                    fanout[d].push(g);
                }
            }
        }
        let mut ready: std::collections::VecDeque<usize> =
            (0..indeg.len()).filter(|&g| indeg[g] == 0).collect();
        let mut order = Vec::new();
        while let Some(g) = ready.pop_front() {
            order.push(g);
            for &h in &fanout[g] {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.push_back(h);
                }
            }
        }
        if order.len() != self.n.gates.len() {
            let g = (0..indeg.len()).find(|&g| indeg[g] > 0).unwrap();
            return Err(SynthError::Cycle(self.n.nets[self.n.gates[g].output].clone()));
        }
        self.n.order = order;
        Ok(self.n)
    }
}

pub fn parse_boolean_netlist(text: &str) -> Result<BoolNetlist, SynthError> {
    parse_boolean_netlist_named(text, "<bool>")
}

pub fn parse_boolean_netlist_named(text: &str, source_name: &str) -> Result<BoolNetlist, SynthError> {
    let mut b = BoolBuilder::new();
    for (ln, line) in text.lines().enumerate() {
        let toks = tokens(line);
        let Some(&(col, kw)) = toks.first() else {
            continue;
        };
        let err = |c: usize, m: String| SynthError::Parse(ParseError::new(source_name, ln + 1, c, m));
        match kw {
            "input" => {
                for &(c, name) in &toks[1..] {
                    b.input(name).map_err(|e| err(c, e.to_string()))?;
                }
            }
            "output" => {
                for &(_, name) in &toks[1..] {
                    b.output(name);
                }
            }
            _ => {
                let kind: BoolKind = kw
                    .parse()
                    .map_err(|_| err(col, format!("unsupported gate kind `{kw}`")))?;
                let arity = kind.arity();
                if toks.len() != arity + 3 || toks[arity + 1].1 != "->" {
                    return Err(err(col, format!("expected `{kw}` with {arity} input(s), `->`, output")));
                }
                let ins: Vec<&str> = toks[1..=arity].iter().map(|t| t.1).collect();
                let (oc, out) = toks[arity + 2];
                b.gate(kind, &ins, out).map_err(|e| match e {
                    SynthError::DuplicateDriver(n) => {
                        err(oc, format!("duplicate driver for net `{n}`"))
                    }
                    other => other,
                })?;
            }
        }
    }
    b.finish()
}
