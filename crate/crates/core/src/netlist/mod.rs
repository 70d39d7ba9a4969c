// SPDX-License-Identifier: Apache-2.0

//! Combinational NCL netlists over single-rail nets with dual-rail ports.

mod check;
mod dual_rail;
mod settle;
pub(crate) mod text;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::NetlistError;
use crate::gate::GateSpec;

pub use check::{
    check_input_completeness, check_input_completeness_with, check_observability,
    check_observability_with, CheckMode, CompletenessViolation, Direction,
    ObservabilityViolation, EXHAUSTIVE_INPUT_LIMIT,
};
pub use dual_rail::{word_value, DualRail};
pub use settle::{eval_data, settle, settle_frozen, WavefrontState};
pub use text::{parse_netlist, parse_netlist_with};

pub type NetId = usize;
pub type GateId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateInst {
    pub name: String,
    pub spec: Arc<GateSpec>,
    pub inputs: Vec<NetId>,
    pub output: NetId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualRailPort {
    pub name: String,
    pub rail1: NetId,
    pub rail0: NetId,
}

/// Structural problems reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Defect {
    UndrivenNet { net: String },
    MultipleDrivers { net: String, drivers: Vec<String> },
    CombinationalCycle { gates: Vec<String> },
    ArityMismatch { gate: String, expected: usize, got: usize },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::UndrivenNet { net } => write!(f, "undriven net `{net}`"),
            Defect::MultipleDrivers { net, drivers } => {
                write!(f, "net `{net}` has multiple drivers: {}", drivers.join(", "))
            }
            Defect::CombinationalCycle { gates } => {
                write!(f, "combinational cycle through {}", gates.join(" -> "))
            }
            Defect::ArityMismatch { gate, expected, got } => {
                write!(f, "gate `{gate}` expects {expected} inputs, has {got}")
            }
        }
    }
}

/// Directed acyclic graph of threshold gates. Nets are named single rails;
/// primary inputs and outputs are dual-rail pairs of nets.
#[derive(Clone, Debug, Default)]
pub struct Netlist {
    nets: Vec<String>,
    net_index: HashMap<String, NetId>,
    gates: Vec<GateInst>,
    inputs: Vec<DualRailPort>,
    outputs: Vec<DualRailPort>,
    topo: OnceLock<Result<Vec<GateId>, Vec<GateId>>>,
}

impl PartialEq for Netlist {
    fn eq(&self, other: &Self) -> bool {
        self.nets == other.nets
            && self.gates == other.gates
            && self.inputs == other.inputs
            && self.outputs == other.outputs
    }
}

impl Eq for Netlist {}

impl Netlist {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, creating the net if needed.
    pub fn net(&mut self, name: &str) -> NetId {
        if let Some(&id) = self.net_index.get(name) {
            return id;
        }
        let id = self.nets.len();
        self.nets.push(name.to_string());
        self.net_index.insert(name.to_string(), id);
        id
    }

    pub fn find_net(&self, name: &str) -> Option<NetId> {
        self.net_index.get(name).copied()
    }

    pub fn net_name(&self, id: NetId) -> &str {
        &self.nets[id]
    }

    pub fn net_count(&self) -> usize {
        self.nets.len()
    }

    pub fn add_input(&mut self, name: &str, rail1: &str, rail0: &str) {
        let (r1, r0) = (self.net(rail1), self.net(rail0));
        self.inputs.push(DualRailPort {
            name: name.to_string(),
            rail1: r1,
            rail0: r0,
        });
        self.topo = OnceLock::new();
    }

    pub fn add_output(&mut self, name: &str, rail1: &str, rail0: &str) {
        let (r1, r0) = (self.net(rail1), self.net(rail0));
        self.outputs.push(DualRailPort {
            name: name.to_string(),
            rail1: r1,
            rail0: r0,
        });
    }

    /// Adds a gate instance. Arity is not checked here; see [`validate`].
    pub fn add_gate(
        &mut self,
        name: &str,
        spec: Arc<GateSpec>,
        inputs: &[&str],
        output: &str,
    ) -> GateId {
        let ins = inputs.iter().map(|n| self.net(n)).collect();
        let out = self.net(output);
        self.gates.push(GateInst {
            name: name.to_string(),
            spec,
            inputs: ins,
            output: out,
        });
        self.topo = OnceLock::new();
        self.gates.len() - 1
    }

    pub fn gates(&self) -> &[GateInst] {
        &self.gates
    }

    pub fn inputs(&self) -> &[DualRailPort] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[DualRailPort] {
        &self.outputs
    }

    pub fn find_gate(&self, name: &str) -> Option<GateId> {
        self.gates.iter().position(|g| g.name == name)
    }

    /// Gate ids in topological order, or the gates left on a cycle.
    pub fn topo_order(&self) -> Result<&[GateId], &[GateId]> {
        match self.topo.get_or_init(|| self.compute_topo()) {
            Ok(v) => Ok(v),
            Err(c) => Err(c),
        }
    }

    fn compute_topo(&self) -> Result<Vec<GateId>, Vec<GateId>> {
        let mut driver: Vec<Option<GateId>> = vec![None; self.nets.len()];
        for (g, inst) in self.gates.iter().enumerate() {
            driver[inst.output].get_or_insert(g);
        }
        let mut indeg = vec![0usize; self.gates.len()];
        let mut fanout: Vec<Vec<GateId>> = vec![Vec::new(); self.gates.len()];
        for (g, inst) in self.gates.iter().enumerate() {
            for &n in &inst.inputs {
                if let Some(d) = driver[n] {
                    indeg[g] += 1;
                    fanout[d].push(g);
                }
            }
        }
        let mut ready: std::collections::VecDeque<GateId> =
            (0..self.gates.len()).filter(|&g| indeg[g] == 0).collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(g) = ready.pop_front() {
            order.push(g);
            for &h in &fanout[g] {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.push_back(h);
                }
            }
        }
        if order.len() == self.gates.len() {
            Ok(order)
        } else {
            Err((0..self.gates.len()).filter(|&g| indeg[g] > 0).collect())
        }
    }

    /// Gates reading each net.
    pub fn fanout(&self) -> Vec<Vec<GateId>> {
        let mut f = vec![Vec::new(); self.nets.len()];
        for (g, inst) in self.gates.iter().enumerate() {
            for &n in &inst.inputs {
                f[n].push(g);
            }
        }
        f
    }

    /// The gate driving each net, if any.
    pub fn drivers(&self) -> Vec<Option<GateId>> {
        let mut d = vec![None; self.nets.len()];
        for (g, inst) in self.gates.iter().enumerate() {
            d[inst.output] = Some(g);
        }
        d
    }

    /// Longest gate path to each net (primary inputs at depth 0).
    pub fn depths(&self) -> Result<Vec<usize>, NetlistError> {
        let order = self.topo_order().map_err(|_| {
            NetlistError::Invalid("combinational cycle".into())
        })?;
        let mut depth = vec![0usize; self.nets.len()];
        for &g in order {
            let inst = &self.gates[g];
            let d = inst.inputs.iter().map(|&n| depth[n]).max().unwrap_or(0) + 1;
            depth[inst.output] = d;
        }
        Ok(depth)
    }

    /// Errors unless [`validate`] finds nothing.
    pub fn ensure_valid(&self) -> Result<(), NetlistError> {
        let defects = validate(self);
        if defects.is_empty() {
            Ok(())
        } else {
            let text: Vec<String> = defects.iter().map(ToString::to_string).collect();
            Err(NetlistError::Invalid(text.join("; ")))
        }
    }

    pub fn input_rail_count(&self) -> usize {
        2 * self.inputs.len()
    }
}

/// Every violated structural invariant, one record each. Empty means valid.
pub fn validate(netlist: &Netlist) -> Vec<Defect> {
    let mut defects = Vec::new();
    let mut drivers: Vec<Vec<String>> = vec![Vec::new(); netlist.nets.len()];
    for p in &netlist.inputs {
        for r in [p.rail1, p.rail0] {
            drivers[r].push(format!("input {}", p.name));
        }
    }
    for g in &netlist.gates {
        drivers[g.output].push(format!("gate {}", g.name));
        if g.inputs.len() != g.spec.arity() {
            defects.push(Defect::ArityMismatch {
                gate: g.name.clone(),
                expected: g.spec.arity(),
                got: g.inputs.len(),
            });
        }
    }
    for (n, d) in drivers.into_iter().enumerate() {
        match d.len() {
            0 => defects.push(Defect::UndrivenNet {
                net: netlist.nets[n].clone(),
            }),
            1 => {}
            _ => defects.push(Defect::MultipleDrivers {
                net: netlist.nets[n].clone(),
                drivers: d,
            }),
        }
    }
    if let Err(cyc) = netlist.topo_order() {
        defects.push(Defect::CombinationalCycle {
            gates: cyc.iter().map(|&g| netlist.gates[g].name.clone()).collect(),
        });
    }
    defects
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::gate::spec_from_name;

    pub fn spec(name: &str) -> Arc<GateSpec> {
        Arc::new(spec_from_name(name).unwrap())
    }

    /// Input-complete dual-rail AND.
    pub fn and_complete() -> Netlist {
        let mut n = Netlist::new();
        n.add_input("A", "A1", "A0");
        n.add_input("B", "B1", "B0");
        n.add_output("Z", "Z1", "Z0");
        n.add_gate("g1", spec("TH22"), &["A1", "B1"], "Z1");
        n.add_gate("g0", spec("THand0"), &["A0", "B0", "A1", "B1"], "Z0");
        n
    }

    /// AND whose rail0 uses TH12, so DATA0 on one input completes the output.
    pub fn and_relaxed() -> Netlist {
        let mut n = Netlist::new();
        n.add_input("A", "A1", "A0");
        n.add_input("B", "B1", "B0");
        n.add_output("Z", "Z1", "Z0");
        n.add_gate("g1", spec("TH22"), &["A1", "B1"], "Z1");
        n.add_gate("g0", spec("TH12"), &["A0", "B0"], "Z0");
        n
    }
}
