// SPDX-License-Identifier: Apache-2.0

//! Gate-level NCL pipelines.
//!
//! `build_pipeline(cl, n)` produces banks `0..=n`: stage `k` is input bank
//! `k` followed by a copy of `cl`, and bank `n` registers the last stage's
//! outputs.
//!
//! ```text
//! producer -> bank0 -> C/L -> bank1 -> C/L -> ... -> bank n -> consumer
//!              ^  ko1 |        ^  ko2 |                 ^ ki_env
//!              +------+        +------+
//! ```
//!
//! Register rail: `out = TH22(in, Ki)`. Completion: TH12 per bit over the
//! bank's output rails, a tree of TH44/TH33/TH22 C-elements, then an
//! inverter giving `Ko` (1 requests DATA, 0 requests NULL). Bank `k` takes
//! `Ki` from bank `k+1`'s `Ko`; the last bank takes it from the consumer.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::SimError;
use crate::gate::{GateCatalog, GateSpec};
use crate::netlist::{Netlist, NetId};

pub type CellId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NetClass {
    /// Rails driven by the producer.
    Source,
    /// Register outputs of a bank.
    Register,
    /// Nets inside a stage's C/L.
    Logic,
    /// Completion tree nets.
    Completion,
    /// Ko / Ki handshake nets.
    Handshake,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CellKind {
    Threshold(Arc<GateSpec>),
    Inverter,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub name: String,
    pub kind: CellKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
    pub class: NetClass,
    /// Stage index for logic cells, bank index otherwise.
    pub group: usize,
    /// Index of the gate in the stage's C/L netlist, for logic cells.
    pub cl_gate: Option<usize>,
}

impl Cell {
    pub fn type_name(&self) -> &str {
        match &self.kind {
            CellKind::Threshold(s) => &s.name,
            CellKind::Inverter => "INV",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RailPair {
    pub name: String,
    pub rail1: NetId,
    pub rail0: NetId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bank {
    pub name: String,
    pub inputs: Vec<RailPair>,
    pub outputs: Vec<RailPair>,
    pub ki: NetId,
    pub ko: NetId,
    pub registers: Vec<CellId>,
    pub completion: Vec<CellId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub bank: usize,
    /// Ports of the stage's C/L, mapped into system nets.
    pub cl_inputs: Vec<RailPair>,
    pub cl_outputs: Vec<RailPair>,
    /// System cell id of each C/L gate, by netlist gate index.
    pub cl_cells: Vec<CellId>,
}

/// A flat gate-level pipeline.
#[derive(Clone, Debug)]
pub struct PipelineSystem {
    pub(crate) nets: Vec<String>,
    pub(crate) net_class: Vec<NetClass>,
    pub(crate) cells: Vec<Cell>,
    pub(crate) fanout: Vec<Vec<CellId>>,
    pub(crate) banks: Vec<Bank>,
    pub(crate) stages: Vec<Stage>,
    pub(crate) cl: Netlist,
    /// Dual-rail partner of each rail on a bank boundary.
    pub(crate) partner: Vec<Option<NetId>>,
}

impl PipelineSystem {
    pub fn nets(&self) -> &[String] {
        &self.nets
    }

    pub fn net_class(&self, n: NetId) -> NetClass {
        self.net_class[n]
    }

    pub fn find_net(&self, name: &str) -> Option<NetId> {
        self.nets.iter().position(|n| n == name)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn banks(&self) -> &[Bank] {
        &self.banks
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn cl(&self) -> &Netlist {
        &self.cl
    }

    pub fn input_width(&self) -> usize {
        self.banks[0].inputs.len()
    }

    pub fn output_width(&self) -> usize {
        self.banks.last().expect("at least one bank").outputs.len()
    }

    /// Number of cells reading net `n`.
    pub fn fanout_of(&self, n: NetId) -> usize {
        self.fanout[n].len()
    }

    pub fn count_cells(&self, class: NetClass, type_name: &str) -> usize {
        self.cells
            .iter()
            .filter(|c| c.class == class && c.type_name() == type_name)
            .count()
    }
}

struct Builder {
    nets: Vec<String>,
    index: HashMap<String, NetId>,
    class: Vec<NetClass>,
    cells: Vec<Cell>,
}

impl Builder {
    fn net(&mut self, name: String, class: NetClass) -> NetId {
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.nets.len();
        self.index.insert(name.clone(), i);
        self.nets.push(name);
        self.class.push(class);
        i
    }

    fn cell(&mut self, name: String, kind: CellKind, inputs: Vec<NetId>, output: NetId, class: NetClass, group: usize) -> CellId {
        self.cells.push(Cell {
            name,
            kind,
            inputs,
            output,
            class,
            group,
            cl_gate: None,
        });
        self.cells.len() - 1
    }
}

/// Groups `signals` into C-element levels until one remains.
fn completion_tree(
    b: &mut Builder,
    specs: &[Arc<GateSpec>; 3],
    mut signals: Vec<NetId>,
    bank: usize,
    cells: &mut Vec<CellId>,
) -> NetId {
    let mut level = 0;
    while signals.len() > 1 {
        let mut next = Vec::new();
        for (i, chunk) in signals.chunks(4).enumerate() {
            if chunk.len() == 1 {
                next.push(chunk[0]);
                continue;
            }
            let spec = Arc::clone(&specs[chunk.len() - 2]);
            let out = b.net(format!("cd{bank}/l{level}_{i}"), NetClass::Completion);
            let id = b.cell(
                format!("cd{bank}/c{level}_{i}"),
                CellKind::Threshold(spec),
                chunk.to_vec(),
                out,
                NetClass::Completion,
                bank,
            );
            cells.push(id);
            next.push(out);
        }
        signals = next;
        level += 1;
    }
    signals[0]
}

pub fn build_pipeline(cl: &Netlist, n_stages: usize) -> Result<PipelineSystem, SimError> {
    build_pipeline_with(cl, n_stages, GateCatalog::builtin())
}

pub fn build_pipeline_with(cl: &Netlist, n_stages: usize, cat: &GateCatalog) -> Result<PipelineSystem, SimError> {
    cl.ensure_valid()?;
    if n_stages == 0 {
        return Err(SimError::Build("at least one stage is required".into()));
    }
    if cl.inputs().is_empty() || cl.outputs().is_empty() {
        return Err(SimError::Build("C/L needs at least one input and one output".into()));
    }
    if n_stages > 1 && cl.inputs().len() != cl.outputs().len() {
        return Err(SimError::Build(format!(
            "chaining {n_stages} stages needs equal C/L input and output widths ({} vs {})",
            cl.inputs().len(),
            cl.outputs().len()
        )));
    }
    let get = |n: &str| cat.spec(n).map(Arc::new).map_err(|e| SimError::Build(e.to_string()));
    let th22 = get("TH22")?;
    let th12 = get("TH12")?;
    let tree = [get("TH22")?, get("TH33")?, get("TH44")?];
    let mut b = Builder {
        nets: Vec::new(),
        index: HashMap::new(),
        class: Vec::new(),
        cells: Vec::new(),
    };
    // Handshake nets first so their ids are stable.
    let ko: Vec<NetId> = (0..=n_stages).map(|k| b.net(format!("ko{k}"), NetClass::Handshake)).collect();
    let ki_env = b.net("ki_env".into(), NetClass::Handshake);

    let mut bank_inputs: Vec<RailPair> = cl
        .inputs()
        .iter()
        .map(|p| RailPair {
            name: p.name.clone(),
            rail1: b.net(format!("env/{}.1", p.name), NetClass::Source),
            rail0: b.net(format!("env/{}.0", p.name), NetClass::Source),
        })
        .collect();
    let mut banks = Vec::new();
    let mut stages = Vec::new();
    for k in 0..=n_stages {
        let ki = if k < n_stages { ko[k + 1] } else { ki_env };
        // Output rails of this bank: the next C/L's input nets, or the consumer side.
        let outputs: Vec<RailPair> = if k < n_stages {
            cl.inputs()
                .iter()
                .map(|p| RailPair {
                    name: p.name.clone(),
                    rail1: b.net(format!("s{k}/{}", cl.net_name(p.rail1)), NetClass::Register),
                    rail0: b.net(format!("s{k}/{}", cl.net_name(p.rail0)), NetClass::Register),
                })
                .collect()
        } else {
            cl.outputs()
                .iter()
                .map(|p| RailPair {
                    name: p.name.clone(),
                    rail1: b.net(format!("out/{}.1", p.name), NetClass::Register),
                    rail0: b.net(format!("out/{}.0", p.name), NetClass::Register),
                })
                .collect()
        };
        let mut registers = Vec::new();
        for (i, o) in bank_inputs.iter().zip(&outputs) {
            for (rin, rout, tag) in [(i.rail1, o.rail1, "1"), (i.rail0, o.rail0, "0")] {
                registers.push(b.cell(
                    format!("r{k}/{}.{tag}", o.name),
                    CellKind::Threshold(Arc::clone(&th22)),
                    vec![rin, ki],
                    rout,
                    NetClass::Register,
                    k,
                ));
            }
        }
        let mut completion = Vec::new();
        let mut bits = Vec::new();
        for o in &outputs {
            let n = b.net(format!("cd{k}/{}", o.name), NetClass::Completion);
            completion.push(b.cell(
                format!("cd{k}/or_{}", o.name),
                CellKind::Threshold(Arc::clone(&th12)),
                vec![o.rail1, o.rail0],
                n,
                NetClass::Completion,
                k,
            ));
            bits.push(n);
        }
        let root = completion_tree(&mut b, &tree, bits, k, &mut completion);
        completion.push(b.cell(format!("cd{k}/inv"), CellKind::Inverter, vec![root], ko[k], NetClass::Completion, k));
        banks.push(Bank {
            name: format!("bank{k}"),
            inputs: bank_inputs.clone(),
            outputs: outputs.clone(),
            ki,
            ko: ko[k],
            registers,
            completion,
        });
        if k == n_stages {
            break;
        }
        // Copy of the C/L for stage k.
        let map = |b: &mut Builder, net: NetId| {
            b.net(format!("s{k}/{}", cl.net_name(net)), NetClass::Logic)
        };
        let mut cl_cells = Vec::new();
        for (gi, g) in cl.gates().iter().enumerate() {
            let ins = g.inputs.iter().map(|&n| map(&mut b, n)).collect();
            let out = map(&mut b, g.output);
            let id = b.cell(
                format!("s{k}/{}", g.name),
                CellKind::Threshold(Arc::clone(&g.spec)),
                ins,
                out,
                NetClass::Logic,
                k,
            );
            b.cells[id].cl_gate = Some(gi);
            cl_cells.push(id);
        }
        let cl_outputs: Vec<RailPair> = cl
            .outputs()
            .iter()
            .map(|p| RailPair {
                name: p.name.clone(),
                rail1: map(&mut b, p.rail1),
                rail0: map(&mut b, p.rail0),
            })
            .collect();
        stages.push(Stage {
            bank: k,
            cl_inputs: outputs,
            cl_outputs: cl_outputs.clone(),
            cl_cells,
        });
        bank_inputs = cl_outputs;
    }

    let n_nets = b.nets.len();
    let mut fanout = vec![Vec::new(); n_nets];
    let mut driver = vec![None; n_nets];
    for (c, cell) in b.cells.iter().enumerate() {
        for &i in &cell.inputs {
            if !fanout[i].contains(&c) {
                fanout[i].push(c);
            }
        }
        if driver[cell.output].replace(c).is_some() {
            return Err(SimError::Build(format!("net `{}` has two drivers", b.nets[cell.output])));
        }
    }
    let mut partner = vec![None; n_nets];
    for bank in &banks {
        for p in bank.inputs.iter().chain(&bank.outputs) {
            partner[p.rail1] = Some(p.rail0);
            partner[p.rail0] = Some(p.rail1);
        }
    }
    Ok(PipelineSystem {
        nets: b.nets,
        net_class: b.class,
        cells: b.cells,
        fanout,
        banks,
        stages,
        cl: cl.clone(),
        partner,
    })
}
