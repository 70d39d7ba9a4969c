// SPDX-License-Identifier: Apache-2.0

//! Event-driven simulation with a zero-delay producer and consumer.
//!
//! Time is an integer count of femtoseconds. Events are ordered by time and
//! then by insertion sequence, so equal-time events run first-in first-out.
//! Gate outputs follow transport-delay semantics: a newly scheduled change
//! cancels any pending change of the same cell at the same or a later time.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::pipeline::{CellId, CellKind, NetClass, PipelineSystem};
use crate::error::SimError;
use crate::netlist::NetId;

pub const FS_PER_PS: f64 = 1000.0;

/// Rise and fall delay of every cell, in femtoseconds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelayAssignment {
    rise_fs: Vec<u64>,
    fall_fs: Vec<u64>,
}

fn ps_to_fs(ps: f64) -> Result<u64, SimError> {
    let fs = (ps * FS_PER_PS).round();
    if !(fs >= 1.0 && fs.is_finite()) {
        return Err(SimError::Delay(format!("delay {ps} ps is not positive")));
    }
    Ok(fs as u64)
}

impl DelayAssignment {
    pub fn uniform(sys: &PipelineSystem, ps: f64) -> Result<Self, SimError> {
        Self::from_fn(sys, |_, _| (ps, ps))
    }

    /// `f(cell id, cell)` returns `(rise_ps, fall_ps)`.
    pub fn from_fn(
        sys: &PipelineSystem,
        mut f: impl FnMut(CellId, &super::pipeline::Cell) -> (f64, f64),
    ) -> Result<Self, SimError> {
        let mut rise_fs = Vec::with_capacity(sys.cells.len());
        let mut fall_fs = Vec::with_capacity(sys.cells.len());
        for (i, c) in sys.cells.iter().enumerate() {
            let (r, fl) = f(i, c);
            rise_fs.push(ps_to_fs(r)?);
            fall_fs.push(ps_to_fs(fl)?);
        }
        Ok(Self { rise_fs, fall_fs })
    }

    pub fn len(&self) -> usize {
        self.rise_fs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rise_fs.is_empty()
    }

    pub fn set_ps(&mut self, cell: CellId, rise_ps: f64, fall_ps: f64) -> Result<(), SimError> {
        self.rise_fs[cell] = ps_to_fs(rise_ps)?;
        self.fall_fs[cell] = ps_to_fs(fall_ps)?;
        Ok(())
    }

    /// `(rise_ps, fall_ps)` of one cell.
    pub fn get_ps(&self, cell: CellId) -> (f64, f64) {
        (
            self.rise_fs[cell] as f64 / FS_PER_PS,
            self.fall_fs[cell] as f64 / FS_PER_PS,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub time_fs: u64,
    pub net: NetId,
    pub value: bool,
}

/// Environment timestamps of one DATA/NULL cycle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WavefrontMarks {
    /// Producer presents the DATA word.
    pub data_applied_fs: u64,
    /// Last output rail of the output bank reaches DATA.
    pub output_data_fs: u64,
    pub null_applied_fs: u64,
    /// Output bank returns to all-NULL.
    pub output_null_fs: u64,
    /// The consumed DATA word, LSB first.
    pub word: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trace {
    #[serde(skip)]
    pub net_names: Arc<[String]>,
    #[serde(skip)]
    pub net_class: Arc<[NetClass]>,
    /// First-stage C/L input rails.
    #[serde(skip)]
    pub cl_inputs: Arc<[NetId]>,
    /// Last-stage C/L output rails.
    #[serde(skip)]
    pub cl_outputs: Arc<[NetId]>,
    pub transitions: Vec<Transition>,
    pub wavefronts: Vec<WavefrontMarks>,
    pub recorded: bool,
    pub complete: bool,
    pub events: usize,
    pub end_time_fs: u64,
}

impl Trace {
    pub fn words(&self) -> Vec<u64> {
        self.wavefronts.iter().map(|w| w.word).collect()
    }

    /// `time_ps net value` lines; times in picoseconds with three decimals.
    pub fn to_table(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::from("# time_ps net value\n");
        for t in &self.transitions {
            let _ = writeln!(
                s,
                "{}.{:03} {} {}",
                t.time_fs / 1000,
                t.time_fs % 1000,
                self.net_names[t.net],
                t.value as u8
            );
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimOptions {
    /// Keep every net transition (needed by [`super::measure`]).
    pub record: bool,
    /// Maximum processed events; `None` picks a bound from the system size.
    pub event_budget: Option<usize>,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            record: true,
            event_budget: None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Null,
    Data,
}

const NO_CELL: u32 = u32::MAX;

struct Engine<'a> {
    sys: &'a PipelineSystem,
    delays: &'a DelayAssignment,
    values: Vec<bool>,
    projected: Vec<bool>,
    pending: Vec<VecDeque<(u64, u64, bool)>>,
    heap: BinaryHeap<Reverse<(u64, u64, u32, bool, u32)>>,
    seq: u64,
    now: u64,
    events: usize,
    trace: Vec<Transition>,
    record: bool,
    // Per-bank completion bookkeeping: for each net, (bank, bit) if it is an output rail.
    out_bit: Vec<Option<(u32, u32)>>,
    bit_high: Vec<Vec<bool>>,
    high_count: Vec<usize>,
    phase: Vec<Phase>,
    // Environment.
    vectors: &'a [u64],
    next_vector: usize,
    presenting: Phase,
    received: usize,
    marks: Vec<WavefrontMarks>,
}

impl<'a> Engine<'a> {
    fn schedule_env(&mut self, net: NetId, value: bool) {
        self.seq += 1;
        self.heap
            .push(Reverse((self.now, self.seq, net as u32, value, NO_CELL)));
    }

    fn evaluate(&mut self, c: CellId) {
        let cell = &self.sys.cells[c];
        let new = match &cell.kind {
            CellKind::Threshold(spec) => {
                let mask = cell
                    .inputs
                    .iter()
                    .enumerate()
                    .fold(0u8, |m, (i, &n)| m | ((self.values[n] as u8) << i));
                spec.next_mask(mask, self.projected[c])
            }
            CellKind::Inverter => !self.values[cell.inputs[0]],
        };
        let d = if new {
            self.delays.rise_fs[c]
        } else {
            self.delays.fall_fs[c]
        };
        let t = self.now + d;
        let q = &mut self.pending[c];
        while q.back().is_some_and(|e| e.0 >= t) {
            q.pop_back();
        }
        let after = q.back().map(|e| e.2).unwrap_or(self.values[cell.output]);
        self.projected[c] = new;
        if after == new {
            return;
        }
        self.seq += 1;
        q.push_back((t, self.seq, new));
        self.heap
            .push(Reverse((t, self.seq, cell.output as u32, new, c as u32)));
    }

    fn present(&mut self, data: Option<u64>) {
        let bank0 = &self.sys.banks[0];
        let rails: Vec<(NetId, NetId)> = bank0.inputs.iter().map(|p| (p.rail1, p.rail0)).collect();
        for (i, (r1, r0)) in rails.into_iter().enumerate() {
            let (v1, v0) = match data {
                Some(w) => {
                    let b = (w >> i) & 1 == 1;
                    (b, !b)
                }
                None => (false, false),
            };
            self.schedule_env(r1, v1);
            self.schedule_env(r0, v0);
        }
    }

    fn producer(&mut self, ko: bool) {
        if ko && self.presenting == Phase::Null && self.next_vector < self.vectors.len() {
            let w = self.vectors[self.next_vector];
            self.marks.push(WavefrontMarks {
                data_applied_fs: self.now,
                word: 0,
                ..Default::default()
            });
            self.present(Some(w));
            self.presenting = Phase::Data;
        } else if !ko && self.presenting == Phase::Data {
            self.marks[self.next_vector].null_applied_fs = self.now;
            self.present(None);
            self.presenting = Phase::Null;
            self.next_vector += 1;
        }
    }

    fn bank_changed(&mut self, bank: usize, bit: usize) -> Result<(), SimError> {
        let b = &self.sys.banks[bank];
        let p = &b.outputs[bit];
        let high = self.values[p.rail1] || self.values[p.rail0];
        if high == self.bit_high[bank][bit] {
            return Ok(());
        }
        self.bit_high[bank][bit] = high;
        if high {
            self.high_count[bank] += 1;
        } else {
            self.high_count[bank] -= 1;
        }
        let width = b.outputs.len();
        let reached = if self.high_count[bank] == width {
            Some(Phase::Data)
        } else if self.high_count[bank] == 0 {
            Some(Phase::Null)
        } else {
            None
        };
        let Some(reached) = reached else {
            return Ok(());
        };
        if reached == self.phase[bank] {
            return Err(SimError::Protocol {
                bank: b.name.clone(),
                detail: format!(
                    "two consecutive {} wavefronts at t={} fs",
                    if reached == Phase::Data { "DATA" } else { "NULL" },
                    self.now
                ),
            });
        }
        self.phase[bank] = reached;
        if bank + 1 == self.sys.banks.len() {
            self.consumer(reached);
        }
        Ok(())
    }

    fn consumer(&mut self, reached: Phase) {
        let last = self.sys.banks.last().expect("banks");
        let ki = last.ki;
        match reached {
            Phase::Data => {
                let word = last
                    .outputs
                    .iter()
                    .enumerate()
                    .fold(0u64, |w, (i, p)| w | ((self.values[p.rail1] as u64) << i));
                if let Some(m) = self.marks.get_mut(self.received) {
                    m.output_data_fs = self.now;
                    m.word = word;
                }
                self.schedule_env(ki, false);
            }
            Phase::Null => {
                if let Some(m) = self.marks.get_mut(self.received) {
                    m.output_null_fs = self.now;
                }
                self.received += 1;
                self.schedule_env(ki, true);
            }
        }
    }

    fn run(&mut self, budget: usize) -> Result<(), SimError> {
        while let Some(Reverse((t, seq, net, val, cell))) = self.heap.pop() {
            if cell != NO_CELL {
                let q = &mut self.pending[cell as usize];
                if q.front().map(|e| e.1) != Some(seq) {
                    continue;
                }
                q.pop_front();
            }
            self.now = t;
            self.events += 1;
            if self.events > budget {
                return Err(SimError::EventBudget(budget));
            }
            let net = net as usize;
            if self.values[net] == val {
                continue;
            }
            self.values[net] = val;
            if self.record {
                self.trace.push(Transition {
                    time_fs: t,
                    net,
                    value: val,
                });
            }
            if val {
                if let Some(p) = self.sys.partner[net] {
                    if self.values[p] {
                        return Err(SimError::Invalid {
                            net: self.sys.nets[net].clone(),
                            time_fs: t,
                        });
                    }
                }
            }
            for i in 0..self.sys.fanout[net].len() {
                let c = self.sys.fanout[net][i];
                self.evaluate(c);
            }
            if let Some((bank, bit)) = self.out_bit[net] {
                self.bank_changed(bank as usize, bit as usize)?;
            }
            if net == self.sys.banks[0].ko {
                self.producer(val);
            }
        }
        Ok(())
    }

    /// Picks the handshake net to blame when the queue runs dry early.
    fn deadlock(&self) -> SimError {
        for (k, b) in self.sys.banks.iter().enumerate().rev() {
            let c = self.high_count[k];
            if c != 0 && c != b.outputs.len() {
                return SimError::Deadlock {
                    time_fs: self.now,
                    net: self.sys.nets[b.ko].clone(),
                    detail: format!("{} has {c}/{} outputs DATA", b.name, b.outputs.len()),
                };
            }
        }
        for (k, b) in self.sys.banks.iter().enumerate() {
            let want_data = self.values[b.ki];
            let inputs_data = b
                .inputs
                .iter()
                .all(|p| self.values[p.rail1] || self.values[p.rail0]);
            let inputs_null = b
                .inputs
                .iter()
                .all(|p| !self.values[p.rail1] && !self.values[p.rail0]);
            if (want_data && !inputs_data && self.phase[k] == Phase::Null && k > 0)
                || (!want_data && !inputs_null && self.phase[k] == Phase::Data)
            {
                return SimError::Deadlock {
                    time_fs: self.now,
                    net: self.sys.nets[b.ki].clone(),
                    detail: format!("{} inputs never completed", b.name),
                };
            }
        }
        let b0 = &self.sys.banks[0];
        SimError::Deadlock {
            time_fs: self.now,
            net: self.sys.nets[b0.ko].clone(),
            detail: format!(
                "{} of {} vectors consumed",
                self.received,
                self.vectors.len()
            ),
        }
    }
}

pub fn simulate(
    sys: &PipelineSystem,
    vectors: &[u64],
    delays: &DelayAssignment,
) -> Result<Trace, SimError> {
    simulate_with(sys, vectors, delays, SimOptions::default())
}

pub fn simulate_with(
    sys: &PipelineSystem,
    vectors: &[u64],
    delays: &DelayAssignment,
    opts: SimOptions,
) -> Result<Trace, SimError> {
    if delays.len() != sys.cells.len() {
        return Err(SimError::Delay(format!(
            "{} delays for {} cells",
            delays.len(),
            sys.cells.len()
        )));
    }
    let width = sys.input_width();
    for (i, &v) in vectors.iter().enumerate() {
        if width < 64 && v >> width != 0 {
            return Err(SimError::VectorWidth {
                index: i,
                expected: width,
                got: 64 - v.leading_zeros() as usize,
            });
        }
    }
    let n_nets = sys.nets.len();
    let mut out_bit = vec![None; n_nets];
    for (k, b) in sys.banks.iter().enumerate() {
        for (i, p) in b.outputs.iter().enumerate() {
            out_bit[p.rail1] = Some((k as u32, i as u32));
            out_bit[p.rail0] = Some((k as u32, i as u32));
        }
    }
    let mut eng = Engine {
        sys,
        delays,
        values: vec![false; n_nets],
        projected: vec![false; sys.cells.len()],
        pending: vec![VecDeque::new(); sys.cells.len()],
        heap: BinaryHeap::new(),
        seq: 0,
        now: 0,
        events: 0,
        trace: Vec::new(),
        record: opts.record,
        out_bit,
        bit_high: sys.banks.iter().map(|b| vec![false; b.outputs.len()]).collect(),
        high_count: vec![0; sys.banks.len()],
        phase: vec![Phase::Null; sys.banks.len()],
        vectors,
        next_vector: 0,
        presenting: Phase::Null,
        received: 0,
        marks: Vec::new(),
    };
    // Reset: every net low except the inverted completion outputs and the
    // consumer's request, which start high (requesting DATA).
    for (c, cell) in sys.cells.iter().enumerate() {
        if matches!(cell.kind, CellKind::Inverter) {
            eng.values[cell.output] = true;
            eng.projected[c] = true;
        }
    }
    let last = sys.banks.last().expect("banks");
    eng.values[last.ki] = true;
    eng.producer(true);
    let budget = opts
        .event_budget
        .unwrap_or(64 * (vectors.len() + 1) * (sys.cells.len() + sys.nets.len()) + 10_000);
    eng.run(budget)?;
    if eng.received != vectors.len() {
        return Err(eng.deadlock());
    }
    let cl_inputs: Vec<NetId> = sys.stages[0]
        .cl_inputs
        .iter()
        .flat_map(|p| [p.rail1, p.rail0])
        .collect();
    let cl_outputs: Vec<NetId> = sys.stages[sys.stages.len() - 1]
        .cl_outputs
        .iter()
        .flat_map(|p| [p.rail1, p.rail0])
        .collect();
    Ok(Trace {
        net_names: sys.nets.clone().into(),
        net_class: sys.net_class.clone().into(),
        cl_inputs: cl_inputs.into(),
        cl_outputs: cl_outputs.into(),
        transitions: eng.trace,
        wavefronts: eng.marks,
        recorded: opts.record,
        complete: true,
        events: eng.events,
        end_time_fs: eng.now,
    })
}
