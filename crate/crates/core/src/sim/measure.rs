// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::Serialize;

use super::engine::{Trace, FS_PER_PS};
use super::pipeline::NetClass;
use crate::error::SimError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metrics {
    /// Producer DATA application to output-bank DATA completion, per wavefront.
    pub forward_latency_ps: Vec<f64>,
    /// First rising C/L input rail to last rising C/L output rail, per wavefront.
    pub cl_latency_ps: Vec<f64>,
    /// Spacing between successive output DATA completions.
    pub cycle_time_ps: Vec<f64>,
    pub transitions_by_class: BTreeMap<NetClass, u64>,
    /// Transition count of every net.
    #[serde(skip)]
    pub transitions_per_net: Vec<u64>,
}

impl Metrics {
    pub fn max_cl_latency_ps(&self) -> f64 {
        self.cl_latency_ps.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_forward_latency_ps(&self) -> f64 {
        self.forward_latency_ps.iter().copied().fold(0.0, f64::max)
    }

    pub fn mean_cycle_time_ps(&self) -> Option<f64> {
        if self.cycle_time_ps.is_empty() {
            None
        } else {
            Some(self.cycle_time_ps.iter().sum::<f64>() / self.cycle_time_ps.len() as f64)
        }
    }
}

fn ps(fs: u64) -> f64 {
    fs as f64 / FS_PER_PS
}

pub fn measure(trace: &Trace) -> Result<Metrics, SimError> {
    if !trace.complete {
        return Err(SimError::IncompleteTrace("simulation did not finish".into()));
    }
    if !trace.recorded {
        return Err(SimError::IncompleteTrace("transitions were not recorded".into()));
    }
    let n_nets = trace.net_names.len();
    let mut is_in = vec![false; n_nets];
    let mut is_out = vec![false; n_nets];
    for &n in trace.cl_inputs.iter() {
        is_in[n] = true;
    }
    for &n in trace.cl_outputs.iter() {
        is_out[n] = true;
    }
    let mut per_net = vec![0u64; n_nets];
    let mut by_class: BTreeMap<NetClass, u64> = BTreeMap::new();
    for t in &trace.transitions {
        per_net[t.net] += 1;
        *by_class.entry(trace.net_class[t.net]).or_default() += 1;
    }
    let mut forward = Vec::new();
    let mut cl = Vec::new();
    let mut idx = 0;
    for w in &trace.wavefronts {
        forward.push(ps(w.output_data_fs - w.data_applied_fs));
        let mut first_in: Option<u64> = None;
        let mut last_out: Option<u64> = None;
        while idx < trace.transitions.len() && trace.transitions[idx].time_fs < w.data_applied_fs {
            idx += 1;
        }
        let mut j = idx;
        while j < trace.transitions.len() && trace.transitions[j].time_fs <= w.output_data_fs {
            let t = trace.transitions[j];
            if t.value {
                if is_in[t.net] && first_in.is_none() {
                    first_in = Some(t.time_fs);
                }
                if is_out[t.net] {
                    last_out = Some(t.time_fs);
                }
            }
            j += 1;
        }
        match (first_in, last_out) {
            (Some(a), Some(b)) => cl.push(ps(b - a)),
            _ => {
                return Err(SimError::IncompleteTrace(format!(
                    "wavefront at {} fs has no C/L activity",
                    w.data_applied_fs
                )))
            }
        }
    }
    let cycle = trace
        .wavefronts
        .windows(2)
        .map(|p| ps(p[1].output_data_fs - p[0].output_data_fs))
        .collect();
    Ok(Metrics {
        forward_latency_ps: forward,
        cl_latency_ps: cl,
        cycle_time_ps: cycle,
        transitions_by_class: by_class,
        transitions_per_net: per_net,
    })
}
