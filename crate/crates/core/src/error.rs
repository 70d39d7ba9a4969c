// SPDX-License-Identifier: Apache-2.0

//! Error types shared across the crate.

use thiserror::Error;

/// Location-tagged diagnostic for the text formats (netlists, catalogs, vectors).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{source_name}:{line}:{column}: {message}")]
pub struct ParseError {
    pub source_name: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(
        source_name: impl Into<String>,
        line: usize,
        column: usize,
        message: impl Into<String>,
    ) -> Self {
        Self {
            source_name: source_name.into(),
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("malformed gate name `{name}`: {reason}")]
    MalformedName { name: String, reason: String },
    #[error("gate `{name}` can never set: threshold {threshold} exceeds total weight {total}")]
    UnreachableThreshold {
        name: String,
        threshold: u32,
        total: u32,
    },
    #[error("gate `{name}` expects {expected} inputs, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("invalid gate spec `{name}`: {reason}")]
    InvalidSpec { name: String, reason: String },
    #[error("catalog: {0}")]
    Catalog(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("netlist has structural defects: {0}")]
    Invalid(String),
    #[error("settle did not converge after {passes} passes")]
    NonConvergence { passes: usize },
    #[error("{inputs} dual-rail inputs exceed the exhaustive limit of {limit}; use sampled mode")]
    SizeGuard { inputs: usize, limit: usize },
    #[error("expected {expected} input rails, got {got}")]
    RailCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("deadlock at t={time_fs} fs: handshake net `{net}` stalled ({detail})")]
    Deadlock {
        time_fs: u64,
        net: String,
        detail: String,
    },
    #[error("event budget of {0} exhausted")]
    EventBudget(usize),
    #[error("protocol violation on `{bank}`: {detail}")]
    Protocol { bank: String, detail: String },
    #[error("invalid rail pair `{net}` reached (1,1) at t={time_fs} fs")]
    Invalid { net: String, time_fs: u64 },
    #[error("vector {index} has {got} bits, pipeline input is {expected} bits wide")]
    VectorWidth {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("pipeline: {0}")]
    Build(String),
    #[error("delay assignment: {0}")]
    Delay(String),
    #[error("incomplete trace: {0}")]
    IncompleteTrace(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("duplicate driver for net `{0}`")]
    DuplicateDriver(String),
    #[error("undeclared net `{0}`")]
    UndeclaredNet(String),
    #[error("combinational cycle through net `{0}`")]
    Cycle(String),
    #[error("multiplier width {0} outside [2, 8]")]
    Width(usize),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PpaError {
    #[error("alpha {0} outside (0, 1]")]
    Alpha(f64),
    #[error("2D mode requires alpha = 1, got {0}")]
    Alpha2d(f64),
    #[error("invalid tech parameter `{name}` = {value}")]
    Tech { name: &'static str, value: f64 },
    #[error("calibration table is missing gate `{0}`")]
    MissingGate(String),
    #[error("calibration fit for `{gate}` {metric} off by {residual_pct:.2}% (limit {limit_pct}%)")]
    FitResidual {
        gate: String,
        metric: &'static str,
        residual_pct: f64,
        limit_pct: f64,
    },
    #[error("{0}")]
    Model(String),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("config: {0}")]
    Config(String),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Ppa(#[from] PpaError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
