// SPDX-License-Identifier: Apache-2.0

//! Gate-level modeling of Null Convention Logic (NCL) circuits.
//!
//! - [`gate`]: threshold gates with hysteresis and the gate catalog.
//! - [`netlist`]: dual-rail values, NCL netlists, settling and the
//!   input-completeness / observability checkers.
//! - [`sim`]: event-driven simulation of handshaking pipelines.
//! - [`synth`]: Boolean to dual-rail expansion and the array multiplier.
//! - [`ppa`]: 2D versus monolithic-3D power, delay and area estimation.
//! - [`cli`]: the command layer behind the `ncl3d` binary.

pub mod cli;
pub mod error;
pub mod gate;
pub mod netlist;
pub mod ppa;
pub mod sim;
pub mod synth;

pub use error::{CliError, GateError, NetlistError, ParseError, PpaError, SimError, SynthError};
pub use gate::{eval_set, next_output, spec_from_name, transistor_counts, GateCatalog, GateSpec};
