// SPDX-License-Identifier: Apache-2.0

//! Randomized delay-insensitivity check.
//!
//! Every trial draws independent rise and fall delays for every cell,
//! log-uniform in `[MIN_DELAY_PS, MAX_DELAY_PS]`, from a ChaCha8 stream keyed
//! by `(seed, trial)`. A trial passes when the consumed DATA words equal the
//! unit-delay reference and the protocol completes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::engine::{simulate_with, DelayAssignment, SimOptions};
use super::pipeline::PipelineSystem;
use crate::error::SimError;

pub const MIN_DELAY_PS: f64 = 1.0;
pub const MAX_DELAY_PS: f64 = 1000.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub delays: DelayAssignment,
    /// Words consumed before the failure, if any.
    pub words: Vec<u64>,
    pub failure: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiReport {
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub reference: Vec<u64>,
    pub counterexample: Option<Counterexample>,
}

/// The delay assignment of one trial.
pub fn random_delays(sys: &PipelineSystem, seed: u64, trial: usize) -> DelayAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let (lo, hi) = (MIN_DELAY_PS.ln(), MAX_DELAY_PS.ln());
    DelayAssignment::from_fn(sys, |_, _| {
        let r = rng.random_range(lo..=hi).exp();
        let f = rng.random_range(lo..=hi).exp();
        (r, f)
    })
    .expect("delays lie in a positive range")
}

pub fn check_delay_insensitivity(
    sys: &PipelineSystem,
    vectors: &[u64],
    n_trials: usize,
    seed: u64,
) -> Result<DiReport, SimError> {
    if n_trials == 0 {
        return Err(SimError::Delay("at least one trial is required".into()));
    }
    let quiet = SimOptions {
        record: false,
        event_budget: None,
    };
    let unit = DelayAssignment::uniform(sys, 1.0)?;
    let reference = simulate_with(sys, vectors, &unit, quiet)?.words();
    let outcomes: Vec<Option<Counterexample>> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let delays = random_delays(sys, seed, trial);
            match simulate_with(sys, vectors, &delays, quiet) {
                Ok(t) if t.words() == reference => None,
                Ok(t) => Some(Counterexample {
                    trial,
                    delays,
                    words: t.words(),
                    failure: "output words differ from the reference".into(),
                }),
                Err(e) => Some(Counterexample {
                    trial,
                    delays,
                    words: Vec::new(),
                    failure: e.to_string(),
                }),
            }
        })
        .collect();
    let counterexample = outcomes.into_iter().flatten().next();
    Ok(DiReport {
        trials: n_trials,
        seed,
        passed: counterexample.is_none(),
        reference,
        counterexample,
    })
}
