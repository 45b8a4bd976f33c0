//! Pilot-response agents.
//!
//! Agents are outcome-calibrated: each policy is a table of the outcome
//! frequencies and response statistics observed in simulator trials, and
//! the samplers are tuned so that a large population of agents reproduces
//! those numbers. Nothing here models perception or workload.

use alloc::collections::BTreeMap;

use crate::rng::{Categorical, CategoricalError};
use crate::stats::StatsError;

mod gpws;
mod gs;
mod tcas;

pub use gpws::{calibrate_latency, GpwsAction, GpwsCrew, GpwsPolicy, GpwsResponse, LatencyInputs};
pub use gs::{ApproachType, CalibratedGsPolicy, GsAction, GsCrew, GsDecision, GsPolicy};
pub use tcas::{CalibratedTcasPolicy, FinalAction, TcasAction, TcasCell, TcasCrew, TcasHistory, TcasPolicy};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CrewError {
    #[error(transparent)]
    Categorical(#[from] CategoricalError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("invalid policy: {0}")]
    BadPolicy(&'static str),
}

/// Outcome weights keyed by outcome; they need not sum to one.
pub type Weights<T> = BTreeMap<T, f64>;

fn categorical<T: Clone + Ord>(w: &Weights<T>) -> Result<Categorical<T>, CrewError> {
    Ok(Categorical::from_weights(w.iter().map(|(k, v)| (k.clone(), *v)))?)
}
