//! Closed-loop trial engines, one per scenario family.

pub mod gpws;
pub mod gs;
pub mod tcas;

use serde_json::Value;

use crate::config::{ScenarioConfig, ScenarioKind};
use crate::log::TrialLog;
use crate::SimError;

/// Everything a run derives once from its configuration before any trial.
#[derive(Debug, Clone)]
pub enum Prepared {
    Gpws(gpws::Prepared),
    Tcas(tcas::Prepared),
    Gs(gs::Prepared),
}

impl Prepared {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self, SimError> {
        Ok(match cfg.scenario {
            ScenarioKind::Gpws => Self::Gpws(gpws::prepare(cfg)?),
            ScenarioKind::Tcas => Self::Tcas(tcas::prepare(cfg)?),
            ScenarioKind::Gs | ScenarioKind::Baseline => Self::Gs(gs::prepare(cfg)?),
        })
    }

    pub fn run_trial(&self, cfg: &ScenarioConfig, trial_id: u64, seed: u64) -> Result<TrialLog, SimError> {
        match self {
            Self::Gpws(p) => gpws::run_trial(cfg, p, trial_id, seed),
            Self::Tcas(p) => tcas::run_trial(cfg, p, trial_id, seed),
            Self::Gs(p) => gs::run_trial(cfg, p, trial_id, seed),
        }
    }

    /// Derived parameters, for the run report.
    pub fn describe(&self) -> Value {
        match self {
            Self::Gpws(p) => p.describe(),
            Self::Tcas(p) => p.describe(),
            Self::Gs(p) => p.describe(),
        }
    }
}

/// Emits state samples at a fixed interval.
#[derive(Debug)]
pub(crate) struct Tracer {
    interval_s: f64,
    next_s: f64,
}

impl Tracer {
    pub fn new(interval_s: f64) -> Self {
        Self { interval_s, next_s: f64::NEG_INFINITY }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn due(&mut self, t: f64) -> bool {
        if !(self.interval_s > 0.0) || t + 1e-9 < self.next_s {
            return false;
        }
        self.next_s = if self.next_s.is_finite() { self.next_s + self.interval_s } else { t + self.interval_s };
        true
    }
}
