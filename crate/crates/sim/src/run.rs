//! Batch execution of independent seeded trials.

use avspoof_core::rng::trial_seed;
use rayon::prelude::*;
use serde_json::Value;

use crate::config::ScenarioConfig;
use crate::log::TrialLog;
use crate::scenario::Prepared;
use crate::SimError;

#[derive(Debug, Clone)]
pub struct Runner {
    cfg: ScenarioConfig,
    prepared: Prepared,
}

impl Runner {
    pub fn new(cfg: ScenarioConfig) -> Result<Self, SimError> {
        cfg.validate()?;
        let prepared = Prepared::new(&cfg)?;
        Ok(Self { cfg, prepared })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    /// Parameters derived from the configuration before any trial ran.
    pub fn derived(&self) -> Value {
        self.prepared.describe()
    }

    pub fn seed_of(&self, trial_id: u64) -> u64 {
        trial_seed(self.cfg.seed, trial_id)
    }

    pub fn trial(&self, trial_id: u64) -> Result<TrialLog, SimError> {
        self.prepared.run_trial(&self.cfg, trial_id, self.seed_of(trial_id))
    }

    /// All configured trials, in trial order.
    pub fn run(&self) -> Result<Vec<TrialLog>, SimError> {
        (0..self.cfg.trials).into_par_iter().map(|i| self.trial(i)).collect()
    }
}

pub fn run(cfg: &ScenarioConfig) -> Result<Vec<TrialLog>, SimError> {
    Runner::new(cfg.clone())?.run()
}
