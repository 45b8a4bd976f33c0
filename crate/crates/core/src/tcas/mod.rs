//! Collision-avoidance surveillance and advisory logic.
//!
//! A [`Tcas`] unit runs one surveillance cycle per second: Mode S
//! (squitter acquisition, addressed interrogation) or Mode C whisper-shout
//! all-calls, then edge-triggered TA/RA evaluation per track.
//! [`FalseIntruder`] is the ground-station attacker that answers those
//! interrogations on behalf of aircraft that do not exist.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rng::SimRng;
use crate::world::AircraftState;

mod advisory;
mod attacker;
mod message;
mod track;

pub use advisory::{
    advise, assess, ra_target_vs_mps, relative_altitude_ft, tau, Advisory, AdvisoryLevel, RaSense, TcasMode, Thresholds,
};
pub use attacker::{inject, ActiveEncounter, Encounter, FalseIntruder, FalseIntruderPlan};
pub use message::{IcaoAddress, Malformed, MessageKind, SurveillanceMessage};
pub use track::{
    path_loss_db, whisper_shout_steps, AllCall, IntruderTrack, SurveillanceStats, TrackId, Tracker, TrackerConfig,
    Traffic, Transponder, INTERROGATION_HZ, REPLY_HZ,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TcasError {
    #[error("whisper-shout steps must be non-empty, finite and strictly increasing")]
    BadSteps,
    #[error("invalid false-intruder plan: {0}")]
    BadPlan(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Surveillance {
    ModeS,
    ModeC,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TcasConfig {
    pub thresholds: Thresholds,
    pub tracker: TrackerConfig,
    pub surveillance: Surveillance,
    pub whisper_shout_steps_dbm: Vec<f64>,
}

impl Default for TcasConfig {
    fn default() -> Self {
        Self {
            thresholds: Thresholds::default(),
            tracker: TrackerConfig::default(),
            surveillance: Surveillance::ModeS,
            whisper_shout_steps_dbm: whisper_shout_steps(24.0, 54.0, 24),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CycleOutcome {
    pub messages: Vec<SurveillanceMessage>,
    /// Advisories that raised a track's peak level this cycle.
    pub events: Vec<Advisory>,
    /// Most severe standing advisory after the cycle.
    pub active: Option<Advisory>,
}

#[derive(Debug, Clone)]
pub struct Tcas {
    config: TcasConfig,
    mode: TcasMode,
    tracker: Tracker,
}

impl Tcas {
    pub fn new(config: TcasConfig, mode: TcasMode) -> Self {
        let tracker = Tracker::new(config.tracker.clone());
        Self { config, mode, tracker }
    }

    pub fn mode(&self) -> TcasMode {
        self.mode
    }

    /// Switching to Standby drops all tracks.
    pub fn set_mode(&mut self, mode: TcasMode) {
        if mode == TcasMode::Standby {
            self.tracker.clear();
        }
        self.mode = mode;
    }

    pub fn tracker(&self) -> &Tracker {
        &self.tracker
    }

    pub fn config(&self) -> &TcasConfig {
        &self.config
    }

    pub fn cycle(
        &mut self,
        own: &AircraftState,
        responders: &mut [&mut dyn Transponder],
        rng: &mut SimRng,
    ) -> Result<CycleOutcome, TcasError> {
        if !self.mode.surveils() {
            return Ok(CycleOutcome::default());
        }
        let t = own.time_s;
        let messages = match self.config.surveillance {
            Surveillance::ModeS => self.tracker.mode_s_cycle(own, responders, rng, t),
            Surveillance::ModeC => {
                self.tracker.mode_c_cycle(own, responders, &self.config.whisper_shout_steps_dbm, rng, t)?
            }
        };
        // Each track raises at most one TA and one RA event: the level only
        // ratchets up, so an RA that lapses and returns is the same episode.
        let mut events = Vec::new();
        let thr = self.config.thresholds;
        for tr in self.tracker.tracks_mut() {
            let Some(a) = assess(tr, own, self.mode, &thr) else { continue };
            if Some(a.level) > tr.advisory_level {
                events.push(a);
                tr.advisory_level = Some(a.level);
                if a.level == AdvisoryLevel::Ta {
                    tr.ta_issued = true;
                }
            }
        }
        let active = advise(self.tracker.tracks(), own, self.mode, &thr);
        Ok(CycleOutcome { messages, events, active })
    }
}
