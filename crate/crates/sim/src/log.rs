//! Per-trial event logs.

use avspoof_core::crew::{ApproachType, FinalAction, GpwsAction, GsDecision};
use avspoof_core::tcas::TcasMode;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ScenarioKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    TrialStart,
    ApproachStart,
    AttackOnset,
    GpwsAlert,
    CrewAction,
    GoAround,
    Landed,
    EncounterLaunch,
    Advisory,
    ModeChange,
    Message,
    CueConflict,
    State,
    Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub payload: Value,
}

/// One line of a JSON-lines trial log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogLine {
    pub t: f64,
    pub kind: EventKind,
    pub payload: Value,
    pub trial_id: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Landed,
    /// Went around and flew a different approach type.
    FallbackApproach,
    Diverted,
    ContinuedOnRoute,
}

impl Outcome {
    pub const ALL: [Self; 4] = [Self::Landed, Self::FallbackApproach, Self::Diverted, Self::ContinuedOnRoute];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Landed => "LANDED",
            Self::FallbackApproach => "FALLBACK_APPROACH",
            Self::Diverted => "DIVERTED",
            Self::ContinuedOnRoute => "CONTINUED_ON_ROUTE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachRecord {
    pub index: u32,
    pub trigger_agl_ft: f64,
    #[serde(default)]
    pub alert_agl_ft: Option<f64>,
    #[serde(default)]
    pub alert_delay_s: Option<f64>,
    pub action: GpwsAction,
    #[serde(default)]
    pub go_around_agl_ft: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TrialMetrics {
    Gpws {
        approaches: Vec<ApproachRecord>,
    },
    Tcas {
        final_mode: TcasMode,
        final_action: FinalAction,
        ras: u32,
        tas: u32,
        advisory_episodes: u32,
        ras_before_downgrade: Option<u32>,
        tas_before_standby: Option<u32>,
    },
    Gs {
        decision: GsDecision,
        conflict_seen: bool,
        go_around_agl_ft: Option<f64>,
        go_around_distance_sm: Option<f64>,
        fallback: Option<ApproachType>,
        touchdown_along_track_m: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialLog {
    pub trial_id: u64,
    pub seed: u64,
    pub scenario: ScenarioKind,
    pub events: Vec<Event>,
    pub outcome: Outcome,
    pub metrics: TrialMetrics,
}

impl TrialLog {
    /// JSON-lines rendering; the final line carries outcome and metrics.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let last_t = self.events.last().map_or(0.0, |e| e.t);
        let line = |t, kind, payload: Value| LogLine { t, kind, payload, trial_id: self.trial_id, seed: self.seed };
        for e in &self.events {
            out.push_str(&serde_json::to_string(&line(e.t, e.kind, e.payload.clone())).expect("log line"));
            out.push('\n');
        }
        let payload = serde_json::json!({
            "scenario": self.scenario,
            "outcome": self.outcome,
            "metrics": self.metrics,
        });
        out.push_str(&serde_json::to_string(&line(last_t, EventKind::Outcome, payload)).expect("log line"));
        out.push('\n');
        out
    }

    pub fn from_json_lines(text: &str) -> Result<Self, String> {
        let mut events = Vec::new();
        let mut ids = None;
        let mut tail = None;
        for (n, raw) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let l: LogLine = serde_json::from_str(raw).map_err(|e| format!("line {}: {e}", n + 1))?;
            match ids {
                None => ids = Some((l.trial_id, l.seed)),
                Some(p) if p != (l.trial_id, l.seed) => return Err(format!("line {}: mixed trial ids", n + 1)),
                _ => {}
            }
            if l.kind == EventKind::Outcome {
                tail = Some(l.payload);
            } else {
                events.push(Event { t: l.t, kind: l.kind, payload: l.payload });
            }
        }
        let (trial_id, seed) = ids.ok_or("empty log")?;
        #[derive(Deserialize)]
        struct Tail {
            scenario: ScenarioKind,
            outcome: Outcome,
            metrics: TrialMetrics,
        }
        let tail: Tail = serde_json::from_value(tail.ok_or("log has no OUTCOME line")?).map_err(|e| e.to_string())?;
        Ok(Self { trial_id, seed, scenario: tail.scenario, events, outcome: tail.outcome, metrics: tail.metrics })
    }
}

/// Event sink that keeps events time-ordered.
#[derive(Debug, Default)]
pub(crate) struct Recorder {
    pub events: Vec<Event>,
}

impl Recorder {
    pub fn push(&mut self, t: f64, kind: EventKind, payload: Value) {
        debug_assert!(self.events.last().is_none_or(|e| e.t <= t), "events out of order");
        self.events.push(Event { t, kind, payload });
    }
}
