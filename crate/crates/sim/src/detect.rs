//! Replay of logged surveillance replies through the ground-sensor
//! time-of-arrival check.
//!
//! Each reply carrying a position claim is heard by the sensor network
//! from where it was really transmitted; the check then asks whether the
//! arrival pattern fits the claimed position. Arrival noise is drawn from
//! the trial's sensor stream, so a replay is reproducible.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use avspoof_core::rng::{stream, SimRng, Stream};
use avspoof_core::sentinel::{simulate_arrivals, toa_consistency, Flag, GroundSensor, IntegrityVerdict, ToaConfig};
use avspoof_core::tcas::{IcaoAddress, MessageKind, SurveillanceMessage};
use avspoof_core::Origin;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::TcasScenario;
use crate::emit::{log_paths, read_log};
use crate::log::{EventKind, TrialLog};
use crate::SimError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectConfig {
    pub sensors: Vec<GroundSensor>,
    pub jitter_s: f64,
    pub toa: ToaConfig,
}

impl DetectConfig {
    pub fn from_scenario(t: &TcasScenario) -> Self {
        Self { sensors: t.sensors.clone(), jitter_s: t.sensor_jitter_s, toa: t.toa }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MessageVerdict {
    pub trial_id: u64,
    pub t: f64,
    pub kind: MessageKind,
    pub icao: Option<IcaoAddress>,
    /// Ground truth, for scoring only.
    pub origin: Origin,
    pub verdict: IntegrityVerdict,
}

/// Check every message with a position claim, in order.
pub fn check_messages<'a>(
    trial_id: u64,
    seed: u64,
    messages: impl IntoIterator<Item = &'a SurveillanceMessage>,
    cfg: &DetectConfig,
) -> Vec<MessageVerdict> {
    let mut rng: SimRng = stream(seed, Stream::Sensors);
    let mut out = Vec::new();
    for m in messages {
        let Some(claimed) = m.apparent_position_m else { continue };
        let arrivals = simulate_arrivals(m.emitter_position_m, m.timestamp_s, &cfg.sensors, cfg.jitter_s, &mut rng);
        let subject = match m.icao {
            Some(a) => format!("{trial_id}/{:.1}/{a}", m.timestamp_s),
            None => format!("{trial_id}/{:.1}/MODE_C", m.timestamp_s),
        };
        out.push(MessageVerdict {
            trial_id,
            t: m.timestamp_s,
            kind: m.kind,
            icao: m.icao,
            origin: m.origin,
            verdict: toa_consistency(&subject, claimed, &arrivals, &cfg.toa),
        });
    }
    out
}

/// Messages recorded in a trial log.
pub fn logged_messages(log: &TrialLog) -> Result<Vec<SurveillanceMessage>, SimError> {
    log.events
        .iter()
        .filter(|e| e.kind == EventKind::Message)
        .map(|e| {
            serde_json::from_value(e.payload.clone()).map_err(|err| SimError::Trial {
                trial: log.trial_id,
                message: format!("bad MESSAGE payload at t={}: {err}", e.t),
            })
        })
        .collect()
}

pub fn check_logs(logs: &[TrialLog], cfg: &DetectConfig) -> Result<Vec<MessageVerdict>, SimError> {
    let per: Vec<Vec<MessageVerdict>> = logs
        .par_iter()
        .map(|l| Ok(check_messages(l.trial_id, l.seed, &logged_messages(l)?, cfg)))
        .collect::<Result<_, SimError>>()?;
    Ok(per.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DetectionStats {
    pub adversarial: u64,
    pub adversarial_suspect: u64,
    pub genuine: u64,
    pub genuine_suspect: u64,
    pub undetermined: u64,
}

impl DetectionStats {
    pub fn add(&mut self, v: &MessageVerdict) {
        let suspect = v.verdict.flag == Flag::Suspect;
        self.undetermined += u64::from(v.verdict.flag == Flag::Undetermined);
        match v.origin {
            Origin::Adversarial => {
                self.adversarial += 1;
                self.adversarial_suspect += u64::from(suspect);
            }
            Origin::Genuine => {
                self.genuine += 1;
                self.genuine_suspect += u64::from(suspect);
            }
        }
    }

    pub fn detection_rate(&self) -> Option<f64> {
        (self.adversarial > 0).then(|| self.adversarial_suspect as f64 / self.adversarial as f64)
    }

    pub fn false_alarm_rate(&self) -> Option<f64> {
        (self.genuine > 0).then(|| self.genuine_suspect as f64 / self.genuine as f64)
    }
}

impl<'a> FromIterator<&'a MessageVerdict> for DetectionStats {
    fn from_iter<I: IntoIterator<Item = &'a MessageVerdict>>(iter: I) -> Self {
        let mut s = Self::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Serialized name of a unit enum variant.
fn name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

pub const VERDICTS_HEADER: &str = "trial_id,t,kind,icao,origin,flag,reason,residual_m";

pub fn push_verdict_row(out: &mut String, v: &MessageVerdict) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        v.trial_id,
        v.t,
        name(&v.kind),
        v.icao.map(|a| a.to_string()).unwrap_or_default(),
        name(&v.origin),
        name(&v.verdict.flag),
        name(&v.verdict.reason),
        v.verdict.residual_m.map(|r| format!("{r:.3}")).unwrap_or_default()
    );
}

pub fn verdicts_csv(verdicts: &[MessageVerdict]) -> String {
    let mut out = format!("{VERDICTS_HEADER}\n");
    for v in verdicts {
        push_verdict_row(&mut out, v);
    }
    out
}

/// Check every log under `dir` a batch at a time, appending verdict rows to
/// `csv` in trial order. Memory stays bounded by the batch, not the run.
pub fn check_dir(dir: &Path, cfg: &DetectConfig, csv: &mut impl io::Write) -> Result<DetectionStats, SimError> {
    const BATCH: usize = 64;
    let paths = log_paths(dir)?;
    let mut stats = DetectionStats::default();
    writeln!(csv, "{VERDICTS_HEADER}").map_err(|e| SimError::io(dir, e))?;
    for chunk in paths.chunks(BATCH) {
        let per: Vec<Vec<MessageVerdict>> = chunk
            .par_iter()
            .map(|p| {
                let log = read_log(p)?;
                Ok(check_messages(log.trial_id, log.seed, &logged_messages(&log)?, cfg))
            })
            .collect::<Result<_, SimError>>()?;
        let mut text = String::new();
        for v in per.iter().flatten() {
            stats.add(v);
            push_verdict_row(&mut text, v);
        }
        csv.write_all(text.as_bytes()).map_err(|e| SimError::io(dir, e))?;
    }
    Ok(stats)
}
