//! Ground-side integrity checks for received signals.
//!
//! Two independent tests. [`toa_consistency`] asks whether arrival times at
//! a sensor network fit the position a message claims to come from; a
//! ground station impersonating an airborne aircraft fails it because its
//! energy reaches the sensors in the wrong order. [`fingerprint_check`]
//! compares an observed transmitter against a whitelist of registered
//! airfield emitters.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::math::{distance, sqrt, Vec3};
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SentinelError {
    #[error("observation at {0} Hz is outside every monitored band")]
    OutOfBand(f64),
    #[error("invalid sensor network: {0}")]
    BadNetwork(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundSensor {
    pub id: u32,
    pub position_m: Vec3,
    /// Known clock offset, subtracted before comparison.
    #[serde(default)]
    pub clock_bias_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arrival {
    pub sensor: GroundSensor,
    pub timestamp_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Flag {
    Clean,
    Suspect,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    Consistent,
    TimingResidual,
    TooFewArrivals,
    UnknownEmitter,
    OutsideRegisteredRegion,
    PowerBreach,
    Whitelisted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrityVerdict {
    pub subject: String,
    pub flag: Flag,
    pub reason: Reason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_fit_m: Option<Vec3>,
}

impl IntegrityVerdict {
    fn new(subject: &str, flag: Flag, reason: Reason) -> Self {
        Self { subject: subject.into(), flag, reason, residual_m: None, best_fit_m: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToaConfig {
    pub threshold_m: f64,
    pub min_arrivals: usize,
}

impl Default for ToaConfig {
    fn default() -> Self {
        Self { threshold_m: 500.0, min_arrivals: 4 }
    }
}

/// Timing residual of `arrivals` against an emitter at `claimed`, meters.
///
/// Each arrival implies an emission time once the claimed propagation delay
/// is removed; the residual is the RMS spread of those times about their
/// mean, times c. Equivalently sqrt(sum over pairs of (observed minus
/// predicted TDOA)^2) / n, times c.
pub fn residual_m(claimed: Vec3, arrivals: &[Arrival]) -> f64 {
    let n = arrivals.len();
    if n == 0 {
        return 0.0;
    }
    let implied: Vec<f64> = arrivals
        .iter()
        .map(|a| (a.timestamp_s - a.sensor.clock_bias_s) * SPEED_OF_LIGHT - distance(claimed, a.sensor.position_m))
        .collect();
    let mean = implied.iter().sum::<f64>() / n as f64;
    sqrt(implied.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n as f64)
}

pub fn toa_consistency(subject: &str, claimed: Vec3, arrivals: &[Arrival], cfg: &ToaConfig) -> IntegrityVerdict {
    if arrivals.len() < cfg.min_arrivals.max(4) {
        return IntegrityVerdict::new(subject, Flag::Undetermined, Reason::TooFewArrivals);
    }
    let r = residual_m(claimed, arrivals);
    let (flag, reason) =
        if r > cfg.threshold_m { (Flag::Suspect, Reason::TimingResidual) } else { (Flag::Clean, Reason::Consistent) };
    IntegrityVerdict { residual_m: Some(r), ..IntegrityVerdict::new(subject, flag, reason) }
}

/// Arrival times at each sensor for a transmission from `emitter` at
/// `emitted_s`, with sensor bias and zero-mean normal jitter.
pub fn simulate_arrivals<R: Rng + ?Sized>(
    emitter: Vec3,
    emitted_s: f64,
    sensors: &[GroundSensor],
    jitter_s: f64,
    rng: &mut R,
) -> Vec<Arrival> {
    let noise = (jitter_s > 0.0).then(|| Normal::new(0.0, jitter_s).expect("positive jitter"));
    sensors
        .iter()
        .map(|s| {
            let n = noise.as_ref().map_or(0.0, |d| d.sample(rng));
            Arrival {
                sensor: *s,
                timestamp_s: emitted_s + distance(emitter, s.position_m) / SPEED_OF_LIGHT + s.clock_bias_s + n,
            }
        })
        .collect()
}

/// Best-fit emitter position by coarse-to-fine grid search inside the box
/// `center ± half_extent`.
pub fn locate(arrivals: &[Arrival], center: Vec3, half_extent: Vec3) -> Vec3 {
    const N: i32 = 10;
    let mut c = center;
    let mut h = half_extent;
    for _ in 0..30 {
        let mut best = (f64::INFINITY, c);
        for i in -N..=N {
            for j in -N..=N {
                for k in -N..=N {
                    let p = [
                        c[0] + h[0] * i as f64 / N as f64,
                        c[1] + h[1] * j as f64 / N as f64,
                        c[2] + h[2] * k as f64 / N as f64,
                    ];
                    let r = residual_m(p, arrivals);
                    if r < best.0 {
                        best = (r, p);
                    }
                }
            }
        }
        c = best.1;
        h = [h[0] * 0.5, h[1] * 0.5, h[2] * 0.5];
    }
    c
}

/// Network sanity: at least four sensors, not all on one line.
pub fn validate_network(sensors: &[GroundSensor]) -> Result<(), SentinelError> {
    if sensors.len() < 4 {
        return Err(SentinelError::BadNetwork("at least four sensors are required"));
    }
    let p0 = sensors[0].position_m;
    let sub = |a: Vec3, b: Vec3| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let Some(dir) = sensors.iter().map(|s| sub(s.position_m, p0)).find(|d| d.iter().any(|v| v.abs() > 1e-6)) else {
        return Err(SentinelError::BadNetwork("sensors are co-located"));
    };
    let off_line = sensors.iter().any(|s| {
        let d = sub(s.position_m, p0);
        let cross = [dir[1] * d[2] - dir[2] * d[1], dir[2] * d[0] - dir[0] * d[2], dir[0] * d[1] - dir[1] * d[0]];
        cross.iter().any(|v| v.abs() > 1e-3)
    });
    if !off_line {
        return Err(SentinelError::BadNetwork("sensors are collinear"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub lo_hz: f64,
    pub hi_hz: f64,
}

impl Band {
    pub fn contains(&self, f: f64) -> bool {
        self.lo_hz <= f && f <= self.hi_hz
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub center_m: Vec3,
    pub radius_m: f64,
}

impl Region {
    pub fn contains(&self, p: Vec3) -> bool {
        distance(self.center_m, p) <= self.radius_m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitterFingerprint {
    pub name: String,
    pub band: Band,
    pub region: Region,
    pub max_power_dbm: f64,
}

/// What spectrum monitoring reports about one transmitter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumObservation {
    pub subject: String,
    pub frequency_hz: f64,
    pub position_m: Vec3,
    pub power_dbm: f64,
}

pub fn fingerprint_check(
    obs: &SpectrumObservation,
    whitelist: &[EmitterFingerprint],
    monitored: &[Band],
) -> Result<IntegrityVerdict, SentinelError> {
    if !monitored.iter().any(|b| b.contains(obs.frequency_hz)) {
        return Err(SentinelError::OutOfBand(obs.frequency_hz));
    }
    let in_band: Vec<_> = whitelist.iter().filter(|w| w.band.contains(obs.frequency_hz)).collect();
    let in_region: Vec<_> = in_band.iter().filter(|w| w.region.contains(obs.position_m)).collect();
    let ok = in_region.iter().any(|w| obs.power_dbm <= w.max_power_dbm);
    let (flag, reason) = match (in_band.is_empty(), in_region.is_empty(), ok) {
        (_, _, true) => (Flag::Clean, Reason::Whitelisted),
        (true, _, _) => (Flag::Suspect, Reason::UnknownEmitter),
        (false, true, _) => (Flag::Suspect, Reason::OutsideRegisteredRegion),
        _ => (Flag::Suspect, Reason::PowerBreach),
    };
    Ok(IntegrityVerdict::new(&obs.subject, flag, reason))
}
