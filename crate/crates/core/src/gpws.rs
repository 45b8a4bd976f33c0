//! Mode 2 excessive terrain closure alerting and the scripted attack
//! trigger schedule.
//!
//! The closure rate is the one-second backward difference of the indicated
//! radio height, so a spoofed altimeter drives the alert directly.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GpwsError {
    #[error("invalid Mode 2 envelope: {0}")]
    BadEnvelope(&'static str),
    #[error("approach index must be at least 1, got {0}")]
    BadApproachIndex(u32),
    #[error("invalid attack schedule: {0}")]
    BadSchedule(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubMode {
    A,
    B,
}

/// Alert boundary as (AGL ft, closure rate ft/min) points. Between points
/// the boundary is linear; beyond the end points it is held flat. A state
/// is inside the alert region when its closure rate is at or above the
/// boundary for its height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode2Envelope {
    pub points: Vec<[f64; 2]>,
    pub sub_mode: SubMode,
}

/// Must always alert: 500 ft AGL closing at 3000 ft/min.
pub const ANCHOR_POINT: (f64, f64) = (500.0, 3000.0);

impl Default for Mode2Envelope {
    fn default() -> Self {
        Self { points: alloc::vec![[200.0, 2000.0], [790.0, 3000.0]], sub_mode: SubMode::B }
    }
}

impl Mode2Envelope {
    pub fn validate(&self) -> Result<(), GpwsError> {
        if self.points.is_empty() {
            return Err(GpwsError::BadEnvelope("no boundary points"));
        }
        if self.points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(GpwsError::BadEnvelope("non-finite boundary point"));
        }
        if self.points.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(GpwsError::BadEnvelope("AGL values must strictly increase"));
        }
        if !self.contains(ANCHOR_POINT.0, ANCHOR_POINT.1) {
            return Err(GpwsError::BadEnvelope("(500 ft, 3000 ft/min) must be inside the alert region"));
        }
        Ok(())
    }

    pub fn boundary_fpm(&self, agl_ft: f64) -> f64 {
        let p = &self.points;
        if agl_ft <= p[0][0] {
            return p[0][1];
        }
        if agl_ft >= p[p.len() - 1][0] {
            return p[p.len() - 1][1];
        }
        let i = p.partition_point(|q| q[0] <= agl_ft);
        let (a, b) = (p[i - 1], p[i]);
        a[1] + (agl_ft - a[0]) / (b[0] - a[0]) * (b[1] - a[1])
    }

    pub fn contains(&self, agl_ft: f64, closure_fpm: f64) -> bool {
        closure_fpm >= self.boundary_fpm(agl_ft)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlertKind {
    TerrainPullUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpwsAlert {
    pub time_s: f64,
    pub kind: AlertKind,
    /// Indicated AGL when the alert fired.
    pub trigger_agl_ft: f64,
    pub approach_index: u32,
}

/// Stateless Mode 2 check. `closure_fpm` is positive when the indicated
/// terrain is getting closer.
pub fn evaluate(agl_ft: f64, closure_fpm: f64, envelope: &Mode2Envelope, enabled: bool) -> Option<AlertKind> {
    (enabled && envelope.contains(agl_ft, closure_fpm)).then_some(AlertKind::TerrainPullUp)
}

/// One-second backward difference of indicated height.
#[derive(Debug, Clone, Default)]
pub struct ClosureRateEstimator {
    samples: VecDeque<(f64, f64)>,
}

const WINDOW_S: f64 = 1.0;
const EPS_S: f64 = 1e-6;

impl ClosureRateEstimator {
    /// Record a sample and return the closure rate in ft/min once a full
    /// window of history exists.
    pub fn push(&mut self, time_s: f64, agl_ft: f64) -> Option<f64> {
        self.samples.push_back((time_s, agl_ft));
        let cutoff = time_s - WINDOW_S + EPS_S;
        while self.samples.len() >= 2 && self.samples[1].0 <= cutoff {
            self.samples.pop_front();
        }
        let (t0, h0) = self.samples[0];
        (t0 <= cutoff).then(|| (h0 - agl_ft) / (time_s - t0) * 60.0)
    }

    pub fn clear(&mut self) {
        self.samples.clear();
    }
}

/// GPWS computer with a rising-edge alert latch.
#[derive(Debug, Clone)]
pub struct Gpws {
    envelope: Mode2Envelope,
    enabled: bool,
    estimator: ClosureRateEstimator,
    latched: bool,
}

impl Gpws {
    pub fn new(envelope: Mode2Envelope) -> Result<Self, GpwsError> {
        envelope.validate()?;
        Ok(Self { envelope, enabled: true, estimator: ClosureRateEstimator::default(), latched: false })
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn set_enabled(&mut self, on: bool) {
        self.enabled = on;
        if !on {
            self.latched = false;
        }
    }

    pub fn reset(&mut self) {
        self.estimator.clear();
        self.latched = false;
    }

    /// Feed one indicated height (`None` when the altimeter has no return).
    /// Returns an alert on entry into the envelope.
    pub fn update(&mut self, time_s: f64, indicated_agl_ft: Option<f64>, approach_index: u32) -> Option<GpwsAlert> {
        let Some(agl_ft) = indicated_agl_ft else {
            self.estimator.clear();
            return None;
        };
        let rate = self.estimator.push(time_s, agl_ft)?;
        let inside = evaluate(agl_ft.max(0.0), rate, &self.envelope, self.enabled);
        match inside {
            Some(kind) if !self.latched => {
                self.latched = true;
                Some(GpwsAlert { time_s, kind, trigger_agl_ft: agl_ft, approach_index })
            }
            Some(_) => None,
            None => {
                self.latched = false;
                None
            }
        }
    }
}

/// Scripted attack onset heights: the first approach triggers near the
/// base height, each later one higher by the increment, each jittered
/// uniformly over `jitter_ft` below nominal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSchedule {
    pub base_trigger_ft: f64,
    pub increment_per_approach_ft: f64,
    pub jitter_window_ft: f64,
}

impl Default for AttackSchedule {
    fn default() -> Self {
        Self { base_trigger_ft: 500.0, increment_per_approach_ft: 250.0, jitter_window_ft: 50.0 }
    }
}

impl AttackSchedule {
    pub fn validate(&self) -> Result<(), GpwsError> {
        if !(self.base_trigger_ft.is_finite()
            && self.increment_per_approach_ft.is_finite()
            && self.jitter_window_ft.is_finite())
        {
            return Err(GpwsError::BadSchedule("non-finite field"));
        }
        if self.jitter_window_ft < 0.0 || self.base_trigger_ft - self.jitter_window_ft < 0.0 {
            return Err(GpwsError::BadSchedule("jitter must be non-negative and keep triggers above ground"));
        }
        Ok(())
    }

    pub fn nominal_ft(&self, approach_index: u32) -> Result<f64, GpwsError> {
        if approach_index < 1 {
            return Err(GpwsError::BadApproachIndex(approach_index));
        }
        Ok(self.base_trigger_ft + self.increment_per_approach_ft * (approach_index - 1) as f64)
    }

    /// Window `[nominal - jitter, nominal]` for an approach.
    pub fn window_ft(&self, approach_index: u32) -> Result<(f64, f64), GpwsError> {
        let hi = self.nominal_ft(approach_index)?;
        Ok((hi - self.jitter_window_ft, hi))
    }

    pub fn scripted_trigger<R: Rng + ?Sized>(&self, approach_index: u32, rng: &mut R) -> Result<f64, GpwsError> {
        let (lo, hi) = self.window_ft(approach_index)?;
        if lo == hi {
            return Ok(hi);
        }
        Ok(rng.random_range(lo..=hi))
    }
}
