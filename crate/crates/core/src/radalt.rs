//! FMCW radio altimeter and the ramp-spoofing pulse scheduler.
//!
//! The altimeter sweeps 4200-4400 MHz. A return delayed by `t` seconds
//! mixes down to a beat tone at `slope * t` Hz, and height is `c * t / 2`.
//! The receiver resolves the beat tone to one FFT bin (`1 / sweep_period`
//! Hz), which is a range quantum of `c / (2 * bandwidth)`, about 0.75 m.
//!
//! The spoofer does not flood the band. It transmits one replica return per
//! sweep whose delay shrinks sweep by sweep, so a receiver that locks onto
//! the strongest return sees terrain rising at the chosen rate.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{math::round, Origin, SPEED_OF_LIGHT};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RadaltError {
    #[error("height must be a non-negative finite number, got {0}")]
    NegativeHeight(f64),
    #[error("no ground return in this sweep")]
    NoGroundReturn,
    #[error("invalid sweep configuration: {0}")]
    BadSweep(&'static str),
    #[error("invalid ramp parameter: {0}")]
    BadRamp(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub f_start_hz: f64,
    pub f_end_hz: f64,
    pub sweep_period_s: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { f_start_hz: 4.2e9, f_end_hz: 4.4e9, sweep_period_s: 0.01 }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), RadaltError> {
        if !(self.f_start_hz.is_finite() && self.f_end_hz.is_finite() && self.sweep_period_s.is_finite()) {
            return Err(RadaltError::BadSweep("non-finite field"));
        }
        if !(self.f_end_hz > self.f_start_hz) {
            return Err(RadaltError::BadSweep("f_end must exceed f_start"));
        }
        if !(self.sweep_period_s > 0.0) {
            return Err(RadaltError::BadSweep("sweep period must be positive"));
        }
        Ok(())
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.f_end_hz - self.f_start_hz
    }

    /// Hz per second.
    pub fn slope(&self) -> f64 {
        self.bandwidth_hz() / self.sweep_period_s
    }

    pub fn beat_frequency(&self, round_trip_s: f64) -> f64 {
        self.slope() * round_trip_s
    }

    pub fn delay_from_beat(&self, beat_hz: f64) -> f64 {
        beat_hz / self.slope()
    }

    /// Height spanned by one beat-frequency bin.
    pub fn range_resolution_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.bandwidth_hz())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseEcho {
    pub round_trip_time_s: f64,
    /// Relative received power, dB.
    pub received_power_db: f64,
    pub source: Origin,
}

impl PulseEcho {
    pub fn genuine(round_trip_time_s: f64, received_power_db: f64) -> Self {
        Self { round_trip_time_s, received_power_db, source: Origin::Genuine }
    }

    pub fn adversarial(round_trip_time_s: f64, received_power_db: f64) -> Self {
        Self { round_trip_time_s, received_power_db, source: Origin::Adversarial }
    }
}

pub fn height_to_delay(h_m: f64) -> Result<f64, RadaltError> {
    if !h_m.is_finite() || h_m < 0.0 {
        return Err(RadaltError::NegativeHeight(h_m));
    }
    Ok(2.0 * h_m / SPEED_OF_LIGHT)
}

pub fn delay_to_height(round_trip_s: f64) -> f64 {
    SPEED_OF_LIGHT * round_trip_s / 2.0
}

/// One sweep's indicated height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadaltReading {
    pub agl_m: f64,
    /// Unquantised beat tone of the selected echo.
    pub beat_frequency_hz: f64,
    pub source: Origin,
}

fn stronger(candidate: &PulseEcho, best: &PulseEcho) -> bool {
    candidate.received_power_db > best.received_power_db
        || (candidate.received_power_db == best.received_power_db
            && candidate.source == Origin::Genuine
            && best.source == Origin::Adversarial)
}

/// Indicated AGL from the strongest echo of one sweep.
pub fn measure(echoes: &[PulseEcho], sweep: &SweepConfig) -> Result<RadaltReading, RadaltError> {
    let mut best: Option<&PulseEcho> = None;
    for e in echoes.iter().filter(|e| e.round_trip_time_s.is_finite() && e.round_trip_time_s >= 0.0) {
        if best.is_none_or(|b| stronger(e, b)) {
            best = Some(e);
        }
    }
    let echo = best.ok_or(RadaltError::NoGroundReturn)?;
    let beat = sweep.beat_frequency(echo.round_trip_time_s);
    let bin = round(beat * sweep.sweep_period_s);
    let quantised_delay = sweep.delay_from_beat(bin / sweep.sweep_period_s);
    Ok(RadaltReading { agl_m: delay_to_height(quantised_delay), beat_frequency_hz: beat, source: echo.source })
}

/// Per-sweep spoofed delays making the ground appear to rise at a fixed rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RampAttackPlan {
    pub start_agl_m: f64,
    pub apparent_descent_rate_mps: f64,
    pub duration_s: f64,
    pub sweep_period_s: f64,
    /// (sweep index since onset, injected round-trip time). Strictly
    /// decreasing while the rate is positive; ends at the first zero.
    pub schedule: Vec<(u64, f64)>,
    /// Number of sweeps the plan covers; sweeps past the end of `schedule`
    /// but before this hold the last (zero) delay.
    pub total_sweeps: u64,
}

impl RampAttackPlan {
    pub fn delay_at(&self, sweep_index: u64) -> Option<f64> {
        if sweep_index >= self.total_sweeps {
            return None;
        }
        match self.schedule.get(sweep_index as usize) {
            Some(&(_, d)) => Some(d),
            None => self.schedule.last().map(|&(_, d)| d),
        }
    }

    /// Time after onset at which the apparent height reaches zero.
    pub fn clip_time_s(&self) -> Option<f64> {
        match self.schedule.last() {
            Some(&(k, d)) if d == 0.0 && self.apparent_descent_rate_mps > 0.0 => Some(k as f64 * self.sweep_period_s),
            _ => None,
        }
    }
}

pub fn craft_ramp(
    start_agl_m: f64,
    apparent_descent_rate_mps: f64,
    duration_s: f64,
    sweep: &SweepConfig,
) -> Result<RampAttackPlan, RadaltError> {
    sweep.validate()?;
    if !duration_s.is_finite() || duration_s <= 0.0 {
        return Err(RadaltError::BadRamp("duration must be positive"));
    }
    if !apparent_descent_rate_mps.is_finite() || apparent_descent_rate_mps < 0.0 {
        return Err(RadaltError::BadRamp("descent rate must be non-negative"));
    }
    height_to_delay(start_agl_m)?;
    let period = sweep.sweep_period_s;
    let total_sweeps = crate::math::floor(duration_s / period + 1e-9) as u64 + 1;
    let mut schedule = Vec::with_capacity(total_sweeps as usize);
    for k in 0..total_sweeps {
        let h = start_agl_m - apparent_descent_rate_mps * (k as f64 * period);
        if h <= 0.0 {
            schedule.push((k, 0.0));
            break;
        }
        schedule.push((k, height_to_delay(h)?));
    }
    Ok(RampAttackPlan {
        start_agl_m,
        apparent_descent_rate_mps,
        duration_s,
        sweep_period_s: period,
        schedule,
        total_sweeps,
    })
}
