//! Glideslope receiver, PAPI lights and the displaced false glideslope.
//!
//! The 90/150 Hz lobe structure is reduced to its observable: DDM is linear
//! in the angular deviation from the captured transmitter's path up to the
//! full-scale angle and saturates beyond. Negative DDM (and negative dots)
//! means the aircraft is below the path, i.e. a fly-up indication.
//!
//! Localizer guidance is not modeled beyond "centered": the attack leaves
//! lateral guidance untouched.

use serde::{Deserialize, Serialize};

use crate::math::{atan2_deg, sqrt, tan_deg};
use crate::units::watts_to_dbm;
use crate::world::{AircraftState, RunwayModel};
use crate::Origin;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IlsError {
    #[error("distance must be non-negative, got {0}")]
    NegativeDistance(f64),
    #[error("invalid transmitter: {0}")]
    BadTransmitter(&'static str),
    #[error("aircraft is past the runway threshold")]
    BehindThreshold,
}

/// DDM at full-scale deflection (two dots).
pub const FULL_SCALE_DDM: f64 = 0.175;
pub const DDM_PER_DOT: f64 = FULL_SCALE_DDM / 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlideslopeTx {
    pub name: alloc::string::String,
    pub antenna_along_track_m: f64,
    pub antenna_elevation_m: f64,
    pub path_angle_deg: f64,
    pub tx_power_w: f64,
    pub legitimacy: Origin,
}

impl GlideslopeTx {
    pub fn validate(&self) -> Result<(), IlsError> {
        if !(self.antenna_along_track_m.is_finite() && self.antenna_elevation_m.is_finite()) {
            return Err(IlsError::BadTransmitter("non-finite antenna position"));
        }
        if !(self.path_angle_deg > 0.0 && self.path_angle_deg < 10.0) {
            return Err(IlsError::BadTransmitter("path angle must be in (0, 10) degrees"));
        }
        if !(self.tx_power_w > 0.0 && self.tx_power_w.is_finite()) {
            return Err(IlsError::BadTransmitter("transmit power must be positive"));
        }
        Ok(())
    }

    /// Height of this transmitter's path above the antenna at the aircraft's
    /// along-track position.
    pub fn path_height_at(&self, along_track_m: f64) -> Option<f64> {
        path_height(self.antenna_along_track_m - along_track_m, self.path_angle_deg).ok()
    }

    /// MSL altitude of this transmitter's path at an along-track position.
    pub fn path_altitude_at(&self, along_track_m: f64) -> Option<f64> {
        self.path_height_at(along_track_m).map(|h| h + self.antenna_elevation_m)
    }
}

/// Height of a straight glide path at a horizontal distance from its antenna.
pub fn path_height(distance_m: f64, angle_deg: f64) -> Result<f64, IlsError> {
    if !distance_m.is_finite() || distance_m < 0.0 {
        return Err(IlsError::NegativeDistance(distance_m));
    }
    Ok(distance_m * tan_deg(angle_deg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GsReceiverConfig {
    pub frequency_hz: f64,
    pub sensitivity_dbm: f64,
    pub max_range_m: f64,
    /// Angular deviation giving full-scale DDM.
    pub full_scale_deg: f64,
}

impl Default for GsReceiverConfig {
    fn default() -> Self {
        Self { frequency_hz: 332.0e6, sensitivity_dbm: -95.0, max_range_m: 18_520.0, full_scale_deg: 0.7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GsIndication {
    pub ddm: f64,
    pub deviation_dots: f64,
    /// Index into the transmitter list of the captured station.
    pub captured: Option<usize>,
    pub captured_origin: Option<Origin>,
    pub valid: bool,
}

impl GsIndication {
    pub const INVALID: Self =
        Self { ddm: 0.0, deviation_dots: 0.0, captured: None, captured_origin: None, valid: false };

    pub fn is_centered(&self, tolerance_dots: f64) -> bool {
        self.valid && self.deviation_dots.abs() <= tolerance_dots
    }
}

/// Free-space path loss in dB.
pub fn free_space_loss_db(distance_m: f64, frequency_hz: f64) -> f64 {
    20.0 * crate::math::log10(distance_m) + 20.0 * crate::math::log10(frequency_hz) - 147.552_168_5
}

struct Geometry {
    horizontal_m: f64,
    height_m: f64,
    slant_m: f64,
}

fn geometry(aircraft: &AircraftState, tx: &GlideslopeTx) -> Geometry {
    let horizontal_m = tx.antenna_along_track_m - aircraft.along_track_m();
    let height_m = aircraft.altitude_msl_m - tx.antenna_elevation_m;
    let dy = aircraft.position_m[1];
    Geometry { horizontal_m, height_m, slant_m: sqrt(horizontal_m * horizontal_m + dy * dy + height_m * height_m) }
}

/// Received power in dBm, or `None` when the aircraft is outside the
/// transmitter's front course or service range.
pub fn received_power_dbm(aircraft: &AircraftState, tx: &GlideslopeTx, rx: &GsReceiverConfig) -> Option<f64> {
    let g = geometry(aircraft, tx);
    if g.horizontal_m <= 0.0 || g.slant_m > rx.max_range_m {
        return None;
    }
    let p = watts_to_dbm(tx.tx_power_w) - free_space_loss_db(g.slant_m.max(1.0), rx.frequency_hz);
    (p >= rx.sensitivity_dbm).then_some(p)
}

/// Angle of the aircraft above the transmitter's path, degrees. Exactly
/// zero when the aircraft height equals `path_height` at its distance.
fn deviation_deg(g: &Geometry, path_angle_deg: f64) -> f64 {
    let t = tan_deg(path_angle_deg);
    let d = g.horizontal_m;
    atan2_deg(g.height_m - d * t, d + g.height_m * t)
}

/// Capture the strongest in-range transmitter and report the deviation
/// from its path. Equal powers resolve to the genuine station.
pub fn receive(aircraft: &AircraftState, transmitters: &[GlideslopeTx], rx: &GsReceiverConfig) -> GsIndication {
    let mut best: Option<(usize, f64)> = None;
    for (i, tx) in transmitters.iter().enumerate() {
        let Some(p) = received_power_dbm(aircraft, tx, rx) else { continue };
        let better = match best {
            None => true,
            Some((j, bp)) => {
                p > bp || (p == bp && tx.legitimacy == Origin::Genuine && transmitters[j].legitimacy != Origin::Genuine)
            }
        };
        if better {
            best = Some((i, p));
        }
    }
    let Some((i, _)) = best else { return GsIndication::INVALID };
    let tx = &transmitters[i];
    let dev = deviation_deg(&geometry(aircraft, tx), tx.path_angle_deg);
    let ddm = (dev / rx.full_scale_deg * FULL_SCALE_DDM).clamp(-FULL_SCALE_DDM, FULL_SCALE_DDM);
    GsIndication {
        ddm,
        deviation_dots: (ddm / DDM_PER_DOT).clamp(-2.0, 2.0),
        captured: Some(i),
        captured_origin: Some(tx.legitimacy),
        valid: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PapiIndication {
    pub whites: u8,
}

impl PapiIndication {
    pub fn reds(&self) -> u8 {
        4 - self.whites
    }
}

/// Light transition angles relative to the nominal angle, ascending.
/// Defaults: 0 whites below nominal-0.5, then -0.2, +0.2, +0.5 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PapiConfig {
    pub transitions_deg: [f64; 4],
}

impl Default for PapiConfig {
    fn default() -> Self {
        Self { transitions_deg: [-0.5, -0.2, 0.2, 0.5] }
    }
}

/// Approach angle to the touchdown zone, degrees.
pub fn approach_angle_deg(aircraft: &AircraftState, runway: &RunwayModel) -> Result<f64, IlsError> {
    if aircraft.along_track_m() > runway.threshold_along_track_m {
        return Err(IlsError::BehindThreshold);
    }
    let dx = runway.touchdown_along_track_m() - aircraft.along_track_m();
    Ok(atan2_deg(aircraft.altitude_msl_m - runway.elevation_m, dx))
}

pub fn papi(
    aircraft: &AircraftState,
    runway: &RunwayModel,
    nominal_angle_deg: f64,
    cfg: &PapiConfig,
) -> Result<PapiIndication, IlsError> {
    let angle = approach_angle_deg(aircraft, runway)?;
    let whites = cfg.transitions_deg.iter().filter(|&&off| angle >= nominal_angle_deg + off).count() as u8;
    Ok(PapiIndication { whites })
}
