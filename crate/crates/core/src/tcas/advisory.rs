use serde::{Deserialize, Serialize};

use crate::units::{m_to_ft, mps_to_fpm};
use crate::world::AircraftState;

use super::track::{IntruderTrack, TrackId};

/// Operating mode selected by the crew.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TcasMode {
    Standby,
    TaOnly,
    TaRa,
}

impl TcasMode {
    pub fn surveils(self) -> bool {
        self != Self::Standby
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Standby => "Standby",
            Self::TaOnly => "TA-Only",
            Self::TaRa => "TA/RA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AdvisoryLevel {
    Ta,
    Ra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RaSense {
    Climb,
    Descend,
    /// Own rate already satisfies the required sense.
    MaintainVs,
}

impl RaSense {
    /// Sense an RA-capable intruder must pick once it learns ours.
    pub fn complement(self) -> Self {
        match self {
            Self::Climb => Self::Descend,
            Self::Descend | Self::MaintainVs => Self::Climb,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Advisory {
    pub level: AdvisoryLevel,
    pub track: TrackId,
    pub time_s: f64,
    pub tau_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sense: Option<RaSense>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commanded_rate_fpm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub tau_ta_s: f64,
    pub tau_ra_s: f64,
    pub ta_vertical_ft: f64,
    pub ra_vertical_ft: f64,
    pub ra_rate_fpm: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { tau_ta_s: 48.0, tau_ra_s: 30.0, ta_vertical_ft: 1200.0, ra_vertical_ft: 600.0, ra_rate_fpm: 1500.0 }
    }
}

/// Range over closure rate; infinite when the range is opening.
pub fn tau(range_m: f64, closure_mps: f64) -> f64 {
    if closure_mps > 0.0 {
        range_m / closure_mps
    } else {
        f64::INFINITY
    }
}

/// Advisory warranted by one track, ignoring edge-triggering.
///
/// An RA is only possible for a track that already produced a TA and that
/// reports altitude. A track without altitude can reach TA at most.
pub fn assess(track: &IntruderTrack, own: &AircraftState, mode: TcasMode, thr: &Thresholds) -> Option<Advisory> {
    if !mode.surveils() {
        return None;
    }
    let t = tau(track.slant_range_m, track.closure_rate_mps);
    if t > thr.tau_ta_s {
        return None;
    }
    let rel = track.relative_altitude_ft;
    if rel.is_some_and(|r| r.abs() > thr.ta_vertical_ft) {
        return None;
    }
    let ta = Advisory {
        level: AdvisoryLevel::Ta,
        track: track.id,
        time_s: own.time_s,
        tau_s: t,
        sense: None,
        commanded_rate_fpm: None,
    };
    let Some(rel) = rel else { return Some(ta) };
    if mode != TcasMode::TaRa || !track.ta_issued || t > thr.tau_ra_s || rel.abs() > thr.ra_vertical_ft {
        return Some(ta);
    }
    let own_fpm = mps_to_fpm(own.vertical_speed_mps);
    let sense = match track.intruder_intent {
        Some(theirs) => theirs.complement(),
        None if rel < 0.0 => RaSense::Climb,
        None if rel > 0.0 => RaSense::Descend,
        None if own_fpm >= 0.0 => RaSense::Climb,
        None => RaSense::Descend,
    };
    let sense = match sense {
        RaSense::Climb if own_fpm >= thr.ra_rate_fpm => RaSense::MaintainVs,
        RaSense::Descend if own_fpm <= -thr.ra_rate_fpm => RaSense::MaintainVs,
        s => s,
    };
    let commanded = match sense {
        RaSense::Climb => thr.ra_rate_fpm,
        RaSense::Descend => -thr.ra_rate_fpm,
        RaSense::MaintainVs => own_fpm,
    };
    Some(Advisory { level: AdvisoryLevel::Ra, sense: Some(sense), commanded_rate_fpm: Some(commanded), ..ta })
}

/// Most severe advisory over all tracks; smaller tau breaks ties.
pub fn advise<'a>(
    tracks: impl IntoIterator<Item = &'a IntruderTrack>,
    own: &AircraftState,
    mode: TcasMode,
    thr: &Thresholds,
) -> Option<Advisory> {
    tracks
        .into_iter()
        .filter_map(|tr| assess(tr, own, mode, thr))
        .max_by(|a, b| a.level.cmp(&b.level).then(b.tau_s.total_cmp(&a.tau_s)))
}

/// Vertical speed an own-ship flying an RA should hold.
pub fn ra_target_vs_mps(advisory: &Advisory, own: &AircraftState) -> f64 {
    advisory.commanded_rate_fpm.map_or(own.vertical_speed_mps, crate::units::fpm_to_mps)
}

/// Relative altitude of `intruder_alt_m` as seen from `own`, in feet.
pub fn relative_altitude_ft(own: &AircraftState, intruder_alt_m: f64) -> f64 {
    m_to_ft(intruder_alt_m - own.altitude_msl_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tcas::message::IcaoAddress;

    fn own(vs_fpm: f64) -> AircraftState {
        let mut s = AircraftState::new([0.0, 0.0], 3000.0, crate::units::kt_to_mps(250.0));
        s.vertical_speed_mps = crate::units::fpm_to_mps(vs_fpm);
        s
    }

    fn track(range: f64, closure: f64, rel: Option<f64>, ta_issued: bool) -> IntruderTrack {
        let mut t = IntruderTrack::new(TrackId::Icao(IcaoAddress::new(7).unwrap()), 0.0, range, 0.0, rel);
        t.closure_rate_mps = closure;
        t.ta_issued = ta_issued;
        t
    }

    #[test]
    fn tau_thresholds() {
        let thr = Thresholds::default();
        let o = own(0.0);
        assert!(assess(&track(10_000.0, 200.0, Some(-500.0), false), &o, TcasMode::TaRa, &thr).is_none());
        let a = assess(&track(9_000.0, 200.0, Some(-500.0), false), &o, TcasMode::TaRa, &thr).unwrap();
        assert_eq!(a.level, AdvisoryLevel::Ta);
        assert_eq!(a.tau_s, 45.0);
        // Inside the RA tau but no prior TA: still only a TA.
        let a = assess(&track(5_000.0, 200.0, Some(-500.0), false), &o, TcasMode::TaRa, &thr).unwrap();
        assert_eq!(a.level, AdvisoryLevel::Ta);
        let a = assess(&track(5_000.0, 200.0, Some(-500.0), true), &o, TcasMode::TaRa, &thr).unwrap();
        assert_eq!(a.level, AdvisoryLevel::Ra);
        assert_eq!(a.sense, Some(RaSense::Climb));
        assert_eq!(a.commanded_rate_fpm, Some(1500.0));
    }

    #[test]
    fn vertical_bands() {
        let thr = Thresholds::default();
        let o = own(0.0);
        assert!(assess(&track(5_000.0, 200.0, Some(1300.0), true), &o, TcasMode::TaRa, &thr).is_none());
        let a = assess(&track(5_000.0, 200.0, Some(800.0), true), &o, TcasMode::TaRa, &thr).unwrap();
        assert_eq!(a.level, AdvisoryLevel::Ta);
        let a = assess(&track(5_000.0, 200.0, Some(400.0), true), &o, TcasMode::TaRa, &thr).unwrap();
        assert_eq!(a.sense, Some(RaSense::Descend));
    }

    #[test]
    fn non_altitude_reporting_caps_at_ta() {
        let thr = Thresholds::default();
        let a = assess(&track(1_000.0, 200.0, None, true), &own(0.0), TcasMode::TaRa, &thr).unwrap();
        assert_eq!(a.level, AdvisoryLevel::Ta);
    }

    #[test]
    fn modes() {
        let thr = Thresholds::default();
        let tr = track(5_000.0, 200.0, Some(-500.0), true);
        assert!(assess(&tr, &own(0.0), TcasMode::Standby, &thr).is_none());
        assert_eq!(assess(&tr, &own(0.0), TcasMode::TaOnly, &thr).unwrap().level, AdvisoryLevel::Ta);
    }

    #[test]
    fn coordination_and_maintain() {
        let thr = Thresholds::default();
        let mut tr = track(5_000.0, 200.0, Some(-500.0), true);
        tr.intruder_intent = Some(RaSense::Descend);
        assert_eq!(assess(&tr, &own(0.0), TcasMode::TaRa, &thr).unwrap().sense, Some(RaSense::Climb));
        tr.intruder_intent = Some(RaSense::Climb);
        assert_eq!(assess(&tr, &own(0.0), TcasMode::TaRa, &thr).unwrap().sense, Some(RaSense::Descend));
        tr.intruder_intent = None;
        let a = assess(&tr, &own(2000.0), TcasMode::TaRa, &thr).unwrap();
        assert_eq!(a.sense, Some(RaSense::MaintainVs));
        assert!((a.commanded_rate_fpm.unwrap() - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn opening_range_is_quiet() {
        assert_eq!(tau(100.0, -5.0), f64::INFINITY);
        let thr = Thresholds::default();
        assert!(assess(&track(100.0, -5.0, Some(0.0), true), &own(0.0), TcasMode::TaRa, &thr).is_none());
    }

    #[test]
    fn most_severe_wins() {
        let thr = Thresholds::default();
        let a = track(9_000.0, 200.0, Some(0.0), false);
        let mut b = track(5_000.0, 200.0, Some(-100.0), true);
        b.id = TrackId::Anonymous(3);
        let adv = advise([&a, &b], &own(0.0), TcasMode::TaRa, &thr).unwrap();
        assert_eq!(adv.level, AdvisoryLevel::Ra);
        assert_eq!(adv.track, TrackId::Anonymous(3));
    }
}
