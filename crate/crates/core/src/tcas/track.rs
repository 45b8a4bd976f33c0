use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::math::{atan2_deg, distance, log10, wrap_deg, Vec3};
use crate::rng::SimRng;
use crate::units::m_to_ft;
use crate::world::AircraftState;
use crate::{Origin, SPEED_OF_LIGHT};

use super::advisory::{AdvisoryLevel, RaSense};
use super::message::{IcaoAddress, MessageKind, SurveillanceMessage};
use super::TcasError;

pub const INTERROGATION_HZ: f64 = 1030e6;
pub const REPLY_HZ: f64 = 1090e6;

/// Free-space path loss; ranges under 1 m are clamped.
pub fn path_loss_db(range_m: f64, frequency_hz: f64) -> f64 {
    let d = range_m.max(1.0);
    20.0 * log10(4.0 * core::f64::consts::PI * d * frequency_hz / SPEED_OF_LIGHT)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "id")]
pub enum TrackId {
    Icao(IcaoAddress),
    Anonymous(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntruderTrack {
    pub id: TrackId,
    pub slant_range_m: f64,
    /// Relative to own heading, degrees in (-180, 180].
    pub bearing_deg: f64,
    /// Intruder minus own; `None` for non-altitude-reporting targets.
    pub relative_altitude_ft: Option<f64>,
    /// Positive while the range is shrinking.
    pub closure_rate_mps: f64,
    pub last_update_s: f64,
    pub updates: u32,
    pub ta_issued: bool,
    /// Highest level announced for this track so far.
    pub advisory_level: Option<AdvisoryLevel>,
    pub intruder_intent: Option<RaSense>,
}

impl IntruderTrack {
    pub fn new(id: TrackId, t: f64, slant_range_m: f64, bearing_deg: f64, relative_altitude_ft: Option<f64>) -> Self {
        Self {
            id,
            slant_range_m,
            bearing_deg,
            relative_altitude_ft,
            closure_rate_mps: 0.0,
            last_update_s: t,
            updates: 1,
            ta_issued: false,
            advisory_level: None,
            intruder_intent: None,
        }
    }
}

/// An all-call as heard by one responder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllCall {
    pub step: u8,
    pub steps: u8,
    /// `None` when the step arrived below the responder's sensitivity.
    pub received_dbm: Option<f64>,
    pub time_s: f64,
}

impl AllCall {
    pub fn is_last(&self) -> bool {
        self.step + 1 == self.steps
    }
}

/// Anything that answers on 1090 MHz.
pub trait Transponder {
    fn squitter(&mut self, t: f64) -> Option<SurveillanceMessage>;
    fn reply_mode_s(&mut self, interrogation: &SurveillanceMessage) -> Option<SurveillanceMessage>;
    /// Where interrogations are received, for the link budget.
    fn receiver_position(&self) -> Vec3;
    fn sensitivity_dbm(&self) -> f64;
    fn reply_mode_c(&mut self, call: &AllCall, rng: &mut SimRng) -> Option<SurveillanceMessage>;
}

/// Genuine transponder-equipped traffic flying a fixed state.
#[derive(Debug, Clone, PartialEq)]
pub struct Traffic {
    pub icao: IcaoAddress,
    pub state: AircraftState,
    pub mode_s: bool,
    pub reports_altitude: bool,
    pub sensitivity_dbm: f64,
    pub tx_power_dbm: f64,
    pub ra_intent: Option<RaSense>,
}

impl Traffic {
    pub fn new(icao: IcaoAddress, state: AircraftState) -> Self {
        Self {
            icao,
            state,
            mode_s: true,
            reports_altitude: true,
            sensitivity_dbm: -74.0,
            tx_power_dbm: 54.0,
            ra_intent: None,
        }
    }

    fn reply(&self, kind: MessageKind, t: f64) -> SurveillanceMessage {
        let pos = self.state.position3();
        let mut m = SurveillanceMessage::new(kind, t, Origin::Genuine, pos);
        m.tx_power_dbm = self.tx_power_dbm;
        m.apparent_position_m = Some(pos);
        m.altitude_ft = self.reports_altitude.then(|| m_to_ft(self.state.altitude_msl_m));
        m
    }
}

impl Transponder for Traffic {
    fn squitter(&mut self, t: f64) -> Option<SurveillanceMessage> {
        if !self.mode_s {
            return None;
        }
        let mut m = SurveillanceMessage::new(MessageKind::Squitter, t, Origin::Genuine, self.state.position3());
        m.icao = Some(self.icao);
        m.tx_power_dbm = self.tx_power_dbm;
        Some(m)
    }

    fn reply_mode_s(&mut self, q: &SurveillanceMessage) -> Option<SurveillanceMessage> {
        if !self.mode_s || q.icao != Some(self.icao) {
            return None;
        }
        let mut m = self.reply(MessageKind::ModeSReply, q.timestamp_s);
        m.icao = Some(self.icao);
        m.ra_intent = self.ra_intent;
        Some(m)
    }

    fn receiver_position(&self) -> Vec3 {
        self.state.position3()
    }

    fn sensitivity_dbm(&self) -> f64 {
        self.sensitivity_dbm
    }

    fn reply_mode_c(&mut self, call: &AllCall, _rng: &mut SimRng) -> Option<SurveillanceMessage> {
        if self.mode_s || call.received_dbm.is_none() {
            return None;
        }
        let mut m = self.reply(MessageKind::ModeCReply, call.time_s);
        m.step = Some(call.step);
        Some(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrackerConfig {
    pub stale_after_s: f64,
    /// How long an address heard by squitter stays on the interrogation list.
    pub squitter_memory_s: f64,
    /// Half-width of the uniform bearing error.
    pub bearing_error_deg: f64,
    pub association_gate_m: f64,
    pub association_gate_ft: f64,
    pub interrogation_power_dbm: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            stale_after_s: 6.0,
            squitter_memory_s: 10.0,
            bearing_error_deg: 10.0,
            association_gate_m: 1000.0,
            association_gate_ft: 500.0,
            interrogation_power_dbm: 54.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveillanceStats {
    pub interrogations: u32,
    pub replies: u32,
    pub malformed: u32,
    pub duplicates_ignored: u32,
}

/// Evenly spaced whisper-shout powers, weakest first.
pub fn whisper_shout_steps(lo_dbm: f64, hi_dbm: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![hi_dbm],
        _ => (0..n).map(|i| lo_dbm + (hi_dbm - lo_dbm) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, Default)]
pub struct Tracker {
    pub config: TrackerConfig,
    tracks: Vec<IntruderTrack>,
    known: Vec<(IcaoAddress, f64)>,
    next_anonymous: u32,
    pub stats: SurveillanceStats,
}

impl Tracker {
    pub fn new(config: TrackerConfig) -> Self {
        Self { config, ..Self::default() }
    }

    pub fn tracks(&self) -> &[IntruderTrack] {
        &self.tracks
    }

    pub fn tracks_mut(&mut self) -> &mut [IntruderTrack] {
        &mut self.tracks
    }

    pub fn track(&self, id: TrackId) -> Option<&IntruderTrack> {
        self.tracks.iter().find(|t| t.id == id)
    }

    pub fn clear(&mut self) {
        self.tracks.clear();
        self.known.clear();
    }

    /// Drop tracks not refreshed within the staleness window.
    pub fn prune(&mut self, t: f64) {
        let stale = self.config.stale_after_s;
        self.tracks.retain(|tr| t - tr.last_update_s <= stale);
        let mem = self.config.squitter_memory_s;
        self.known.retain(|&(_, heard)| t - heard <= mem);
    }

    fn hear(&mut self, id: IcaoAddress, t: f64) {
        match self.known.iter_mut().find(|(k, _)| *k == id) {
            Some(entry) => entry.1 = t,
            None => self.known.push((id, t)),
        }
    }

    fn accept(&mut self, m: &SurveillanceMessage) -> bool {
        if m.validate().is_err() {
            self.stats.malformed += 1;
            return false;
        }
        true
    }

    fn observe(&self, own: &AircraftState, m: &SurveillanceMessage, rng: &mut SimRng) -> (f64, f64, Option<f64>) {
        // accept() guarantees a position on replies
        let pos = m.apparent_position_m.unwrap_or(m.emitter_position_m);
        let own_p = own.position3();
        let range = distance(pos, own_p);
        let true_bearing = atan2_deg(pos[1] - own_p[1], pos[0] - own_p[0]) - own.heading_deg;
        let e = self.config.bearing_error_deg;
        let noise = if e > 0.0 { rng.random_range(-e..=e) } else { 0.0 };
        let rel = m.altitude_ft.map(|a| a - m_to_ft(own.altitude_msl_m));
        (range, wrap_deg(true_bearing + noise), rel)
    }

    fn update(&mut self, id: TrackId, t: f64, range: f64, bearing: f64, rel: Option<f64>, intent: Option<RaSense>) {
        match self.tracks.iter_mut().find(|tr| tr.id == id) {
            Some(tr) => {
                let dt = t - tr.last_update_s;
                if dt > 0.0 {
                    tr.closure_rate_mps = (tr.slant_range_m - range) / dt;
                }
                tr.slant_range_m = range;
                tr.bearing_deg = bearing;
                tr.relative_altitude_ft = rel;
                tr.last_update_s = t;
                tr.updates += 1;
                tr.intruder_intent = intent;
            }
            None => {
                let mut tr = IntruderTrack::new(id, t, range, bearing, rel);
                tr.intruder_intent = intent;
                self.tracks.push(tr);
            }
        }
    }

    /// Anonymous track a Mode C reply belongs to, creating one if none gates.
    fn associate(&mut self, t: f64, range: f64, rel: Option<f64>, taken: &[TrackId]) -> TrackId {
        let gate_m = self.config.association_gate_m;
        let gate_ft = self.config.association_gate_ft;
        let best = self
            .tracks
            .iter()
            .filter(|tr| matches!(tr.id, TrackId::Anonymous(_)) && !taken.contains(&tr.id))
            .filter_map(|tr| {
                let predicted = tr.slant_range_m - tr.closure_rate_mps * (t - tr.last_update_s);
                let dr = (predicted - range).abs();
                let alt_ok = match (tr.relative_altitude_ft, rel) {
                    (Some(a), Some(b)) => (a - b).abs() <= gate_ft,
                    _ => true,
                };
                (dr <= gate_m && alt_ok).then_some((tr.id, dr))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((id, _)) => id,
            None => {
                let id = TrackId::Anonymous(self.next_anonymous);
                self.next_anonymous += 1;
                id
            }
        }
    }

    /// One Mode S surveillance second: listen, interrogate each known
    /// address once, fold replies into tracks.
    pub fn mode_s_cycle(
        &mut self,
        own: &AircraftState,
        responders: &mut [&mut dyn Transponder],
        rng: &mut SimRng,
        t: f64,
    ) -> Vec<SurveillanceMessage> {
        let mut log = Vec::new();
        for r in responders.iter_mut() {
            if let Some(sq) = r.squitter(t) {
                if self.accept(&sq) {
                    if let Some(id) = sq.icao {
                        self.hear(id, t);
                    }
                }
                log.push(sq);
            }
        }
        for tr in &self.tracks {
            if let TrackId::Icao(id) = tr.id {
                if !self.known.iter().any(|(k, _)| *k == id) {
                    self.known.push((id, tr.last_update_s));
                }
            }
        }
        let mut ids: Vec<IcaoAddress> = self.known.iter().map(|(k, _)| *k).collect();
        ids.sort_unstable();
        for id in ids {
            let mut q = SurveillanceMessage::new(MessageKind::ModeSInterrogation, t, Origin::Genuine, own.position3());
            q.icao = Some(id);
            q.tx_power_dbm = self.config.interrogation_power_dbm;
            self.stats.interrogations += 1;
            log.push(q.clone());
            let mut best: Option<(f64, f64, Option<f64>, Option<RaSense>)> = None;
            let mut answered = 0u32;
            for r in responders.iter_mut() {
                let Some(reply) = r.reply_mode_s(&q) else { continue };
                self.stats.replies += 1;
                let ok = self.accept(&reply) && reply.icao == Some(id);
                if ok {
                    answered += 1;
                    let (range, bearing, rel) = self.observe(own, &reply, rng);
                    if best.is_none_or(|b| range < b.0) {
                        best = Some((range, bearing, rel, reply.ra_intent));
                    }
                }
                log.push(reply);
            }
            self.stats.duplicates_ignored += answered.saturating_sub(1);
            if let Some((range, bearing, rel, intent)) = best {
                self.update(TrackId::Icao(id), t, range, bearing, rel, intent);
            }
        }
        self.prune(t);
        log
    }

    /// One whisper-shout Mode C sequence. `steps_dbm` must be strictly
    /// increasing; every responder answers at most once.
    pub fn mode_c_cycle(
        &mut self,
        own: &AircraftState,
        responders: &mut [&mut dyn Transponder],
        steps_dbm: &[f64],
        rng: &mut SimRng,
        t: f64,
    ) -> Result<Vec<SurveillanceMessage>, TcasError> {
        if steps_dbm.is_empty()
            || steps_dbm.len() > u8::MAX as usize
            || steps_dbm.iter().any(|p| !p.is_finite())
            || steps_dbm.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(TcasError::BadSteps);
        }
        let n = steps_dbm.len() as u8;
        let own_p = own.position3();
        let mut replied = alloc::vec![false; responders.len()];
        let mut log = Vec::new();
        let mut taken: Vec<TrackId> = Vec::new();
        for (i, &power) in steps_dbm.iter().enumerate() {
            let step = i as u8;
            if i > 0 {
                let mut s = SurveillanceMessage::new(MessageKind::Suppression, t, Origin::Genuine, own_p);
                s.tx_power_dbm = steps_dbm[i - 1];
                s.step = Some(step);
                log.push(s);
            }
            let mut call = SurveillanceMessage::new(MessageKind::AllCall, t, Origin::Genuine, own_p);
            call.tx_power_dbm = power;
            call.step = Some(step);
            log.push(call);
            self.stats.interrogations += 1;
            for (j, r) in responders.iter_mut().enumerate() {
                if replied[j] {
                    continue;
                }
                let rx = power - path_loss_db(distance(own_p, r.receiver_position()), INTERROGATION_HZ);
                let heard =
                    AllCall { step, steps: n, received_dbm: (rx >= r.sensitivity_dbm()).then_some(rx), time_s: t };
                let Some(reply) = r.reply_mode_c(&heard, rng) else { continue };
                replied[j] = true;
                self.stats.replies += 1;
                if self.accept(&reply) && reply.kind == MessageKind::ModeCReply {
                    let (range, bearing, rel) = self.observe(own, &reply, rng);
                    let id = self.associate(t, range, rel, &taken);
                    taken.push(id);
                    self.update(id, t, range, bearing, rel, None);
                }
                log.push(reply);
            }
        }
        self.prune(t);
        Ok(log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};
    use crate::units::{ft_to_m, kt_to_mps, nmi_to_m};
    use proptest::prelude::*;

    fn own() -> AircraftState {
        AircraftState::new([0.0, 0.0], ft_to_m(30_000.0), kt_to_mps(450.0))
    }

    fn traffic(id: u32, x: f64, y: f64, alt_ft: f64) -> Traffic {
        let mut s = AircraftState::new([x, y], ft_to_m(alt_ft), kt_to_mps(450.0));
        s.heading_deg = 180.0;
        Traffic::new(IcaoAddress::new(id).unwrap(), s)
    }

    #[test]
    fn path_loss_one_nmi() {
        // 20 log10(4 pi d f / c) at 1852 m, 1030 MHz
        let expected = 20.0 * (4.0 * core::f64::consts::PI * 1852.0 * 1030e6 / 299_792_458.0_f64).log10();
        assert!((path_loss_db(1852.0, INTERROGATION_HZ) - expected).abs() < 1e-12);
        assert!((expected - 98.06).abs() < 0.01);
    }

    #[test]
    fn empty_sky_sends_nothing() {
        let mut tr = Tracker::default();
        let mut rng = stream(1, Stream::Avionics);
        let log = tr.mode_s_cycle(&own(), &mut [], &mut rng, 0.0);
        assert!(log.is_empty());
        assert!(tr.tracks().is_empty());
    }

    #[test]
    fn one_squitter_one_track() {
        let mut tr = Tracker::default();
        let mut rng = stream(1, Stream::Avionics);
        let mut a = traffic(0xABC, 20_000.0, 0.0, 30_500.0);
        let log = tr.mode_s_cycle(&own(), &mut [&mut a], &mut rng, 0.0);
        let kinds: Vec<_> = log.iter().map(|m| m.kind).collect();
        assert_eq!(kinds, [MessageKind::Squitter, MessageKind::ModeSInterrogation, MessageKind::ModeSReply]);
        assert_eq!(tr.tracks().len(), 1);
        let t = &tr.tracks()[0];
        assert!((t.slant_range_m - distance(own().position3(), a.state.position3())).abs() < 1e-9);
        assert!((t.relative_altitude_ft.unwrap() - 500.0).abs() < 1e-6);
        assert!(t.bearing_deg.abs() <= 10.0 + 1e-9);
    }

    #[test]
    fn closure_from_successive_ranges() {
        let mut tr = Tracker::default();
        let mut rng = stream(2, Stream::Avionics);
        let mut a = traffic(1, 20_000.0, 0.0, 30_000.0);
        tr.mode_s_cycle(&own(), &mut [&mut a], &mut rng, 0.0);
        a.state.position_m[0] -= 250.0;
        tr.mode_s_cycle(&own(), &mut [&mut a], &mut rng, 1.0);
        assert!((tr.tracks()[0].closure_rate_mps - 250.0).abs() < 1e-6);
    }

    #[test]
    fn stale_tracks_drop() {
        let mut tr = Tracker::default();
        let mut rng = stream(3, Stream::Avionics);
        let mut a = traffic(1, 20_000.0, 0.0, 30_000.0);
        tr.mode_s_cycle(&own(), &mut [&mut a], &mut rng, 0.0);
        a.mode_s = false;
        for t in 1..=6 {
            tr.mode_s_cycle(&own(), &mut [&mut a], &mut rng, t as f64);
            assert_eq!(tr.tracks().len(), 1);
        }
        tr.mode_s_cycle(&own(), &mut [&mut a], &mut rng, 7.0);
        assert!(tr.tracks().is_empty());
    }

    #[test]
    fn duplicate_address_keeps_nearest() {
        let mut tr = Tracker::default();
        let mut rng = stream(4, Stream::Avionics);
        let mut near = traffic(9, 10_000.0, 0.0, 30_000.0);
        let mut far = traffic(9, 40_000.0, 0.0, 30_000.0);
        tr.mode_s_cycle(&own(), &mut [&mut far, &mut near], &mut rng, 0.0);
        assert_eq!(tr.tracks().len(), 1);
        assert!((tr.tracks()[0].slant_range_m - 10_000.0).abs() < 1e-6);
        assert_eq!(tr.stats.duplicates_ignored, 1);
    }

    #[test]
    fn malformed_reply_counted_and_dropped() {
        struct Broken;
        impl Transponder for Broken {
            fn squitter(&mut self, t: f64) -> Option<SurveillanceMessage> {
                let mut m = SurveillanceMessage::new(MessageKind::Squitter, t, Origin::Adversarial, [0.0; 3]);
                m.icao = IcaoAddress::new(5);
                Some(m)
            }
            fn reply_mode_s(&mut self, q: &SurveillanceMessage) -> Option<SurveillanceMessage> {
                let mut m =
                    SurveillanceMessage::new(MessageKind::ModeSReply, q.timestamp_s, Origin::Adversarial, [0.0; 3]);
                m.icao = q.icao;
                Some(m)
            }
            fn receiver_position(&self) -> Vec3 {
                [0.0; 3]
            }
            fn sensitivity_dbm(&self) -> f64 {
                -90.0
            }
            fn reply_mode_c(&mut self, _: &AllCall, _: &mut SimRng) -> Option<SurveillanceMessage> {
                None
            }
        }
        let mut tr = Tracker::default();
        let mut rng = stream(5, Stream::Avionics);
        tr.mode_s_cycle(&own(), &mut [&mut Broken], &mut rng, 0.0);
        assert_eq!(tr.stats.malformed, 1);
        assert!(tr.tracks().is_empty());
    }

    #[test]
    fn mode_c_rejects_bad_steps() {
        let mut tr = Tracker::default();
        let mut rng = stream(6, Stream::Avionics);
        assert_eq!(tr.mode_c_cycle(&own(), &mut [], &[], &mut rng, 0.0), Err(TcasError::BadSteps));
        assert_eq!(tr.mode_c_cycle(&own(), &mut [], &[40.0, 40.0], &mut rng, 0.0), Err(TcasError::BadSteps));
    }

    #[test]
    fn whisper_shout_near_answers_first() {
        let mut tr = Tracker::default();
        let mut rng = stream(7, Stream::Avionics);
        let mut near = traffic(1, nmi_to_m(2.0), 0.0, 30_000.0);
        let mut far = traffic(2, nmi_to_m(20.0), 0.0, 30_000.0);
        near.mode_s = false;
        far.mode_s = false;
        let steps = whisper_shout_steps(24.0, 54.0, 24);
        let log = tr.mode_c_cycle(&own(), &mut [&mut far, &mut near], &steps, &mut rng, 0.0).unwrap();
        let replies: Vec<_> = log.iter().filter(|m| m.kind == MessageKind::ModeCReply).collect();
        assert_eq!(replies.len(), 2);
        assert!(replies[0].step < replies[1].step);
        assert!((replies[0].emitter_position_m[0] - nmi_to_m(2.0)).abs() < 1e-9);
        assert_eq!(tr.tracks().len(), 2);
        assert!(tr.tracks().iter().all(|t| matches!(t.id, TrackId::Anonymous(_))));
    }

    #[test]
    fn mode_c_association_persists() {
        let mut tr = Tracker::default();
        let mut rng = stream(8, Stream::Avionics);
        let mut a = traffic(1, 15_000.0, 0.0, 31_000.0);
        let mut b = traffic(2, -25_000.0, 0.0, 29_000.0);
        a.mode_s = false;
        b.mode_s = false;
        let steps = whisper_shout_steps(30.0, 54.0, 12);
        for k in 0..5 {
            a.state.position_m[0] = 15_000.0 - 200.0 * k as f64;
            tr.mode_c_cycle(&own(), &mut [&mut a, &mut b], &steps, &mut rng, k as f64).unwrap();
        }
        assert_eq!(tr.tracks().len(), 2);
        let ta = tr.tracks().iter().find(|t| t.relative_altitude_ft.unwrap() > 0.0).unwrap();
        assert_eq!(ta.updates, 5);
        let dz = ft_to_m(1000.0);
        let slant = |x: f64| (x * x + dz * dz).sqrt();
        assert!((ta.closure_rate_mps - (slant(14_400.0) - slant(14_200.0))).abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn whisper_shout_one_reply_per_audible_aircraft(
            fleet in proptest::collection::vec((-150_000.0f64..150_000.0, -150_000.0f64..150_000.0), 0..12),
            seed in any::<u64>(),
        ) {
            let mut planes: Vec<Traffic> = fleet
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| { let mut p = traffic(i as u32 + 1, x, y, 30_000.0); p.mode_s = false; p })
                .collect();
            let steps = whisper_shout_steps(24.0, 54.0, 24);
            let max = *steps.last().unwrap();
            let audible = planes
                .iter()
                .filter(|p| max - path_loss_db(distance(own().position3(), p.state.position3()), INTERROGATION_HZ) >= p.sensitivity_dbm)
                .count();
            let mut refs: Vec<&mut dyn Transponder> = planes.iter_mut().map(|p| p as &mut dyn Transponder).collect();
            let mut tr = Tracker::default();
            let mut rng = stream(seed, Stream::Avionics);
            let log = tr.mode_c_cycle(&own(), &mut refs, &steps, &mut rng, 0.0).unwrap();
            let replies = log.iter().filter(|m| m.kind == MessageKind::ModeCReply).count();
            prop_assert_eq!(replies, audible);
        }
    }
}
