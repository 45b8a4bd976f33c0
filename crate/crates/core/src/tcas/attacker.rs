use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::math::{cos_deg, distance, sin_deg, Vec3};
use crate::rng::{mix64, SimRng};
use crate::units::{ft_to_m, m_to_ft};
use crate::world::AircraftState;
use crate::Origin;

use super::message::{IcaoAddress, MessageKind, SurveillanceMessage};
use super::track::{AllCall, Transponder};
use super::TcasError;

/// Ground-station false-intruder campaign.
///
/// Every encounter places a fabricated aircraft on a straight collision
/// course with the target, timed so that tau equals `lead_time_s` at
/// launch. Encounter variations derive from `plan_seed`, not from the trial
/// seed, so every victim faces the same sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FalseIntruderPlan {
    /// Direction the intruder comes from, relative to target heading.
    pub approach_bearing_deg: f64,
    pub bearing_jitter_deg: f64,
    /// Horizontal closing speed relative to the target.
    pub closing_speed_mps: f64,
    pub speed_jitter_mps: f64,
    /// Intruder altitude minus target altitude at launch.
    pub vertical_offset_ft: f64,
    /// No emissions while the target is below this height.
    pub activation_floor_ft: f64,
    pub alert_budget: u32,
    pub lead_time_s: f64,
    /// How long an encounter persists past closest approach.
    pub linger_s: f64,
    pub gap_s: f64,
    pub stations: Vec<Vec3>,
    pub station_power_dbm: f64,
    pub receiver_sensitivity_dbm: f64,
    /// Reuse a genuine aircraft's address instead of random ones.
    pub duplicate_address: Option<IcaoAddress>,
    /// Chance of answering the final all-call step when no step was heard.
    pub mode_c_guess_probability: f64,
    pub altitude_dropout_probability: f64,
    pub plan_seed: u64,
}

impl Default for FalseIntruderPlan {
    fn default() -> Self {
        Self {
            approach_bearing_deg: 0.0,
            bearing_jitter_deg: 30.0,
            closing_speed_mps: 250.0,
            speed_jitter_mps: 25.0,
            vertical_offset_ft: -500.0,
            activation_floor_ft: 2000.0,
            alert_budget: 10,
            lead_time_s: 60.0,
            linger_s: 10.0,
            gap_s: 20.0,
            stations: alloc::vec![[0.0, 0.0, 30.0]],
            station_power_dbm: 57.0,
            receiver_sensitivity_dbm: -90.0,
            duplicate_address: None,
            mode_c_guess_probability: 0.5,
            altitude_dropout_probability: 0.0,
            plan_seed: 0x5EED,
        }
    }
}

/// Per-encounter variation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Encounter {
    pub icao: IcaoAddress,
    pub bearing_deg: f64,
    pub closing_speed_mps: f64,
}

impl FalseIntruderPlan {
    pub fn validate(&self) -> Result<(), TcasError> {
        let finite = [
            self.approach_bearing_deg,
            self.bearing_jitter_deg,
            self.closing_speed_mps,
            self.speed_jitter_mps,
            self.vertical_offset_ft,
            self.activation_floor_ft,
            self.lead_time_s,
            self.linger_s,
            self.gap_s,
            self.station_power_dbm,
            self.receiver_sensitivity_dbm,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(TcasError::BadPlan("non-finite field"));
        }
        if self.stations.is_empty() {
            return Err(TcasError::BadPlan("no ground stations"));
        }
        if self.closing_speed_mps - self.speed_jitter_mps <= 0.0 || self.speed_jitter_mps < 0.0 {
            return Err(TcasError::BadPlan("closing speed must stay positive"));
        }
        if self.bearing_jitter_deg < 0.0 || self.lead_time_s <= 0.0 || self.linger_s < 0.0 || self.gap_s < 0.0 {
            return Err(TcasError::BadPlan("negative timing or jitter"));
        }
        let p_ok = |p: f64| (0.0..=1.0).contains(&p);
        if !p_ok(self.mode_c_guess_probability) || !p_ok(self.altitude_dropout_probability) {
            return Err(TcasError::BadPlan("probability outside [0, 1]"));
        }
        Ok(())
    }

    pub fn encounter(&self, index: u32) -> Encounter {
        let mut rng = SimRng::seed_from_u64(mix64(self.plan_seed ^ mix64(index as u64)));
        let jb = self.bearing_jitter_deg;
        let js = self.speed_jitter_mps;
        let bearing = self.approach_bearing_deg + if jb > 0.0 { rng.random_range(-jb..=jb) } else { 0.0 };
        let speed = self.closing_speed_mps + if js > 0.0 { rng.random_range(-js..=js) } else { 0.0 };
        let icao = self.duplicate_address.unwrap_or_else(|| {
            IcaoAddress::new(rng.random_range(1..=IcaoAddress::MAX)).unwrap_or(IcaoAddress::new(1).unwrap())
        });
        Encounter { icao, bearing_deg: bearing, closing_speed_mps: speed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActiveEncounter {
    pub index: u32,
    pub icao: IcaoAddress,
    pub launched_s: f64,
    pub origin_m: Vec3,
    pub velocity_mps: Vec3,
    pub alerted: bool,
}

impl ActiveEncounter {
    pub fn position_at(&self, t: f64) -> Vec3 {
        let dt = t - self.launched_s;
        [
            self.origin_m[0] + self.velocity_mps[0] * dt,
            self.origin_m[1] + self.velocity_mps[1] * dt,
            self.origin_m[2] + self.velocity_mps[2] * dt,
        ]
    }
}

/// Stateful attacker driving one campaign against one target.
#[derive(Debug, Clone)]
pub struct FalseIntruder {
    plan: FalseIntruderPlan,
    launched: u32,
    alerts: u32,
    next_launch_s: f64,
    active: Option<ActiveEncounter>,
    target: Option<AircraftState>,
    now_s: f64,
}

impl FalseIntruder {
    pub fn new(plan: FalseIntruderPlan) -> Result<Self, TcasError> {
        plan.validate()?;
        Ok(Self {
            plan,
            launched: 0,
            alerts: 0,
            next_launch_s: f64::NEG_INFINITY,
            active: None,
            target: None,
            now_s: 0.0,
        })
    }

    pub fn plan(&self) -> &FalseIntruderPlan {
        &self.plan
    }

    pub fn active(&self) -> Option<&ActiveEncounter> {
        self.active.as_ref()
    }

    pub fn alerts(&self) -> u32 {
        self.alerts
    }

    pub fn encounters_launched(&self) -> u32 {
        self.launched
    }

    pub fn exhausted(&self) -> bool {
        self.alerts >= self.plan.alert_budget
    }

    /// Update the campaign for time `t` given the target's current state.
    pub fn advance(&mut self, target: &AircraftState, target_agl_ft: f64, t: f64) {
        self.now_s = t;
        self.target = Some(*target);
        if target_agl_ft < self.plan.activation_floor_ft {
            if self.active.take().is_some() {
                self.next_launch_s = t + self.plan.gap_s;
            }
            return;
        }
        if let Some(a) = &self.active {
            if t - a.launched_s > self.plan.lead_time_s + self.plan.linger_s {
                self.active = None;
                self.next_launch_s = t + self.plan.gap_s;
            }
        }
        // The encounter that uses up the budget still runs to completion.
        if self.active.is_none() && !self.exhausted() && t >= self.next_launch_s {
            self.launch(target, t);
        }
    }

    fn launch(&mut self, target: &AircraftState, t: f64) {
        let enc = self.plan.encounter(self.launched);
        let dir = target.heading_deg + enc.bearing_deg;
        let (ux, uy) = (cos_deg(dir), sin_deg(dir));
        let r0 = enc.closing_speed_mps * self.plan.lead_time_s;
        let p = target.position3();
        let v = target.velocity3();
        self.active = Some(ActiveEncounter {
            index: self.launched,
            icao: enc.icao,
            launched_s: t,
            origin_m: [p[0] + r0 * ux, p[1] + r0 * uy, p[2] + ft_to_m(self.plan.vertical_offset_ft)],
            velocity_mps: [v[0] - enc.closing_speed_mps * ux, v[1] - enc.closing_speed_mps * uy, v[2]],
            alerted: false,
        });
        self.launched += 1;
    }

    /// Feedback that the victim raised an advisory on the current intruder.
    /// Counts at most once per encounter.
    pub fn observe_advisory(&mut self) {
        if let Some(a) = &mut self.active {
            if !a.alerted {
                a.alerted = true;
                self.alerts += 1;
            }
        }
    }

    fn station(&self) -> Vec3 {
        let at = self.target.map(|s| s.position3()).unwrap_or([0.0; 3]);
        self.plan
            .stations
            .iter()
            .copied()
            .min_by(|a, b| distance(*a, at).total_cmp(&distance(*b, at)))
            .unwrap_or([0.0; 3])
    }

    fn message(&self, kind: MessageKind, t: f64) -> SurveillanceMessage {
        let mut m = SurveillanceMessage::new(kind, t, Origin::Adversarial, self.station());
        m.tx_power_dbm = self.plan.station_power_dbm;
        m
    }

    fn reply(&self, a: &ActiveEncounter, kind: MessageKind, t: f64, altitude: bool) -> SurveillanceMessage {
        let mut m = self.message(kind, t);
        let p = a.position_at(t);
        m.apparent_position_m = Some(p);
        m.altitude_ft = altitude.then(|| m_to_ft(p[2]));
        m
    }
}

impl Transponder for FalseIntruder {
    fn squitter(&mut self, t: f64) -> Option<SurveillanceMessage> {
        let a = self.active?;
        let mut m = self.message(MessageKind::Squitter, t);
        m.icao = Some(a.icao);
        Some(m)
    }

    fn reply_mode_s(&mut self, q: &SurveillanceMessage) -> Option<SurveillanceMessage> {
        let a = self.active?;
        if q.icao != Some(a.icao) {
            return None;
        }
        let mut m = self.reply(&a, MessageKind::ModeSReply, q.timestamp_s, true);
        m.icao = Some(a.icao);
        Some(m)
    }

    fn receiver_position(&self) -> Vec3 {
        self.station()
    }

    fn sensitivity_dbm(&self) -> f64 {
        self.plan.receiver_sensitivity_dbm
    }

    fn reply_mode_c(&mut self, call: &AllCall, rng: &mut SimRng) -> Option<SurveillanceMessage> {
        let a = self.active?;
        let answer =
            call.received_dbm.is_some() || (call.is_last() && rng.random::<f64>() < self.plan.mode_c_guess_probability);
        if !answer {
            return None;
        }
        let altitude = !(self.plan.altitude_dropout_probability > 0.0
            && rng.random::<f64>() < self.plan.altitude_dropout_probability);
        let mut m = self.reply(&a, MessageKind::ModeCReply, call.time_s, altitude);
        m.step = Some(call.step);
        Some(m)
    }
}

/// Open-loop message stream of a campaign against a scripted trajectory,
/// with the target interrogating the intruder once per sample. No advisory
/// feedback reaches the attacker, so the budget never runs out.
pub fn inject(
    plan: &FalseIntruderPlan,
    trajectory: &[(AircraftState, f64)],
) -> Result<Vec<SurveillanceMessage>, TcasError> {
    let mut atk = FalseIntruder::new(plan.clone())?;
    let mut out = Vec::new();
    for (state, agl_ft) in trajectory {
        let t = state.time_s;
        atk.advance(state, *agl_ft, t);
        let Some(sq) = atk.squitter(t) else { continue };
        let mut q = SurveillanceMessage::new(MessageKind::ModeSInterrogation, t, Origin::Genuine, state.position3());
        q.icao = sq.icao;
        out.push(sq);
        if let Some(r) = atk.reply_mode_s(&q) {
            out.push(q);
            out.push(r);
        }
    }
    Ok(out)
}
