//! False-intruder injection against an en-route TCAS-equipped aircraft.
//!
//! Own-ship cruises for a fixed time under 1 Hz surveillance cycles. The
//! attacker launches ghost encounters from its ground stations until the
//! victim has raised an advisory on its alert budget's worth of them. The
//! crew follows RAs until it decides to downgrade the TCAS mode, then
//! carries out its final action.

use avspoof_core::crew::{CalibratedTcasPolicy, TcasAction, TcasCrew};
use avspoof_core::math::distance;
use avspoof_core::rng::{stream, Stream};
use avspoof_core::tcas::{
    assess, ra_target_vs_mps, AdvisoryLevel, FalseIntruder, IntruderTrack, Tcas, TcasMode, TrackId, Traffic,
    Transponder,
};
use avspoof_core::units::{fpm_to_mps, ft_to_m, kt_to_mps, m_to_ft, mps_to_fpm};
use avspoof_core::world::{step, AircraftState, Command};
use serde_json::{json, Value};

use super::Tracer;
use crate::config::ScenarioConfig;
use crate::log::{EventKind, Outcome, Recorder, TrialLog, TrialMetrics};
use crate::SimError;

const CYCLE_S: f64 = 1.0;
/// Rate used to regain the assigned level once clear of conflict.
const LEVEL_CHANGE_FPM: f64 = 1000.0;
/// Seconds to close the gap to the assigned level, before rate limiting.
const LEVEL_TIME_CONSTANT_S: f64 = 10.0;

#[derive(Debug, Clone)]
pub struct Prepared {
    pub policy: CalibratedTcasPolicy,
}

impl Prepared {
    pub fn describe(&self) -> Value {
        json!({
            "ras_before_downgrade": self.policy.ras_sampler(),
            "expected_extra_tas_before_standby": self.policy.expected_extra_tas(),
        })
    }
}

pub fn prepare(cfg: &ScenarioConfig) -> Result<Prepared, SimError> {
    let policy = cfg
        .tcas
        .policy
        .calibrate(cfg.tcas.plan.alert_budget)
        .map_err(|e| SimError::config("tcas.policy", e.to_string()))?;
    Ok(Prepared { policy })
}

/// Whether `track` is the attacker's current ghost. Anonymous tracks are
/// matched on range.
fn attacker_owns(track: &IntruderTrack, attacker: &FalseIntruder, own: &AircraftState, gate_m: f64) -> bool {
    let Some(enc) = attacker.active() else { return false };
    match track.id {
        TrackId::Icao(a) => a == enc.icao,
        TrackId::Anonymous(_) => {
            (distance(enc.position_at(own.time_s), own.position3()) - track.slant_range_m).abs() <= gate_m
        }
    }
}

pub fn run_trial(cfg: &ScenarioConfig, prep: &Prepared, trial_id: u64, seed: u64) -> Result<TrialLog, SimError> {
    let c = &cfg.tcas;
    let fail = |e: &dyn std::fmt::Display| SimError::trial(trial_id, e);
    let limits = &cfg.world.limits;
    let speed = kt_to_mps(c.ground_speed_kt);
    let ground_m = ft_to_m(c.ground_elevation_ft);
    let cruise_m = ft_to_m(c.cruise_altitude_ft);

    let mut own = AircraftState::new(c.start_position_m, cruise_m, speed);
    own.heading_deg = c.heading_deg;
    let mut tcas = Tcas::new(c.tcas.clone(), TcasMode::TaRa);
    let mut attacker = if c.attacker { Some(FalseIntruder::new(c.plan.clone()).map_err(|e| fail(&e))?) } else { None };
    let mut traffic: Vec<Traffic> = c
        .traffic
        .iter()
        .map(|t_cfg| {
            let mut s = AircraftState::new(t_cfg.position_m, ft_to_m(t_cfg.altitude_ft), kt_to_mps(t_cfg.ground_speed_kt));
            s.heading_deg = t_cfg.heading_deg;
            let mut t = Traffic::new(t_cfg.icao, s);
            t.mode_s = t_cfg.mode_s;
            t
        })
        .collect();
    let mut crew_rng = stream(seed, Stream::Crew);
    let mut avionics_rng = stream(seed, Stream::Avionics);
    let mut crew = TcasCrew::new(&prep.policy, &mut crew_rng);
    let mut rec = Recorder::default();
    let mut tracer = Tracer::new(cfg.output.trace_interval_s);
    let (ra_k, ta_m) = crew.thresholds();
    rec.push(
        0.0,
        EventKind::TrialStart,
        json!({
            "scenario": cfg.scenario,
            "target_mode": crew.target_mode(),
            "final_action": crew.final_action(),
            "ras_before_downgrade": ra_k,
            "tas_before_standby": ta_m,
        }),
    );

    let mut assigned_m = cruise_m;
    // Track being flown and the time the crew responded to it.
    let mut following: Option<(TrackId, f64)> = None;
    let (mut ras, mut tas) = (0u32, 0u32);
    let mut diverted = false;
    let cycles = (c.duration_s / CYCLE_S).floor() as u64;
    for n in 0..=cycles {
        let t = n as f64 * CYCLE_S;
        own.time_s = t;
        if let Some(a) = attacker.as_mut() {
            let before = a.encounters_launched();
            a.advance(&own, m_to_ft(own.altitude_msl_m - ground_m), t);
            if a.encounters_launched() > before {
                let enc = a.active().expect("just launched");
                rec.push(
                    t,
                    EventKind::EncounterLaunch,
                    json!({ "index": enc.index, "icao": enc.icao, "origin_m": enc.origin_m }),
                );
            }
        }
        let out = {
            let mut responders: Vec<&mut dyn Transponder> =
                traffic.iter_mut().map(|x| x as &mut dyn Transponder).collect();
            if let Some(a) = attacker.as_mut() {
                responders.push(a);
            }
            tcas.cycle(&own, &mut responders, &mut avionics_rng).map_err(|e| fail(&e))?
        };
        if cfg.output.messages {
            for m in &out.messages {
                rec.push(t, EventKind::Message, serde_json::to_value(m).expect("message serializes"));
            }
        }
        for ev in &out.events {
            match ev.level {
                AdvisoryLevel::Ta => tas += 1,
                AdvisoryLevel::Ra => ras += 1,
            }
            let ghost = match (attacker.as_ref(), tcas.tracker().track(ev.track)) {
                (Some(a), Some(tr)) => attacker_owns(tr, a, &own, c.tcas.tracker.association_gate_m),
                _ => false,
            };
            if ghost {
                attacker.as_mut().expect("attacker present").observe_advisory();
            }
            rec.push(
                t,
                EventKind::Advisory,
                json!({
                    "level": ev.level, "track": ev.track, "tau_s": ev.tau_s, "sense": ev.sense,
                    "commanded_rate_fpm": ev.commanded_rate_fpm, "mode": tcas.mode(), "attacker": ghost,
                }),
            );
            for action in crew.act(ev) {
                rec.push(t, EventKind::CrewAction, json!({ "action": action }));
                match action {
                    TcasAction::FollowRa => following = Some((ev.track, t)),
                    TcasAction::SetTaOnly | TcasAction::SetStandby => {
                        let mode = if action == TcasAction::SetTaOnly { TcasMode::TaOnly } else { TcasMode::Standby };
                        let from = tcas.mode();
                        tcas.set_mode(mode);
                        following = None;
                        rec.push(t, EventKind::ModeChange, json!({ "from": from, "to": mode }));
                    }
                    TcasAction::Avoidance => assigned_m = cruise_m + ft_to_m(c.avoidance_climb_ft),
                    TcasAction::Divert => diverted = true,
                    TcasAction::Continue => {}
                }
            }
        }
        if diverted {
            break;
        }

        let mut vs = None;
        if let Some((id, since)) = following {
            let standing = tcas
                .tracker()
                .track(id)
                .and_then(|tr| assess(tr, &own, tcas.mode(), &c.tcas.thresholds))
                .filter(|a| a.level == AdvisoryLevel::Ra);
            match standing {
                Some(a) if t - since >= c.ra_response_latency_s => vs = Some(ra_target_vs_mps(&a, &own)),
                Some(_) => vs = Some(own.vertical_speed_mps),
                None => following = None,
            }
        }
        let vs = vs.unwrap_or_else(|| {
            let cap = fpm_to_mps(LEVEL_CHANGE_FPM);
            ((assigned_m - own.altitude_msl_m) / LEVEL_TIME_CONSTANT_S).clamp(-cap, cap)
        });
        if tracer.due(t) {
            rec.push(
                t,
                EventKind::State,
                json!({
                    "position_m": own.position_m, "altitude_ft": m_to_ft(own.altitude_msl_m),
                    "vs_fpm": mps_to_fpm(vs), "mode": tcas.mode(),
                }),
            );
        }
        if n < cycles {
            own = step(&own, Command::new(vs, speed), CYCLE_S, limits).map_err(|e| fail(&e))?;
            for tr in &mut traffic {
                let cmd = Command::new(0.0, tr.state.ground_speed_mps);
                tr.state = step(&tr.state, cmd, CYCLE_S, limits).map_err(|e| fail(&e))?;
            }
        }
    }

    let outcome = if diverted { Outcome::Diverted } else { Outcome::ContinuedOnRoute };
    let history = *crew.history();
    Ok(TrialLog {
        trial_id,
        seed,
        scenario: cfg.scenario,
        events: rec.events,
        outcome,
        metrics: TrialMetrics::Tcas {
            final_mode: tcas.mode(),
            final_action: crew.final_action(),
            ras,
            tas,
            advisory_episodes: attacker.as_ref().map_or(0, |a| a.alerts()),
            ras_before_downgrade: history.ras_before_downgrade,
            tas_before_standby: history.tas_before_standby,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioKind;
    use avspoof_core::crew::FinalAction;
    use avspoof_core::rng::trial_seed;

    #[test]
    fn crews_that_stay_in_ta_ra_see_the_whole_budget() {
        let cfg = ScenarioConfig::new(ScenarioKind::Tcas);
        let prep = prepare(&cfg).unwrap();
        let mut seen = 0;
        for i in 0..40 {
            let log = run_trial(&cfg, &prep, i, trial_seed(5, i)).unwrap();
            let TrialMetrics::Tcas { final_mode, advisory_episodes, ras, .. } = log.metrics else { panic!() };
            if final_mode == TcasMode::TaRa {
                seen += 1;
                assert_eq!(advisory_episodes, cfg.tcas.plan.alert_budget);
                assert_eq!(ras, cfg.tcas.plan.alert_budget);
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn final_mode_matches_crew_target() {
        let cfg = ScenarioConfig::new(ScenarioKind::Tcas);
        let prep = prepare(&cfg).unwrap();
        for i in 0..40 {
            let log = run_trial(&cfg, &prep, i, trial_seed(6, i)).unwrap();
            let TrialMetrics::Tcas { final_mode, final_action, .. } = log.metrics else { panic!() };
            let start = &log.events[0].payload;
            assert_eq!(serde_json::to_value(final_mode).unwrap(), start["target_mode"]);
            assert_eq!(log.outcome == Outcome::Diverted, final_action == FinalAction::Divert);
        }
    }
}
