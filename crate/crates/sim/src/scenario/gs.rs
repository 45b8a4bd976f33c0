//! Glideslope displacement: a stronger rogue transmitter beyond the real
//! one captures the receiver and pulls the coupled approach long.
//!
//! The aircraft starts on the captured beam and tracks it. Above the
//! visual transition height the crew compares the needle with the PAPI;
//! crews that notice four whites over a centered needle go around at
//! their chosen height and fly a fallback approach. Crews that continue
//! fly visually from the transition height to touchdown. The baseline
//! scenario is the same approach with no rogue transmitter.

use avspoof_core::crew::{CalibratedGsPolicy, GsAction, GsCrew};
use avspoof_core::ils::{papi, receive, GlideslopeTx};
use avspoof_core::math::tan_deg;
use avspoof_core::rng::{stream, Stream};
use avspoof_core::units::{fpm_to_mps, ft_to_m, kt_to_mps, m_to_ft, m_to_sm, mps_to_fpm};
use avspoof_core::world::{agl, step, AircraftState, Command};
use serde_json::{json, Value};

use super::Tracer;
use crate::config::{ScenarioConfig, ScenarioKind};
use crate::log::{EventKind, Outcome, Recorder, TrialLog, TrialMetrics};
use crate::SimError;

/// Nominal glidepath angle the PAPI is set to.
const PAPI_ANGLE_DEG: f64 = 3.0;
/// Seconds allotted to lose the remaining height once past the aim point.
const FLARE_TIME_S: f64 = 4.0;
/// Slowest sink accepted in the visual segment, m/s.
const MIN_SINK_MPS: f64 = 0.5;
/// Heights below this count as touchdown, m.
const TOUCHDOWN_M: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct Prepared {
    pub policy: CalibratedGsPolicy,
}

impl Prepared {
    pub fn describe(&self) -> Value {
        let m = self.policy.go_around_agl_ft.moments();
        json!({
            "go_around_agl_ft": {
                "mu": self.policy.go_around_agl_ft.mu, "sigma": self.policy.go_around_agl_ft.sigma,
                "lo": self.policy.go_around_agl_ft.lo, "hi": self.policy.go_around_agl_ft.hi,
                "mean": m.mean, "sd": m.sd,
            },
        })
    }
}

pub fn prepare(cfg: &ScenarioConfig) -> Result<Prepared, SimError> {
    let policy = cfg.gs.policy.calibrate().map_err(|e| SimError::config("gs.policy", e.to_string()))?;
    Ok(Prepared { policy })
}

pub fn transmitters(cfg: &ScenarioConfig) -> Vec<GlideslopeTx> {
    match cfg.scenario {
        ScenarioKind::Baseline => vec![cfg.gs.genuine.clone()],
        _ => vec![cfg.gs.genuine.clone(), cfg.gs.rogue.clone()],
    }
}

/// Start state on the beam the receiver captures at the start height.
pub fn start_state(cfg: &ScenarioConfig, txs: &[GlideslopeTx]) -> Result<AircraftState, String> {
    let g = &cfg.gs;
    let rw = &cfg.world.runway;
    let speed = kt_to_mps(g.ground_speed_kt);
    let h = ft_to_m(g.start_agl_ft);
    for (i, tx) in txs.iter().enumerate() {
        let x = tx.antenna_along_track_m - (rw.elevation_m + h - tx.antenna_elevation_m) / tan_deg(tx.path_angle_deg);
        let mut s = AircraftState::new([x, 0.0], rw.elevation_m + h, speed);
        s.vertical_speed_mps = -speed * tan_deg(tx.path_angle_deg);
        if receive(&s, txs, &g.receiver).captured == Some(i) {
            return Ok(s);
        }
    }
    Err("no transmitter captures the receiver at the start height".into())
}

pub fn run_trial(cfg: &ScenarioConfig, prep: &Prepared, trial_id: u64, seed: u64) -> Result<TrialLog, SimError> {
    let g = &cfg.gs;
    let w = &cfg.world;
    let rw = &w.runway;
    let terrain = w.terrain();
    let fail = |e: &dyn std::fmt::Display| SimError::trial(trial_id, e);
    let txs = transmitters(cfg);
    let mut crew_rng = stream(seed, Stream::Crew);
    let mut crew = GsCrew::new(&prep.policy, &mut crew_rng);
    let mut rec = Recorder::default();
    let mut tracer = Tracer::new(cfg.output.trace_interval_s);
    let mut s = start_state(cfg, &txs).map_err(|m| fail(&m))?;
    let speed = s.ground_speed_mps;
    let max_descent = w.limits.max_descent_mps;
    rec.push(
        0.0,
        EventKind::TrialStart,
        json!({
            "scenario": cfg.scenario, "decision": crew.decision(), "go_around_threshold_ft": crew.threshold_ft(),
        }),
    );

    let mut last_lights = None;
    let mut conflict_logged = false;
    let mut go_around: Option<(f64, f64)> = None;
    let mut fallback = None;
    loop {
        let t = s.time_s;
        let h = agl(&s, &terrain).map_err(|e| fail(&e))?;
        if h <= TOUCHDOWN_M {
            break;
        }
        let h_ft = m_to_ft(h);
        let ind = receive(&s, &txs, &g.receiver);
        // Past the threshold the PAPI is behind the aircraft; the crew keeps
        // the last picture they had of it.
        if let Ok(l) = papi(&s, rw, PAPI_ANGLE_DEG, &g.papi) {
            last_lights = Some(l);
        }
        if let Some(lights) = last_lights {
            for action in crew.act(&ind, &lights, h_ft) {
                if crew.conflict_seen() && !conflict_logged {
                    conflict_logged = true;
                    rec.push(
                        t,
                        EventKind::CueConflict,
                        json!({ "agl_ft": h_ft, "whites": lights.whites, "deviation_dots": ind.deviation_dots }),
                    );
                }
                match action {
                    GsAction::Continue => {}
                    GsAction::GoAround { agl_ft } => {
                        let dist_sm = m_to_sm(rw.touchdown_along_track_m() - s.along_track_m());
                        go_around = Some((agl_ft, dist_sm));
                        rec.push(
                            t,
                            EventKind::GoAround,
                            json!({ "agl_ft": agl_ft, "distance_to_touchdown_sm": dist_sm }),
                        );
                    }
                    GsAction::SelectApproach(a) => {
                        fallback = Some(a);
                        rec.push(t, EventKind::CrewAction, json!({ "action": "SELECT_APPROACH", "approach": a }));
                    }
                }
            }
        }
        if go_around.is_some() {
            break;
        }
        let vs = if h_ft > g.visual_transition_ft {
            match ind.captured.filter(|_| ind.valid) {
                Some(i) => {
                    let tx = &txs[i];
                    let on_path = -speed * tan_deg(tx.path_angle_deg);
                    let target = tx.path_altitude_at(s.along_track_m()).unwrap_or(s.altitude_msl_m);
                    on_path + (target - s.altitude_msl_m) / g.guidance_time_constant_s
                }
                None => s.vertical_speed_mps,
            }
        } else {
            // Visual: straight line to the touchdown zone, or settle if past it.
            let to_go = rw.touchdown_along_track_m() - s.along_track_m();
            if to_go > speed * w.step_s {
                -h * speed / to_go
            } else {
                -(h / FLARE_TIME_S).max(MIN_SINK_MPS)
            }
        }
        .clamp(-max_descent, w.limits.max_climb_mps);
        if tracer.due(t) {
            rec.push(
                t,
                EventKind::State,
                json!({
                    "agl_ft": h_ft, "along_track_m": s.along_track_m(), "vs_fpm": mps_to_fpm(vs),
                    "deviation_dots": ind.deviation_dots, "captured": ind.captured,
                }),
            );
        }
        // End the last step on the surface.
        let dt = if vs < 0.0 { w.step_s.min(h / -vs) } else { w.step_s };
        s = step(&s, Command::new(vs, speed), dt, &w.limits).map_err(|e| fail(&e))?;
    }

    let (outcome, touchdown) = match go_around {
        Some(_) => {
            climb_out(cfg, s, &mut rec, &mut tracer).map_err(|m| fail(&m))?;
            (Outcome::FallbackApproach, None)
        }
        None => {
            rec.push(s.time_s, EventKind::Landed, json!({ "along_track_m": s.along_track_m() }));
            (Outcome::Landed, Some(s.along_track_m()))
        }
    };
    Ok(TrialLog {
        trial_id,
        seed,
        scenario: cfg.scenario,
        events: rec.events,
        outcome,
        metrics: TrialMetrics::Gs {
            decision: crew.decision(),
            conflict_seen: crew.conflict_seen(),
            go_around_agl_ft: go_around.map(|g| g.0),
            go_around_distance_sm: go_around.map(|g| g.1),
            fallback,
            touchdown_along_track_m: touchdown,
        },
    })
}

fn climb_out(
    cfg: &ScenarioConfig,
    mut s: AircraftState,
    rec: &mut Recorder,
    tracer: &mut Tracer,
) -> Result<(), String> {
    let g = &cfg.gs;
    let w = &cfg.world;
    let terrain = w.terrain();
    let cmd = Command::new(fpm_to_mps(g.go_around_climb_fpm), s.ground_speed_mps);
    let end = s.time_s + g.go_around_duration_s;
    while s.time_s + 1e-9 < end {
        if tracer.due(s.time_s) {
            let h = agl(&s, &terrain).map_err(|e| e.to_string())?;
            rec.push(
                s.time_s,
                EventKind::State,
                json!({ "agl_ft": m_to_ft(h), "along_track_m": s.along_track_m(), "vs_fpm": g.go_around_climb_fpm }),
            );
        }
        s = step(&s, cmd, w.step_s.min(end - s.time_s), &w.limits).map_err(|e| e.to_string())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use avspoof_core::crew::GsDecision;
    use avspoof_core::rng::trial_seed;
    use avspoof_core::Origin;

    #[test]
    fn attack_starts_on_rogue_beam() {
        let cfg = ScenarioConfig::new(ScenarioKind::Gs);
        let txs = transmitters(&cfg);
        let s = start_state(&cfg, &txs).unwrap();
        assert_eq!(receive(&s, &txs, &cfg.gs.receiver).captured_origin, Some(Origin::Adversarial));
    }

    #[test]
    fn baseline_lands_in_touchdown_zone_without_conflict() {
        let cfg = ScenarioConfig::new(ScenarioKind::Baseline);
        let prep = prepare(&cfg).unwrap();
        for i in 0..10 {
            let log = run_trial(&cfg, &prep, i, trial_seed(3, i)).unwrap();
            assert_eq!(log.outcome, Outcome::Landed);
            let TrialMetrics::Gs { conflict_seen, touchdown_along_track_m, .. } = log.metrics else { panic!() };
            assert!(!conflict_seen);
            let tdz = cfg.world.runway.touchdown_along_track_m();
            assert!((touchdown_along_track_m.unwrap() - tdz).abs() < 300.0, "{touchdown_along_track_m:?}");
        }
    }

    #[test]
    fn go_around_crews_fly_a_fallback() {
        let cfg = ScenarioConfig::new(ScenarioKind::Gs);
        let prep = prepare(&cfg).unwrap();
        for i in 0..30 {
            let log = run_trial(&cfg, &prep, i, trial_seed(4, i)).unwrap();
            let TrialMetrics::Gs { decision, conflict_seen, fallback, go_around_agl_ft, .. } = log.metrics else {
                panic!()
            };
            assert!(conflict_seen);
            match decision {
                GsDecision::GoAround => {
                    assert_eq!(log.outcome, Outcome::FallbackApproach);
                    assert!(fallback.is_some() && go_around_agl_ft.is_some());
                }
                GsDecision::Land => assert_eq!(log.outcome, Outcome::Landed),
            }
        }
    }
}
