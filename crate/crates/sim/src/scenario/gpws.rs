//! Radio-altimeter ramp spoofing against a GPWS-equipped approach.
//!
//! Each approach starts at a fixed height on a constant descent. When the
//! true height crosses the attacker's scripted trigger, a ramp of spoofed
//! echoes makes the indicated height fall much faster than the aircraft.
//! The crew answers the resulting alert by landing, going around after a
//! reaction latency, or switching the GPWS off. A go-around climbs out and
//! the next approach begins.

use avspoof_core::crew::{calibrate_latency, GpwsAction, GpwsCrew, GpwsResponse, LatencyInputs};
use avspoof_core::gpws::Gpws;
use avspoof_core::radalt::{craft_ramp, height_to_delay, measure, PulseEcho, RampAttackPlan};
use avspoof_core::rng::{stream, SimRng, Stream};
use avspoof_core::stats::{Moments, RunningMoments, TruncatedNormal};
use avspoof_core::units::{fpm_to_mps, ft_to_m, kt_to_mps, m_to_ft};
use avspoof_core::world::{agl, step, AircraftState, Command, TerrainProfile};
use serde_json::{json, Value};

use super::Tracer;
use crate::config::{GpwsScenario, ScenarioConfig, WorldConfig};
use crate::log::{ApproachRecord, EventKind, Outcome, Recorder, TrialLog, TrialMetrics};
use crate::SimError;

/// Triggers sampled across the first approach's window when deriving the
/// reaction latency.
const PROBE_POINTS: usize = 101;

#[derive(Debug, Clone)]
pub struct Prepared {
    pub latency_s: TruncatedNormal,
    /// True height and onset-to-alert delay at the first alert, over the
    /// first approach's trigger window; `None` when latency was configured.
    pub probe: Option<Probe>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub alert_agl_ft: Moments,
    pub alert_delay_s: Moments,
    pub misses: usize,
}

impl Prepared {
    pub fn describe(&self) -> Value {
        let m = self.latency_s.moments();
        let mut v = json!({
            "latency_s": {
                "mu": self.latency_s.mu, "sigma": self.latency_s.sigma,
                "lo": self.latency_s.lo, "hi": self.latency_s.hi,
                "mean": m.mean, "sd": m.sd,
            },
        });
        if let Some(p) = &self.probe {
            v["probe"] = json!({
                "alert_agl_ft": p.alert_agl_ft,
                "alert_delay_s": p.alert_delay_s,
            });
        }
        v
    }
}

struct Env<'a> {
    g: &'a GpwsScenario,
    world: &'a WorldConfig,
    terrain: TerrainProfile,
}

impl Env<'_> {
    fn descent_mps(&self) -> f64 {
        fpm_to_mps(self.g.descent_fpm)
    }

    fn speed_mps(&self) -> f64 {
        kt_to_mps(self.g.ground_speed_kt)
    }

    /// On the approach path at the start height, timed to reach the
    /// touchdown zone.
    fn approach_start(&self, t: f64) -> AircraftState {
        let rw = &self.world.runway;
        let h = ft_to_m(self.g.start_agl_ft);
        let x = rw.touchdown_along_track_m() - self.speed_mps() * h / self.descent_mps();
        let mut s = AircraftState::new([x, 0.0], rw.elevation_m + h, self.speed_mps());
        s.time_s = t;
        s.vertical_speed_mps = -self.descent_mps();
        s
    }
}

enum End {
    Landed,
    GoAround,
    /// Probe runs stop at the first alert.
    Alerted {
        true_agl_ft: f64,
        delay_s: f64,
    },
}

struct ApproachRun {
    record: ApproachRecord,
    end: End,
    state: AircraftState,
}

struct Crew<'a> {
    crew: &'a mut GpwsCrew,
    rng: &'a mut SimRng,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[allow(clippy::too_many_arguments)]
fn fly_approach(
    env: &Env,
    start: AircraftState,
    index: u32,
    trigger_ft: f64,
    gpws: &mut Gpws,
    mut crew: Option<Crew>,
    rec: &mut Recorder,
    tracer: &mut Tracer,
) -> Result<ApproachRun, String> {
    let g = env.g;
    let dt = env.world.step_s;
    let cmd = Command::new(-env.descent_mps(), env.speed_mps());
    let mut s = start;
    let mut attack: Option<(RampAttackPlan, f64)> = None;
    let mut record = ApproachRecord {
        index,
        trigger_agl_ft: trigger_ft,
        alert_agl_ft: None,
        alert_delay_s: None,
        action: GpwsAction::Land,
        go_around_agl_ft: None,
    };
    let mut alerted = false;
    let mut go_at: Option<f64> = None;
    gpws.reset();
    loop {
        let t = s.time_s;
        let h = agl(&s, &env.terrain).map_err(err)?;
        if h <= 0.0 {
            break;
        }
        let h_ft = m_to_ft(h);
        if attack.is_none() && h_ft <= trigger_ft {
            let plan = craft_ramp(h, fpm_to_mps(g.spoof_rate_fpm), g.spoof_duration_s, &g.sweep).map_err(err)?;
            rec.push(t, EventKind::AttackOnset, json!({ "approach": index, "true_agl_ft": h_ft }));
            attack = Some((plan, t));
        }
        let mut echoes = vec![PulseEcho::genuine(height_to_delay(h).map_err(err)?, g.genuine_echo_db)];
        if let Some((plan, t0)) = &attack {
            let k = ((t - t0) / g.sweep.sweep_period_s).round() as u64;
            if let Some(d) = plan.delay_at(k) {
                echoes.push(PulseEcho::adversarial(d, g.genuine_echo_db + g.spoof_margin_db));
            }
        }
        let indicated_ft = m_to_ft(measure(&echoes, &g.sweep).map_err(err)?.agl_m);
        if tracer.due(t) {
            rec.push(
                t,
                EventKind::State,
                json!({
                    "approach": index, "agl_ft": h_ft, "indicated_agl_ft": indicated_ft,
                    "along_track_m": s.along_track_m(), "vs_fpm": -g.descent_fpm,
                }),
            );
        }
        if let Some(alert) = gpws.update(t, Some(indicated_ft), index) {
            if !alerted {
                alerted = true;
                let delay_s = attack.as_ref().map_or(0.0, |(_, t0)| t - t0);
                record.alert_agl_ft = Some(h_ft);
                record.alert_delay_s = Some(delay_s);
                rec.push(
                    t,
                    EventKind::GpwsAlert,
                    json!({
                        "approach": index, "indicated_agl_ft": indicated_ft,
                        "true_agl_ft": h_ft, "delay_s": delay_s,
                    }),
                );
                let Some(c) = crew.as_mut() else {
                    return Ok(ApproachRun { record, end: End::Alerted { true_agl_ft: h_ft, delay_s }, state: s });
                };
                let resp = c.crew.act(index, Some(&alert), c.rng);
                record.action = resp.action;
                log_action(rec, t, index, &resp, true);
                match resp.action {
                    GpwsAction::GoAround => go_at = Some(t + resp.latency_s.unwrap_or(0.0)),
                    GpwsAction::TurnOffGpws => gpws.set_enabled(false),
                    GpwsAction::Land => {}
                }
            }
        }
        if go_at.is_some_and(|tg| t >= tg - 1e-9) {
            record.go_around_agl_ft = Some(h_ft);
            rec.push(t, EventKind::GoAround, json!({ "approach": index, "agl_ft": h_ft }));
            return Ok(ApproachRun { record, end: End::GoAround, state: s });
        }
        s = step(&s, cmd, dt, &env.world.limits).map_err(err)?;
    }
    if !alerted {
        if let Some(c) = crew.as_mut() {
            let resp = c.crew.act(index, None, c.rng);
            record.action = resp.action;
            log_action(rec, s.time_s, index, &resp, false);
        }
    }
    rec.push(s.time_s, EventKind::Landed, json!({ "approach": index, "along_track_m": s.along_track_m() }));
    Ok(ApproachRun { record, end: End::Landed, state: s })
}

fn log_action(rec: &mut Recorder, t: f64, index: u32, resp: &GpwsResponse, alert: bool) {
    rec.push(
        t,
        EventKind::CrewAction,
        json!({ "approach": index, "action": resp.action, "latency_s": resp.latency_s, "alert": alert }),
    );
}

/// Climb out at the go-around rate; returns the time the climb ends.
fn climb_out(
    env: &Env,
    mut s: AircraftState,
    index: u32,
    rec: &mut Recorder,
    tracer: &mut Tracer,
) -> Result<f64, String> {
    let dt = env.world.step_s;
    let cmd = Command::new(fpm_to_mps(env.g.go_around_climb_fpm), env.speed_mps());
    let end = s.time_s + env.g.go_around_duration_s;
    while s.time_s + 1e-9 < end {
        if tracer.due(s.time_s) {
            let h_ft = m_to_ft(agl(&s, &env.terrain).map_err(err)?);
            rec.push(
                s.time_s,
                EventKind::State,
                json!({
                    "approach": index, "agl_ft": h_ft, "indicated_agl_ft": h_ft,
                    "along_track_m": s.along_track_m(), "vs_fpm": env.g.go_around_climb_fpm,
                }),
            );
        }
        s = step(&s, cmd, dt.min(end - s.time_s), &env.world.limits).map_err(err)?;
    }
    Ok(s.time_s)
}

/// Derive the crew latency distribution from the first-approach go-around
/// height target, by flying the attack across its trigger window.
fn probe(cfg: &ScenarioConfig) -> Result<Probe, SimError> {
    let env = Env { g: &cfg.gpws, world: &cfg.world, terrain: cfg.world.terrain() };
    let (lo, hi) = cfg.gpws.schedule.window_ft(1).map_err(|e| SimError::config("gpws.schedule", e.to_string()))?;
    let mut heights = RunningMoments::default();
    let mut delays = RunningMoments::default();
    let mut misses = 0;
    for i in 0..PROBE_POINTS {
        let trigger = lo + (hi - lo) * (i as f64 + 0.5) / PROBE_POINTS as f64;
        let mut gpws =
            Gpws::new(cfg.gpws.envelope.clone()).map_err(|e| SimError::config("gpws.envelope", e.to_string()))?;
        let run = fly_approach(
            &env,
            env.approach_start(0.0),
            1,
            trigger,
            &mut gpws,
            None,
            &mut Recorder::default(),
            &mut Tracer::new(0.0),
        )
        .map_err(|m| SimError::config("gpws", m))?;
        match run.end {
            End::Alerted { true_agl_ft, delay_s } => {
                heights.push(true_agl_ft);
                delays.push(delay_s);
            }
            _ => misses += 1,
        }
    }
    let moments = |r: &RunningMoments| {
        // Population spread over a uniform grid.
        let n = r.n as f64;
        Moments::new(r.mean().unwrap_or(f64::NAN), r.sd().map_or(0.0, |sd| sd * ((n - 1.0) / n).sqrt()))
    };
    Ok(Probe { alert_agl_ft: moments(&heights), alert_delay_s: moments(&delays), misses })
}

pub fn prepare(cfg: &ScenarioConfig) -> Result<Prepared, SimError> {
    let policy = &cfg.gpws.policy;
    if let Some(latency_s) = policy.latency_s {
        return Ok(Prepared { latency_s, probe: None });
    }
    let probe = probe(cfg)?;
    if probe.misses > 0 {
        return Err(SimError::config(
            "gpws.policy.latency_s",
            format!(
                "the attack raised no alert for {} of {PROBE_POINTS} first-approach triggers; configure the latency explicitly",
                probe.misses
            ),
        ));
    }
    let inputs = LatencyInputs {
        trigger_mean_ft: probe.alert_agl_ft.mean,
        trigger_var_ft2: probe.alert_agl_ft.sd * probe.alert_agl_ft.sd,
        descent_ft_per_s: cfg.gpws.descent_fpm / 60.0,
        // Already folded into the alert heights.
        alert_delay_mean_s: 0.0,
        alert_delay_var_s2: 0.0,
    };
    let latency_s = calibrate_latency(policy.go_around_agl_ft, &inputs, policy.max_latency_s)
        .map_err(|e| SimError::config("gpws.policy.go_around_agl_ft", e.to_string()))?;
    Ok(Prepared { latency_s, probe: Some(probe) })
}

pub fn run_trial(cfg: &ScenarioConfig, prep: &Prepared, trial_id: u64, seed: u64) -> Result<TrialLog, SimError> {
    let g = &cfg.gpws;
    let env = Env { g, world: &cfg.world, terrain: cfg.world.terrain() };
    let mut attacker_rng = stream(seed, Stream::Attacker);
    let mut crew_rng = stream(seed, Stream::Crew);
    let mut crew = GpwsCrew::new(&g.policy, prep.latency_s)?;
    let mut gpws = Gpws::new(g.envelope.clone()).map_err(|e| SimError::trial(trial_id, e))?;
    let mut rec = Recorder::default();
    let mut tracer = Tracer::new(cfg.output.trace_interval_s);
    rec.push(0.0, EventKind::TrialStart, json!({ "scenario": cfg.scenario }));
    let mut approaches = Vec::new();
    let mut t = 0.0;
    let outcome = loop {
        let index = approaches.len() as u32 + 1;
        if index > g.max_approaches {
            break Outcome::Diverted;
        }
        let trigger_ft =
            g.schedule.scripted_trigger(index, &mut attacker_rng).map_err(|e| SimError::trial(trial_id, e))?;
        let start = env.approach_start(t);
        rec.push(t, EventKind::ApproachStart, json!({ "approach": index, "trigger_agl_ft": trigger_ft }));
        let run = fly_approach(
            &env,
            start,
            index,
            trigger_ft,
            &mut gpws,
            Some(Crew { crew: &mut crew, rng: &mut crew_rng }),
            &mut rec,
            &mut tracer,
        )
        .map_err(|m| SimError::Trial { trial: trial_id, message: m })?;
        approaches.push(run.record);
        match run.end {
            End::Landed => break Outcome::Landed,
            End::GoAround => {
                t = climb_out(&env, run.state, index, &mut rec, &mut tracer)
                    .map_err(|m| SimError::Trial { trial: trial_id, message: m })?;
            }
            End::Alerted { .. } => unreachable!("crew present"),
        }
    };
    Ok(TrialLog {
        trial_id,
        seed,
        scenario: cfg.scenario,
        events: rec.events,
        outcome,
        metrics: TrialMetrics::Gpws { approaches },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioKind;

    #[test]
    fn probe_alerts_shortly_after_onset() {
        let cfg = ScenarioConfig::new(ScenarioKind::Gpws);
        let p = probe(&cfg).unwrap();
        assert_eq!(p.misses, 0);
        assert!(p.alert_delay_s.mean > 0.0 && p.alert_delay_s.mean < 1.5, "{:?}", p.alert_delay_s);
        // Window midpoint less the descent during the delay, to within a step.
        let expect = 475.0 - 700.0 / 60.0 * p.alert_delay_s.mean;
        assert!((p.alert_agl_ft.mean - expect).abs() < 700.0 / 60.0 * 0.1, "{:?}", p.alert_agl_ft);
        // Uniform window of width 50 ft.
        assert!((p.alert_agl_ft.sd - 50.0 / 12f64.sqrt()).abs() < 1.0, "{:?}", p.alert_agl_ft);
    }

    #[test]
    fn trial_alternates_approach_and_climb() {
        let cfg = ScenarioConfig::new(ScenarioKind::Gpws);
        let prep = prepare(&cfg).unwrap();
        for i in 0..20 {
            let log = run_trial(&cfg, &prep, i, avspoof_core::rng::trial_seed(9, i)).unwrap();
            let TrialMetrics::Gpws { approaches } = &log.metrics else { panic!() };
            for (n, a) in approaches.iter().enumerate() {
                assert_eq!(a.index as usize, n + 1);
                assert_eq!(a.go_around_agl_ft.is_some(), a.action == GpwsAction::GoAround);
            }
            let last = approaches.last().unwrap();
            assert_ne!(last.action, GpwsAction::GoAround);
            assert_eq!(log.outcome, Outcome::Landed);
            assert!(log.events.windows(2).all(|w| w[0].t <= w[1].t));
        }
    }
}
