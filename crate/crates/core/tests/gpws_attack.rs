use avspoof_core::gpws::{Gpws, Mode2Envelope};
use avspoof_core::radalt::{craft_ramp, height_to_delay, measure, PulseEcho, SweepConfig};
use avspoof_core::units::{fpm_to_mps, ft_to_m, kt_to_mps, m_to_ft};
use avspoof_core::world::{step, AircraftState, Command, PerformanceLimits};

const GENUINE_DB: f64 = -60.0;

/// Fly a 700 fpm approach from 1200 ft, sampling the altimeter once per
/// sweep. With `spoof_at_ft` set, a 3000 fpm ramp 10 dB above the ground
/// return starts when the true height crosses it. Returns (onset, first alert).
fn approach(spoof_at_ft: Option<f64>) -> (Option<f64>, Option<f64>) {
    let sweep = SweepConfig::default();
    let limits = PerformanceLimits::default();
    let mut gpws = Gpws::new(Mode2Envelope::default()).unwrap();
    let vs = -fpm_to_mps(700.0);
    let mut s = AircraftState::new([-5000.0, 0.0], ft_to_m(1200.0), kt_to_mps(130.0));
    s.vertical_speed_mps = vs;
    let mut ramp = None;
    let mut onset = None;
    while s.altitude_msl_m > ft_to_m(50.0) {
        let t = s.time_s;
        let mut echoes = vec![PulseEcho::genuine(height_to_delay(s.altitude_msl_m).unwrap(), GENUINE_DB)];
        if let Some(trigger) = spoof_at_ft {
            if ramp.is_none() && m_to_ft(s.altitude_msl_m) <= trigger {
                ramp = Some(craft_ramp(s.altitude_msl_m, fpm_to_mps(3000.0), 5.0, &sweep).unwrap());
                onset = Some(t);
            }
        }
        if let (Some(plan), Some(t0)) = (&ramp, onset) {
            let k = ((t - t0) / sweep.sweep_period_s).round() as u64;
            if let Some(d) = plan.delay_at(k) {
                echoes.push(PulseEcho::adversarial(d, GENUINE_DB + 10.0));
            }
        }
        let indicated = m_to_ft(measure(&echoes, &sweep).unwrap().agl_m);
        if let Some(alert) = gpws.update(t, Some(indicated), 1) {
            return (onset, Some(alert.time_s));
        }
        s = step(&s, Command::new(vs, s.ground_speed_mps), sweep.sweep_period_s, &limits).unwrap();
    }
    (onset, None)
}

#[test]
fn ramp_raises_alert_shortly_after_onset() {
    for trigger in [450.0, 500.0, 700.0] {
        let (onset, alert) = approach(Some(trigger));
        let (onset, alert) = (onset.expect("ramp started"), alert.expect("alert raised"));
        let delay = alert - onset;
        assert!(delay > 0.0 && delay <= 1.5, "trigger {trigger} ft: alert {delay} s after onset");
    }
}

#[test]
fn nominal_approach_stays_quiet() {
    assert_eq!(approach(None), (None, None));
}
