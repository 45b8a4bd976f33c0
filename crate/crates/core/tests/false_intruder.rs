use std::collections::BTreeMap;

use avspoof_core::rng::{stream, Stream};
use avspoof_core::sentinel::{simulate_arrivals, toa_consistency, Flag, GroundSensor, ToaConfig};
use avspoof_core::tcas::{
    AdvisoryLevel, FalseIntruder, FalseIntruderPlan, IcaoAddress, MessageKind, SurveillanceMessage, Tcas, TcasConfig,
    TcasMode, TrackId, Traffic, Transponder,
};
use avspoof_core::units::{ft_to_m, kt_to_mps};
use avspoof_core::world::{step, AircraftState, Command, PerformanceLimits};
use avspoof_core::Origin;

fn cruise() -> AircraftState {
    AircraftState::new([-150_000.0, 8_000.0], ft_to_m(35_000.0), kt_to_mps(450.0))
}

/// Straight and level cruise past the attacker's station, never reacting.
/// Returns advisory levels per ghost address in the order raised, plus the
/// attacker at the end.
fn campaign(mode: TcasMode, seconds: u32) -> (BTreeMap<IcaoAddress, Vec<AdvisoryLevel>>, FalseIntruder) {
    let limits = PerformanceLimits::default();
    let mut own = cruise();
    let mut tcas = Tcas::new(TcasConfig::default(), mode);
    let mut atk = FalseIntruder::new(FalseIntruderPlan::default()).unwrap();
    let mut rng = stream(9, Stream::Avionics);
    let mut seen: BTreeMap<IcaoAddress, Vec<AdvisoryLevel>> = BTreeMap::new();
    for _ in 0..seconds {
        atk.advance(&own, 35_000.0, own.time_s);
        let out = tcas.cycle(&own, &mut [&mut atk as &mut dyn Transponder], &mut rng).unwrap();
        for ev in &out.events {
            let TrackId::Icao(a) = ev.track else { panic!("Mode S ghost should be addressed") };
            assert_eq!(Some(a), atk.active().map(|e| e.icao), "advisory on a track the attacker does not own");
            seen.entry(a).or_default().push(ev.level);
            atk.observe_advisory();
        }
        own = step(&own, Command::new(0.0, own.ground_speed_mps), 1.0, &limits).unwrap();
    }
    (seen, atk)
}

#[test]
fn each_ghost_raises_ta_then_ra_until_budget_spent() {
    let (seen, atk) = campaign(TcasMode::TaRa, 3 * 3600);
    let budget = atk.plan().alert_budget as usize;
    assert_eq!(seen.len(), budget);
    for levels in seen.values() {
        assert_eq!(levels, &[AdvisoryLevel::Ta, AdvisoryLevel::Ra]);
    }
    assert!(atk.exhausted());
    assert_eq!(atk.encounters_launched() as usize, budget);
}

#[test]
fn ta_only_never_shows_ra() {
    let (seen, _) = campaign(TcasMode::TaOnly, 3 * 3600);
    assert!(!seen.is_empty());
    assert!(seen.values().all(|l| l == &[AdvisoryLevel::Ta]));
}

#[test]
fn standby_sees_nothing() {
    let (seen, atk) = campaign(TcasMode::Standby, 1800);
    assert!(seen.is_empty());
    assert_eq!(atk.alerts(), 0);
}

#[test]
fn ghost_replies_fail_time_of_arrival_check() {
    let sensors: Vec<GroundSensor> = [[-40e3, -40e3, 0.0], [40e3, -40e3, 0.0], [40e3, 40e3, 0.0], [-40e3, 40e3, 0.0]]
        .iter()
        .enumerate()
        .map(|(i, &p)| GroundSensor { id: i as u32, position_m: p, clock_bias_s: 0.0 })
        .collect();
    let own = AircraftState::new([-50_000.0, 0.0], ft_to_m(35_000.0), kt_to_mps(450.0));
    let mut atk = FalseIntruder::new(FalseIntruderPlan::default()).unwrap();
    atk.advance(&own, 35_000.0, 0.0);
    let mut genuine = Traffic::new(IcaoAddress::new(0xABCDEF).unwrap(), AircraftState::new([10e3, 5e3], 9e3, 200.0));
    let mut rng = stream(1, Stream::Sensors);
    let toa = ToaConfig::default();
    let responders: [(Origin, &mut dyn Transponder); 2] =
        [(Origin::Adversarial, &mut atk), (Origin::Genuine, &mut genuine)];
    for (who, r) in responders {
        let sq = r.squitter(0.0).expect("squitter emitted");
        let mut q = SurveillanceMessage::new(MessageKind::ModeSInterrogation, 0.0, Origin::Genuine, own.position3());
        q.icao = sq.icao;
        let m = r.reply_mode_s(&q).expect("reply");
        assert_eq!(m.origin, who);
        let claimed = m.apparent_position_m.expect("replies claim a position");
        let arrivals = simulate_arrivals(m.emitter_position_m, m.timestamp_s, &sensors, 0.0, &mut rng);
        let v = toa_consistency("x", claimed, &arrivals, &toa);
        let expect = if who == Origin::Adversarial { Flag::Suspect } else { Flag::Clean };
        assert_eq!(v.flag, expect, "{who:?}: {v:?}");
    }
}
