use avspoof_sim::cost::{
    disruption_cost, extra_fuel_gal, AircraftType, CostEvent, DEFAULT_DENSITY_KG_PER_GAL as DENSITY,
    DEFAULT_PRICE_CENTS_PER_GAL as PRICE, DIVERSION_BAND_GBP,
};
use proptest::prelude::*;

#[test]
fn quoted_costs_reproduce_to_the_dollar() {
    let cases = [
        (AircraftType::B737_800, CostEvent::MissedApproach, 41.79, 77.0),
        (AircraftType::B737_800, CostEvent::SecondApproach, 75.68, 139.0),
        (AircraftType::B777_200, CostEvent::MissedApproach, 111.55, 205.0),
        (AircraftType::B777_200, CostEvent::SecondApproach, 279.69, 516.0),
    ];
    for (ac, ev, gal, usd) in cases {
        let r = disruption_cost(ev, ac, PRICE, DENSITY).unwrap();
        assert_eq!(r.gallons, Some(gal));
        // gallons x cents / 100, computed here independently
        let expect = gal * 184.58 / 100.0;
        assert!((r.usd.unwrap() - expect).abs() < 1e-9);
        assert!((r.usd.unwrap() - usd).abs() < 1.0, "{ac} {ev:?}: {:?}", r.usd);
    }
}

#[test]
fn density_reproduces_quoted_masses() {
    for (ac, ev, kg) in [
        (AircraftType::B737_800, CostEvent::MissedApproach, 127.0),
        (AircraftType::B737_800, CostEvent::SecondApproach, 230.0),
        (AircraftType::B777_200, CostEvent::SecondApproach, 850.0),
    ] {
        let r = disruption_cost(ev, ac, PRICE, DENSITY).unwrap();
        assert!((r.extra_fuel_kg.unwrap() - kg).abs() < 0.5, "{ac} {ev:?}: {:?}", r.extra_fuel_kg);
        assert!(r.note.is_none());
    }
}

#[test]
fn inconsistent_mass_is_flagged() {
    let r = disruption_cost(CostEvent::MissedApproach, AircraftType::B777_200, PRICE, DENSITY).unwrap();
    let note = r.note.expect("discrepancy noted");
    assert!(note.contains("399"), "{note}");
    assert!((r.extra_fuel_kg.unwrap() - 339.0).abs() < 0.5);
}

#[test]
fn diversion_is_a_band() {
    for ac in AircraftType::ALL {
        let r = disruption_cost(CostEvent::Diversion, ac, PRICE, DENSITY).unwrap();
        assert_eq!(r.gbp_band, Some(DIVERSION_BAND_GBP));
        assert_eq!(r.usd, None);
    }
}

#[test]
fn bad_inputs_rejected() {
    assert!("A320".parse::<AircraftType>().is_err());
    assert!("b777-200".parse::<AircraftType>().is_ok());
    assert!(disruption_cost(CostEvent::MissedApproach, AircraftType::B737_800, -1.0, DENSITY).is_err());
    assert!(disruption_cost(CostEvent::MissedApproach, AircraftType::B737_800, PRICE, 0.0).is_err());
}

proptest! {
    #[test]
    fn usd_is_linear_in_price(p in 1.0f64..1000.0, k in 0.1f64..10.0) {
        for ac in AircraftType::ALL {
            for ev in [CostEvent::MissedApproach, CostEvent::SecondApproach] {
                let a = disruption_cost(ev, ac, p, DENSITY).unwrap().usd.unwrap();
                let b = disruption_cost(ev, ac, k * p, DENSITY).unwrap().usd.unwrap();
                prop_assert!((b - k * a).abs() <= 1e-9 * b.abs().max(1.0));
                let gal = extra_fuel_gal(ev, ac).unwrap();
                prop_assert!((a - gal * p / 100.0).abs() <= 1e-9 * a.abs().max(1.0));
            }
        }
    }
}
