use avspoof_core::crew::{FinalAction, GpwsAction};
use avspoof_sim::config::{ScenarioConfig, ScenarioKind};
use avspoof_sim::log::{Outcome, TrialMetrics};
use avspoof_sim::summary::{summarize, MODES};
use avspoof_sim::{Runner, SimError, TrialLog};

fn logs(kind: ScenarioKind, n: u64) -> Vec<TrialLog> {
    let mut cfg = ScenarioConfig::new(kind);
    cfg.trials = n;
    cfg.seed = 5;
    Runner::new(cfg).unwrap().run().unwrap()
}

#[test]
fn gpws_rows_conserve_participants() {
    let logs = logs(ScenarioKind::Gpws, 400);
    let s = summarize(&logs).unwrap();
    let g = s.gpws().unwrap();
    assert_eq!(g.participants(1), 400);
    let max = g.rows.iter().map(|r| r.approach).max().unwrap();
    for k in 1..=max {
        let rows: Vec<_> = g.rows.iter().filter(|r| r.approach == k).collect();
        let total: u64 = rows.iter().map(|r| r.count).sum();
        assert_eq!(total, g.participants(k), "approach {k}");
        assert!(rows.iter().all(|r| r.count > 0));
        if k > 1 {
            // Only crews that went around come back; the rest landed.
            let again = g.row(k - 1, GpwsAction::GoAround).map_or(0, |r| r.count);
            assert_eq!(g.participants(k), again);
        }
    }
    // independent recount of first-approach go-arounds from the raw metrics
    let ga = logs
        .iter()
        .filter(
            |l| matches!(&l.metrics, TrialMetrics::Gpws { approaches } if approaches[0].action == GpwsAction::GoAround),
        )
        .count() as u64;
    assert_eq!(g.row(1, GpwsAction::GoAround).unwrap().count, ga);
    assert_eq!(s.outcomes.values().sum::<u64>(), 400);
}

#[test]
fn gpws_csv_uses_table_labels() {
    let s = summarize(&logs(ScenarioKind::Gpws, 200)).unwrap();
    let csv = s.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("Approach,Action,Count,Percent,Participants"));
    let labels: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert!(labels.iter().all(|l| ["Land", "Go-around", "Turn off"].contains(l)), "{labels:?}");
    assert!(csv.contains("\n1,Land,") && csv.contains("\n1,Go-around,") && csv.contains("\n2,Turn off,"));
}

#[test]
fn tcas_matrix_conserves_trials() {
    let logs = logs(ScenarioKind::Tcas, 60);
    let s = summarize(&logs).unwrap();
    let t = s.tcas().unwrap();
    let by_mode: u64 = MODES.iter().map(|&m| t.mode_total(m)).sum();
    let by_action: u64 = FinalAction::ALL.iter().map(|&a| t.action_total(a)).sum();
    assert_eq!((by_mode, by_action), (60, 60));
    assert_eq!(s.outcome_count(Outcome::Diverted), t.action_total(FinalAction::Divert));
    let csv = s.to_csv();
    assert!(csv.starts_with("Action,TA/RA #,TA/RA %,TA-Only #,TA-Only %,Standby #,Standby %,Total #,Total %\n"));
    for label in ["Continue on route,", "Avoidance manoeuvre,", "Divert to origin,", "Total,"] {
        assert!(csv.contains(label), "{label}");
    }
}

#[test]
fn gs_fallbacks_cover_go_arounds() {
    let s = summarize(&logs(ScenarioKind::Gs, 300)).unwrap();
    let g = s.gs().unwrap();
    assert_eq!(g.land + g.go_around, g.participants);
    assert_eq!(g.fallback.values().sum::<u64>(), g.go_around);
    assert_eq!(s.outcome_count(Outcome::FallbackApproach), g.go_around);
}

#[test]
fn single_trial_has_one_outcome() {
    for kind in [ScenarioKind::Gpws, ScenarioKind::Tcas, ScenarioKind::Gs, ScenarioKind::Baseline] {
        let s = summarize(&logs(kind, 1)).unwrap();
        assert_eq!(s.outcomes.values().filter(|&&c| c > 0).count(), 1);
        assert_eq!(s.outcomes.values().sum::<u64>(), 1);
    }
}

#[test]
fn baseline_lands_without_alerts() {
    let logs = logs(ScenarioKind::Baseline, 50);
    let s = summarize(&logs).unwrap();
    assert_eq!(s.outcome_count(Outcome::Landed), 50);
    assert_eq!(s.gs().unwrap().conflicts_seen, 0);
    assert_eq!(s.gs().unwrap().go_around, 0);
}

#[test]
fn empty_and_mixed_inputs_rejected() {
    assert!(matches!(summarize(&[]), Err(SimError::Summary(_))));
    let mut mixed = logs(ScenarioKind::Gs, 2);
    mixed.extend(logs(ScenarioKind::Gpws, 1));
    assert!(matches!(summarize(&mixed), Err(SimError::Summary(_))));
}
