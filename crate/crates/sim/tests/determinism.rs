use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use avspoof_sim::config::{ScenarioConfig, ScenarioKind};
use avspoof_sim::{emit, summary, Runner};

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn run_into(cfg: &ScenarioConfig, dir: &Path) {
    let runner = Runner::new(cfg.clone()).unwrap();
    let logs = runner.run().unwrap();
    let s = summary::summarize(&logs).unwrap();
    emit::write_run(dir, Some(runner.config()), Some(&runner.derived()), &logs, &s).unwrap();
}

fn config(kind: ScenarioKind, trials: u64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(kind);
    cfg.trials = trials;
    cfg.seed = 42;
    cfg.output.trace_interval_s = 1.0;
    cfg.output.messages = kind == ScenarioKind::Tcas;
    cfg
}

#[test]
fn same_config_same_bytes() {
    for (kind, n) in
        [(ScenarioKind::Gpws, 40), (ScenarioKind::Tcas, 8), (ScenarioKind::Gs, 40), (ScenarioKind::Baseline, 5)]
    {
        let cfg = config(kind, n);
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        run_into(&cfg, a.path());
        run_into(&cfg, b.path());
        let (fa, fb) = (files(a.path()), files(b.path()));
        assert!(fa.len() as u64 > n, "{kind:?}: {} files", fa.len());
        assert_eq!(fa.keys().collect::<Vec<_>>(), fb.keys().collect::<Vec<_>>());
        for (name, bytes) in &fa {
            assert!(bytes == &fb[name], "{kind:?}: {name} differs");
        }
    }
}

#[test]
fn trial_does_not_depend_on_batch() {
    let big = Runner::new(config(ScenarioKind::Gpws, 30)).unwrap().run().unwrap();
    let small = Runner::new(config(ScenarioKind::Gpws, 10)).unwrap();
    for id in [0, 3, 9] {
        assert_eq!(small.trial(id).unwrap(), big[id as usize]);
    }
}

#[test]
fn seed_changes_results() {
    let a = Runner::new(config(ScenarioKind::Gs, 20)).unwrap().run().unwrap();
    let mut cfg = config(ScenarioKind::Gs, 20);
    cfg.seed = 43;
    let b = Runner::new(cfg).unwrap().run().unwrap();
    assert_ne!(a, b);
}

#[test]
fn written_logs_read_back_identically() {
    let cfg = config(ScenarioKind::Tcas, 3);
    let runner = Runner::new(cfg).unwrap();
    let logs = runner.run().unwrap();
    let s = summary::summarize(&logs).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let w = emit::write_run(dir.path(), Some(runner.config()), None, &logs, &s).unwrap();
    assert_eq!(w.logs.len(), 3);
    assert_eq!(emit::read_logs(dir.path()).unwrap(), logs);
    assert_eq!(summary::summarize(&emit::read_logs(&dir.path().join("logs")).unwrap()).unwrap(), s);
    let cfg_back = ScenarioConfig::load(w.config.as_ref().unwrap()).unwrap();
    assert_eq!(&cfg_back, runner.config());
}

#[test]
fn traces_have_time_and_altitude() {
    let dir = tempfile::tempdir().unwrap();
    run_into(&config(ScenarioKind::Gs, 2), dir.path());
    let text = fs::read_to_string(dir.path().join("traces/trial_000000.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time_s,altitude_ft"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (t, a) = l.split_once(',').unwrap();
            (t.parse().unwrap(), a.parse().unwrap())
        })
        .collect();
    assert!(rows.len() > 10);
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0));
    assert!((rows[0].1 - 1800.0).abs() < 1e-6);
}
