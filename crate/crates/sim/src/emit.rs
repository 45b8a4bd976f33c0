//! Output files for a run.
//!
//! ```text
//! <out>/config.json            resolved scenario configuration
//! <out>/logs/trial_NNNNNN.jsonl one JSON-lines log per trial
//! <out>/summary.csv            table-shaped summary
//! <out>/summary.json           the same, machine-readable
//! <out>/report.txt             plain-text report
//! <out>/traces/trial_NNNNNN.csv time and altitude samples, when traced
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::config::ScenarioConfig;
use crate::log::{EventKind, TrialLog};
use crate::summary::Summary;
use crate::SimError;

fn write(path: &Path, contents: &str) -> Result<(), SimError> {
    fs::write(path, contents).map_err(|e| SimError::io(path, e))
}

fn mkdir(path: &Path) -> Result<(), SimError> {
    fs::create_dir_all(path).map_err(|e| SimError::io(path, e))
}

pub fn log_file_name(trial_id: u64) -> String {
    format!("trial_{trial_id:06}.jsonl")
}

/// Paths written by [`write_run`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Written {
    pub logs: Vec<PathBuf>,
    pub traces: Vec<PathBuf>,
    pub summary_csv: PathBuf,
    pub summary_json: PathBuf,
    pub report: PathBuf,
    pub config: Option<PathBuf>,
}

/// Time/altitude trace from a log's state samples; `None` if untraced.
pub fn trace_csv(log: &TrialLog) -> Option<String> {
    let mut out = String::from("time_s,altitude_ft\n");
    let mut any = false;
    for e in log.events.iter().filter(|e| e.kind == EventKind::State) {
        let alt = e.payload.get("agl_ft").or_else(|| e.payload.get("altitude_ft")).and_then(Value::as_f64)?;
        out.push_str(&format!("{},{}\n", e.t, alt));
        any = true;
    }
    any.then_some(out)
}

pub fn report_text(summary: &Summary, cfg: Option<&ScenarioConfig>, derived: Option<&Value>) -> String {
    let mut out = summary.to_text();
    if let Some(cfg) = cfg {
        out.push_str(&format!("\nMaster seed: {}\n", cfg.seed));
    }
    if let Some(d) = derived {
        out.push_str("\nDerived parameters\n");
        out.push_str(&serde_json::to_string_pretty(d).expect("json"));
        out.push('\n');
    }
    out
}

/// Write logs, summary and report under `dir`.
pub fn write_run(
    dir: &Path,
    cfg: Option<&ScenarioConfig>,
    derived: Option<&Value>,
    logs: &[TrialLog],
    summary: &Summary,
) -> Result<Written, SimError> {
    let log_dir = dir.join("logs");
    mkdir(&log_dir)?;
    let mut w = Written::default();
    for l in logs {
        let p = log_dir.join(log_file_name(l.trial_id));
        write(&p, &l.to_json_lines())?;
        w.logs.push(p);
        if let Some(csv) = trace_csv(l) {
            let tdir = dir.join("traces");
            mkdir(&tdir)?;
            let p = tdir.join(format!("trial_{:06}.csv", l.trial_id));
            write(&p, &csv)?;
            w.traces.push(p);
        }
    }
    if let Some(cfg) = cfg {
        let p = dir.join("config.json");
        write(&p, &cfg.to_json())?;
        w.config = Some(p);
    }
    w.summary_csv = dir.join("summary.csv");
    write(&w.summary_csv, &summary.to_csv())?;
    w.summary_json = dir.join("summary.json");
    write(&w.summary_json, &serde_json::to_string_pretty(summary).expect("summary serializes"))?;
    w.report = dir.join("report.txt");
    write(&w.report, &report_text(summary, cfg, derived))?;
    Ok(w)
}

/// Paths of every `*.jsonl` log in `dir`, or in `dir/logs` if that exists,
/// sorted by name (and so by trial id).
pub fn log_paths(dir: &Path) -> Result<Vec<PathBuf>, SimError> {
    let nested = dir.join("logs");
    let dir = if nested.is_dir() { nested } else { dir.to_path_buf() };
    let entries = fs::read_dir(&dir).map_err(|e| SimError::io(&dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let p = entry.map_err(|e| SimError::io(&dir, e))?.path();
        if p.extension().is_some_and(|x| x == "jsonl") {
            paths.push(p);
        }
    }
    paths.sort();
    Ok(paths)
}

pub fn read_log(path: &Path) -> Result<TrialLog, SimError> {
    let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    TrialLog::from_json_lines(&text).map_err(|message| SimError::Log { path: path.to_path_buf(), message })
}

/// Every log under `dir` (see [`log_paths`]), ordered by trial id.
pub fn read_logs(dir: &Path) -> Result<Vec<TrialLog>, SimError> {
    let mut logs = log_paths(dir)?.iter().map(|p| read_log(p)).collect::<Result<Vec<_>, _>>()?;
    logs.sort_by_key(|l| l.trial_id);
    Ok(logs)
}
