//! Aggregation of trial logs into outcome tables and statistics.
//!
//! GPWS logs fold into a per-approach action table in which crews that
//! have landed drop out of later approaches, so each approach's counts sum
//! to that approach's participants. TCAS logs fold into a final-mode by
//! action matrix over all trials; glideslope logs into the first-approach
//! decision split, go-around statistics and fallback approach counts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use avspoof_core::crew::{ApproachType, FinalAction, GpwsAction, GsDecision};
use avspoof_core::stats::RunningMoments;
use avspoof_core::tcas::TcasMode;
use serde::Serialize;

use crate::config::ScenarioKind;
use crate::log::{Outcome, TrialLog, TrialMetrics};
use crate::SimError;

/// Sample size, mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub n: u64,
    pub mean: f64,
    pub sd: f64,
}

impl Stat {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let m: RunningMoments = values.into_iter().collect();
        Some(Self { n: m.n, mean: m.mean()?, sd: m.sd().unwrap_or(0.0) })
    }
}

fn pct(count: u64, of: u64) -> f64 {
    if of == 0 {
        0.0
    } else {
        100.0 * count as f64 / of as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionRow {
    pub approach: u32,
    pub action: GpwsAction,
    pub count: u64,
    pub participants: u64,
}

impl ActionRow {
    pub fn percent(&self) -> f64 {
        pct(self.count, self.participants)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GpwsSummary {
    pub rows: Vec<ActionRow>,
    /// Height at go-around initiation on the first approach.
    pub first_go_around_agl_ft: Option<Stat>,
    pub alert_delay_s: Option<Stat>,
}

impl GpwsSummary {
    pub fn row(&self, approach: u32, action: GpwsAction) -> Option<&ActionRow> {
        self.rows.iter().find(|r| r.approach == approach && r.action == action)
    }

    pub fn participants(&self, approach: u32) -> u64 {
        self.rows.iter().find(|r| r.approach == approach).map_or(0, |r| r.participants)
    }
}

pub const MODES: [TcasMode; 3] = [TcasMode::TaRa, TcasMode::TaOnly, TcasMode::Standby];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TcasSummary {
    pub trials: u64,
    /// `counts[action][mode]`, in `FinalAction::ALL` by `MODES` order.
    pub counts: [[u64; 3]; 3],
    /// RAs followed before leaving TA/RA, over crews that downgraded.
    pub ras_before_downgrade: Option<Stat>,
    /// TAs seen in TA-Only before Standby, over crews that reached Standby.
    pub tas_before_standby: Option<Stat>,
    pub advisory_episodes: Option<Stat>,
}

impl TcasSummary {
    pub fn mode_total(&self, mode: TcasMode) -> u64 {
        let j = MODES.iter().position(|&m| m == mode).expect("mode listed");
        self.counts.iter().map(|r| r[j]).sum()
    }

    pub fn action_total(&self, action: FinalAction) -> u64 {
        let i = FinalAction::ALL.iter().position(|&a| a == action).expect("action listed");
        self.counts[i].iter().sum()
    }

    pub fn mode_percent(&self, mode: TcasMode) -> f64 {
        pct(self.mode_total(mode), self.trials)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GsSummary {
    pub participants: u64,
    pub land: u64,
    pub go_around: u64,
    pub conflicts_seen: u64,
    pub go_around_agl_ft: Option<Stat>,
    pub go_around_distance_sm: Option<Stat>,
    pub fallback: BTreeMap<ApproachType, u64>,
    pub touchdown_along_track_m: Option<Stat>,
}

impl GsSummary {
    pub fn go_around_percent(&self) -> f64 {
        pct(self.go_around, self.participants)
    }

    /// Share of all participants flying `approach` as their fallback.
    pub fn fallback_percent(&self, approach: ApproachType) -> f64 {
        pct(self.fallback.get(&approach).copied().unwrap_or(0), self.participants)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "table", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Detail {
    Gpws(GpwsSummary),
    Tcas(TcasSummary),
    Gs(GsSummary),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub scenario: ScenarioKind,
    pub trials: u64,
    pub outcomes: BTreeMap<Outcome, u64>,
    pub detail: Detail,
}

impl Summary {
    pub fn gpws(&self) -> Option<&GpwsSummary> {
        match &self.detail {
            Detail::Gpws(s) => Some(s),
            _ => None,
        }
    }

    pub fn tcas(&self) -> Option<&TcasSummary> {
        match &self.detail {
            Detail::Tcas(s) => Some(s),
            _ => None,
        }
    }

    pub fn gs(&self) -> Option<&GsSummary> {
        match &self.detail {
            Detail::Gs(s) => Some(s),
            _ => None,
        }
    }

    pub fn outcome_count(&self, o: Outcome) -> u64 {
        self.outcomes.get(&o).copied().unwrap_or(0)
    }
}

/// Fold logs in the order given; the result does not depend on the order
/// trials finished in.
pub fn summarize(logs: &[TrialLog]) -> Result<Summary, SimError> {
    let first = logs.first().ok_or_else(|| SimError::Summary("no trial logs to summarize".into()))?;
    let scenario = first.scenario;
    if let Some(odd) = logs.iter().find(|l| l.scenario != scenario) {
        return Err(SimError::Summary(format!(
            "mixed scenarios: trial {} is {} but trial {} is {}",
            first.trial_id,
            scenario.as_str(),
            odd.trial_id,
            odd.scenario.as_str()
        )));
    }
    let mut outcomes = BTreeMap::new();
    for l in logs {
        *outcomes.entry(l.outcome).or_insert(0) += 1;
    }
    let mismatch = |l: &TrialLog| SimError::Summary(format!("trial {} metrics do not match its scenario", l.trial_id));
    let detail = match scenario {
        ScenarioKind::Gpws => Detail::Gpws(gpws(logs, mismatch)?),
        ScenarioKind::Tcas => Detail::Tcas(tcas(logs, mismatch)?),
        ScenarioKind::Gs | ScenarioKind::Baseline => Detail::Gs(gs(logs, mismatch)?),
    };
    Ok(Summary { scenario, trials: logs.len() as u64, outcomes, detail })
}

/// Row order within an approach.
const GPWS_ACTIONS: [GpwsAction; 3] = [GpwsAction::TurnOffGpws, GpwsAction::Land, GpwsAction::GoAround];

fn gpws(logs: &[TrialLog], mismatch: impl Fn(&TrialLog) -> SimError) -> Result<GpwsSummary, SimError> {
    let mut counts: BTreeMap<(u32, GpwsAction), u64> = BTreeMap::new();
    let mut participants: BTreeMap<u32, u64> = BTreeMap::new();
    let mut first_ga = Vec::new();
    let mut delays = Vec::new();
    for l in logs {
        let TrialMetrics::Gpws { approaches } = &l.metrics else { return Err(mismatch(l)) };
        for a in approaches {
            *participants.entry(a.index).or_insert(0) += 1;
            *counts.entry((a.index, a.action)).or_insert(0) += 1;
            if a.index == 1 {
                first_ga.extend(a.go_around_agl_ft);
            }
            delays.extend(a.alert_delay_s);
        }
    }
    let mut rows = Vec::new();
    for (&approach, &n) in &participants {
        for action in GPWS_ACTIONS {
            if let Some(&count) = counts.get(&(approach, action)) {
                rows.push(ActionRow { approach, action, count, participants: n });
            }
        }
    }
    Ok(GpwsSummary { rows, first_go_around_agl_ft: Stat::of(first_ga), alert_delay_s: Stat::of(delays) })
}

fn tcas(logs: &[TrialLog], mismatch: impl Fn(&TrialLog) -> SimError) -> Result<TcasSummary, SimError> {
    let mut counts = [[0u64; 3]; 3];
    let (mut ras, mut tas, mut episodes) = (Vec::new(), Vec::new(), Vec::new());
    for l in logs {
        let TrialMetrics::Tcas {
            final_mode,
            final_action,
            advisory_episodes,
            ras_before_downgrade,
            tas_before_standby,
            ..
        } = &l.metrics
        else {
            return Err(mismatch(l));
        };
        let i = FinalAction::ALL.iter().position(|a| a == final_action).expect("action listed");
        let j = MODES.iter().position(|m| m == final_mode).expect("mode listed");
        counts[i][j] += 1;
        ras.extend(ras_before_downgrade.map(f64::from));
        tas.extend(tas_before_standby.map(f64::from));
        episodes.push(f64::from(*advisory_episodes));
    }
    Ok(TcasSummary {
        trials: logs.len() as u64,
        counts,
        ras_before_downgrade: Stat::of(ras),
        tas_before_standby: Stat::of(tas),
        advisory_episodes: Stat::of(episodes),
    })
}

fn gs(logs: &[TrialLog], mismatch: impl Fn(&TrialLog) -> SimError) -> Result<GsSummary, SimError> {
    let mut s = GsSummary {
        participants: logs.len() as u64,
        land: 0,
        go_around: 0,
        conflicts_seen: 0,
        go_around_agl_ft: None,
        go_around_distance_sm: None,
        fallback: BTreeMap::new(),
        touchdown_along_track_m: None,
    };
    let (mut agl, mut dist, mut touchdown) = (Vec::new(), Vec::new(), Vec::new());
    for l in logs {
        let TrialMetrics::Gs {
            conflict_seen,
            go_around_agl_ft,
            go_around_distance_sm,
            fallback,
            touchdown_along_track_m,
            ..
        } = &l.metrics
        else {
            return Err(mismatch(l));
        };
        // Count what was flown, not what was intended: a crew that would
        // have gone around but saw no conflict lands.
        if go_around_agl_ft.is_some() {
            s.go_around += 1;
        } else {
            s.land += 1;
        }
        s.conflicts_seen += u64::from(*conflict_seen);
        agl.extend(*go_around_agl_ft);
        dist.extend(*go_around_distance_sm);
        touchdown.extend(*touchdown_along_track_m);
        if let Some(f) = fallback {
            *s.fallback.entry(*f).or_insert(0) += 1;
        }
    }
    s.go_around_agl_ft = Stat::of(agl);
    s.go_around_distance_sm = Stat::of(dist);
    s.touchdown_along_track_m = Stat::of(touchdown);
    Ok(s)
}

fn gs_action_label(d: GsDecision) -> &'static str {
    match d {
        GsDecision::GoAround => "Go-around",
        GsDecision::Land => "Land",
    }
}

impl Summary {
    /// Table-shaped CSV: one row per approach and action for GPWS and
    /// glideslope runs, the mode by action matrix for TCAS runs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.detail {
            Detail::Gpws(g) => {
                out.push_str("Approach,Action,Count,Percent,Participants\n");
                for r in &g.rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{:.1},{}",
                        r.approach,
                        r.action.label(),
                        r.count,
                        r.percent(),
                        r.participants
                    );
                }
            }
            Detail::Tcas(t) => {
                out.push_str("Action,TA/RA #,TA/RA %,TA-Only #,TA-Only %,Standby #,Standby %,Total #,Total %\n");
                for (i, a) in FinalAction::ALL.iter().enumerate() {
                    out.push_str(a.label());
                    for &c in &t.counts[i] {
                        let _ = write!(out, ",{c},{:.1}", pct(c, t.trials));
                    }
                    let total = t.action_total(*a);
                    let _ = writeln!(out, ",{total},{:.1}", pct(total, t.trials));
                }
                out.push_str("Total");
                for m in MODES {
                    let _ = write!(out, ",{},{:.1}", t.mode_total(m), t.mode_percent(m));
                }
                let _ = writeln!(out, ",{},{:.1}", t.trials, pct(t.trials, t.trials));
            }
            Detail::Gs(g) => {
                out.push_str("Approach,Action,Count,Percent,Participants\n");
                for (d, c) in [(GsDecision::Land, g.land), (GsDecision::GoAround, g.go_around)] {
                    let _ =
                        writeln!(out, "1,{},{c},{:.1},{}", gs_action_label(d), pct(c, g.participants), g.participants);
                }
                for (a, &c) in &g.fallback {
                    let _ =
                        writeln!(out, "Fallback,{},{c},{:.1},{}", a.label(), g.fallback_percent(*a), g.participants);
                }
            }
        }
        out
    }

    /// Human-readable report.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Scenario: {}", self.scenario.as_str());
        let _ = writeln!(out, "Trials:   {}", self.trials);
        out.push_str("\nOutcomes\n");
        for o in Outcome::ALL {
            let c = self.outcome_count(o);
            if c > 0 {
                let _ = writeln!(out, "  {:<20} {:>7} {:>6.1}%", o.as_str(), c, pct(c, self.trials));
            }
        }
        let stat = |out: &mut String, name: &str, s: &Option<Stat>, unit: &str| {
            if let Some(s) = s {
                let _ = writeln!(out, "  {name:<38} mean {:>8.2} {unit}  sd {:>7.2}  (n = {})", s.mean, s.sd, s.n);
            }
        };
        match &self.detail {
            Detail::Gpws(g) => {
                out.push_str("\nActions by approach (landed crews leave the table)\n");
                let _ =
                    writeln!(out, "  {:<8} {:<10} {:>7} {:>7} {:>13}", "Approach", "Action", "#", "%", "Participants");
                for r in &g.rows {
                    let _ = writeln!(
                        out,
                        "  {:<8} {:<10} {:>7} {:>7.1} {:>13}",
                        r.approach,
                        r.action.label(),
                        r.count,
                        r.percent(),
                        r.participants
                    );
                }
                out.push('\n');
                stat(&mut out, "First-approach go-around height", &g.first_go_around_agl_ft, "ft");
                stat(&mut out, "Attack onset to alert", &g.alert_delay_s, "s ");
            }
            Detail::Tcas(t) => {
                out.push_str("\nFinal TCAS mode by action (percent of all trials)\n");
                let _ = writeln!(
                    out,
                    "  {:<22} {:>14} {:>14} {:>14} {:>14}",
                    "Action", "TA/RA", "TA-Only", "Standby", "Total"
                );
                let cell = |c: u64| format!("{c} ({:.1}%)", pct(c, t.trials));
                for (i, a) in FinalAction::ALL.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "  {:<22} {:>14} {:>14} {:>14} {:>14}",
                        a.label(),
                        cell(t.counts[i][0]),
                        cell(t.counts[i][1]),
                        cell(t.counts[i][2]),
                        cell(t.action_total(*a))
                    );
                }
                let _ = writeln!(
                    out,
                    "  {:<22} {:>14} {:>14} {:>14} {:>14}",
                    "Total",
                    cell(t.mode_total(TcasMode::TaRa)),
                    cell(t.mode_total(TcasMode::TaOnly)),
                    cell(t.mode_total(TcasMode::Standby)),
                    cell(t.trials)
                );
                out.push('\n');
                stat(&mut out, "RAs before leaving TA/RA", &t.ras_before_downgrade, "");
                stat(&mut out, "Further TAs before Standby", &t.tas_before_standby, "");
                stat(&mut out, "Advisory episodes raised by attacker", &t.advisory_episodes, "");
            }
            Detail::Gs(g) => {
                out.push_str("\nFirst approach\n");
                let _ = writeln!(out, "  Land        {:>7} {:>6.1}%", g.land, pct(g.land, g.participants));
                let _ = writeln!(out, "  Go-around   {:>7} {:>6.1}%", g.go_around, g.go_around_percent());
                let _ = writeln!(out, "  Cue conflict noticed {:>7}", g.conflicts_seen);
                out.push('\n');
                stat(&mut out, "Go-around height", &g.go_around_agl_ft, "ft");
                stat(&mut out, "Go-around distance to touchdown zone", &g.go_around_distance_sm, "sm");
                stat(&mut out, "Touchdown along track", &g.touchdown_along_track_m, "m ");
                if !g.fallback.is_empty() {
                    out.push_str("\nFallback approach (percent of all trials)\n");
                    for (a, &c) in &g.fallback {
                        let _ = writeln!(out, "  {:<10} {:>7} {:>6.1}%", a.label(), c, g.fallback_percent(*a));
                    }
                }
            }
        }
        out
    }
}
