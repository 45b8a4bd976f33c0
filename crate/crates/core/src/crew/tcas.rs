use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::Categorical;
use crate::stats::{Moments, RoundedNormal};
use crate::tcas::{Advisory, AdvisoryLevel, TcasMode};

use super::CrewError;

/// What the crew ends up doing about the traffic, whatever the mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FinalAction {
    Continue,
    Avoidance,
    Divert,
}

impl FinalAction {
    pub const ALL: [Self; 3] = [Self::Continue, Self::Avoidance, Self::Divert];

    pub fn label(self) -> &'static str {
        match self {
            Self::Continue => "Continue on route",
            Self::Avoidance => "Avoidance manoeuvre",
            Self::Divert => "Divert to origin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TcasAction {
    FollowRa,
    SetTaOnly,
    SetStandby,
    Avoidance,
    Divert,
    Continue,
}

impl From<FinalAction> for TcasAction {
    fn from(a: FinalAction) -> Self {
        match a {
            FinalAction::Continue => Self::Continue,
            FinalAction::Avoidance => Self::Avoidance,
            FinalAction::Divert => Self::Divert,
        }
    }
}

/// One cell of the final-mode by action table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TcasCell {
    pub mode: TcasMode,
    pub action: FinalAction,
    pub weight: f64,
}

/// Joint final-mode/action weights plus downgrade timing.
///
/// `ras_before_ta_only.sd` and `extra_tas_before_standby.sd` are the spread
/// of the normal before rounding and truncation; the means are matched
/// after both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TcasPolicy {
    pub cells: Vec<TcasCell>,
    pub ras_before_ta_only: Moments,
    pub extra_tas_before_standby: Moments,
}

impl Default for TcasPolicy {
    fn default() -> Self {
        use FinalAction::*;
        use TcasMode::*;
        let cell = |mode, action, weight| TcasCell { mode, action, weight };
        Self {
            cells: alloc::vec![
                cell(TaRa, Continue, 4.0),
                cell(TaRa, Avoidance, 0.0),
                cell(TaRa, Divert, 0.0),
                cell(TaOnly, Continue, 10.0),
                cell(TaOnly, Avoidance, 3.0),
                cell(TaOnly, Divert, 2.0),
                cell(Standby, Continue, 8.0),
                cell(Standby, Avoidance, 3.0),
                cell(Standby, Divert, 0.0),
            ],
            ras_before_ta_only: Moments::new(4.5, 1.7),
            extra_tas_before_standby: Moments::new(2.8, 2.1),
        }
    }
}

impl TcasPolicy {
    /// Resolve samplers for a campaign of `budget` advisory episodes. A
    /// downgrade must fit within the budget: k RAs then m TAs, k + m <= budget.
    pub fn calibrate(&self, budget: u32) -> Result<CalibratedTcasPolicy, CrewError> {
        let joint = Categorical::from_weights(self.cells.iter().map(|c| ((c.mode, c.action), c.weight)))?;
        let budget = budget as i64;
        if budget < 1 {
            return Ok(CalibratedTcasPolicy { joint, ras: None, extra: Vec::new() });
        }
        let r = self.ras_before_ta_only;
        let ras = RoundedNormal::calibrate_mean(r.mean.clamp(1.0, budget as f64), r.sd, 1, budget)?;
        let e = self.extra_tas_before_standby;
        let mixture = |mu: f64| -> f64 {
            (1..=budget)
                .map(|k| {
                    let d = RoundedNormal { mu, sigma: e.sd, lo: 0, hi: budget - k };
                    ras.pmf(k) * d.mean()
                })
                .sum()
        };
        let (mut a, mut b) = (-20.0 * e.sd, budget as f64 + 20.0 * e.sd);
        let target = e.mean.clamp(0.0, mixture(b));
        for _ in 0..100 {
            let mid = 0.5 * (a + b);
            if mixture(mid) < target {
                a = mid;
            } else {
                b = mid;
            }
        }
        let mu = 0.5 * (a + b);
        let extra = (1..=budget).map(|k| RoundedNormal::new(mu, e.sd, 0, budget - k)).collect::<Result<_, _>>()?;
        Ok(CalibratedTcasPolicy { joint, ras: Some(ras), extra })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedTcasPolicy {
    joint: Categorical<(TcasMode, FinalAction)>,
    ras: Option<RoundedNormal>,
    /// Indexed by k - 1.
    extra: Vec<RoundedNormal>,
}

impl CalibratedTcasPolicy {
    pub fn ras_sampler(&self) -> Option<&RoundedNormal> {
        self.ras.as_ref()
    }

    /// Expected extra TAs before Standby over all Standby-bound crews.
    pub fn expected_extra_tas(&self) -> Option<f64> {
        let ras = self.ras.as_ref()?;
        Some(self.extra.iter().enumerate().map(|(i, d)| ras.pmf(i as i64 + 1) * d.mean()).sum())
    }
}

/// Counts that summarize one crew's path through the modes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcasHistory {
    pub ras: u32,
    pub tas_in_ta_only: u32,
    pub ras_before_downgrade: Option<u32>,
    pub tas_before_standby: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct TcasCrew {
    target_mode: TcasMode,
    final_action: FinalAction,
    ra_threshold: Option<u32>,
    ta_threshold: Option<u32>,
    mode: TcasMode,
    final_done: bool,
    history: TcasHistory,
}

impl TcasCrew {
    pub fn new<R: Rng + ?Sized>(policy: &CalibratedTcasPolicy, rng: &mut R) -> Self {
        let (target_mode, final_action) = policy.joint.sample(rng);
        let mut ra_threshold = None;
        let mut ta_threshold = None;
        if target_mode != TcasMode::TaRa {
            if let Some(ras) = &policy.ras {
                let k = ras.sample(rng) as u32;
                ra_threshold = Some(k);
                if target_mode == TcasMode::Standby {
                    ta_threshold = Some(policy.extra[k as usize - 1].sample(rng) as u32);
                }
            }
        }
        Self {
            target_mode,
            final_action,
            ra_threshold,
            ta_threshold,
            mode: TcasMode::TaRa,
            final_done: false,
            history: TcasHistory::default(),
        }
    }

    /// Crew with fixed thresholds, for scripted tests.
    pub fn scripted(target_mode: TcasMode, final_action: FinalAction, ras: Option<u32>, tas: Option<u32>) -> Self {
        Self {
            target_mode,
            final_action,
            ra_threshold: ras,
            ta_threshold: tas,
            mode: TcasMode::TaRa,
            final_done: false,
            history: TcasHistory::default(),
        }
    }

    pub fn mode(&self) -> TcasMode {
        self.mode
    }

    pub fn target_mode(&self) -> TcasMode {
        self.target_mode
    }

    pub fn final_action(&self) -> FinalAction {
        self.final_action
    }

    pub fn thresholds(&self) -> (Option<u32>, Option<u32>) {
        (self.ra_threshold, self.ta_threshold)
    }

    pub fn history(&self) -> &TcasHistory {
        &self.history
    }

    /// Response to a newly raised advisory.
    pub fn act(&mut self, event: &Advisory) -> Vec<TcasAction> {
        let mut out = Vec::new();
        match (self.mode, event.level) {
            (TcasMode::TaRa, AdvisoryLevel::Ra) => {
                self.history.ras += 1;
                if self.ra_threshold == Some(self.history.ras) {
                    self.history.ras_before_downgrade = Some(self.history.ras);
                    if self.target_mode == TcasMode::Standby && self.ta_threshold == Some(0) {
                        self.history.tas_before_standby = Some(0);
                        self.mode = TcasMode::Standby;
                        out.push(TcasAction::SetStandby);
                    } else {
                        self.mode = TcasMode::TaOnly;
                        out.push(TcasAction::SetTaOnly);
                    }
                } else {
                    out.push(TcasAction::FollowRa);
                }
            }
            (TcasMode::TaOnly, AdvisoryLevel::Ta) => {
                self.history.tas_in_ta_only += 1;
                if self.target_mode == TcasMode::Standby && self.ta_threshold == Some(self.history.tas_in_ta_only) {
                    self.history.tas_before_standby = Some(self.history.tas_in_ta_only);
                    self.mode = TcasMode::Standby;
                    out.push(TcasAction::SetStandby);
                }
            }
            (TcasMode::Standby, _) => return out,
            _ => {}
        }
        if self.mode == self.target_mode {
            match self.final_action {
                FinalAction::Avoidance => out.push(TcasAction::Avoidance),
                a if !self.final_done => out.push(a.into()),
                _ => {}
            }
            self.final_done = true;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, trial_seed, Stream};
    use crate::stats::RunningMoments;
    use crate::tcas::{IcaoAddress, TrackId};

    fn adv(level: AdvisoryLevel) -> Advisory {
        Advisory {
            level,
            track: TrackId::Icao(IcaoAddress::new(1).unwrap()),
            time_s: 0.0,
            tau_s: 20.0,
            sense: None,
            commanded_rate_fpm: None,
        }
    }

    /// Feed a full campaign of `budget` encounters, each a TA then (in TA/RA) an RA.
    fn campaign(crew: &mut TcasCrew, budget: u32) -> Vec<TcasAction> {
        let mut all = Vec::new();
        for _ in 0..budget {
            let m = crew.mode();
            if m == TcasMode::Standby {
                break;
            }
            all.extend(crew.act(&adv(AdvisoryLevel::Ta)));
            if m == TcasMode::TaRa && crew.mode() == TcasMode::TaRa {
                all.extend(crew.act(&adv(AdvisoryLevel::Ra)));
            }
        }
        all
    }

    #[test]
    fn follows_until_threshold() {
        let mut c = TcasCrew::scripted(TcasMode::TaOnly, FinalAction::Continue, Some(3), None);
        assert_eq!(c.act(&adv(AdvisoryLevel::Ra)), [TcasAction::FollowRa]);
        assert_eq!(c.act(&adv(AdvisoryLevel::Ra)), [TcasAction::FollowRa]);
        assert_eq!(c.act(&adv(AdvisoryLevel::Ra)), [TcasAction::SetTaOnly, TcasAction::Continue]);
        assert_eq!(c.mode(), TcasMode::TaOnly);
        assert!(c.act(&adv(AdvisoryLevel::Ta)).is_empty());
    }

    #[test]
    fn three_then_zero_goes_straight_to_standby() {
        let mut c = TcasCrew::scripted(TcasMode::Standby, FinalAction::Continue, Some(3), Some(0));
        let acts = campaign(&mut c, 10);
        assert_eq!(acts.iter().filter(|a| **a == TcasAction::SetTaOnly).count(), 0);
        assert_eq!(&acts[acts.len() - 2..], [TcasAction::SetStandby, TcasAction::Continue]);
        assert_eq!(c.history().ras_before_downgrade, Some(3));
        assert_eq!(c.history().tas_before_standby, Some(0));
    }

    #[test]
    fn never_downgrade_policy() {
        let p = TcasPolicy {
            cells: alloc::vec![TcasCell { mode: TcasMode::TaRa, action: FinalAction::Continue, weight: 1.0 }],
            ..Default::default()
        };
        let cal = p.calibrate(10).unwrap();
        for s in 0..200 {
            let mut c = TcasCrew::new(&cal, &mut stream(s, Stream::Crew));
            let acts = campaign(&mut c, 10);
            assert_eq!(c.mode(), TcasMode::TaRa);
            assert_eq!(acts.iter().filter(|a| **a == TcasAction::FollowRa).count(), 10);
        }
    }

    #[test]
    fn calibrated_means() {
        let cal = TcasPolicy::default().calibrate(10).unwrap();
        assert!((cal.ras_sampler().unwrap().mean() - 4.5).abs() < 1e-9);
        assert!((cal.expected_extra_tas().unwrap() - 2.8).abs() < 1e-9);
    }

    #[test]
    fn population_matches_table() {
        let cal = TcasPolicy::default().calibrate(10).unwrap();
        let n = 10_000u64;
        let mut modes = [0u32; 3];
        let mut ras = RunningMoments::default();
        let mut extra = RunningMoments::default();
        for i in 0..n {
            let mut c = TcasCrew::new(&cal, &mut stream(trial_seed(99, i), Stream::Crew));
            campaign(&mut c, 10);
            assert_eq!(c.mode(), c.target_mode());
            modes[c.mode() as usize] += 1;
            if let Some(k) = c.history().ras_before_downgrade {
                ras.push(k as f64);
            }
            if let Some(m) = c.history().tas_before_standby {
                extra.push(m as f64);
            }
        }
        let pct = |c: u32| 100.0 * c as f64 / n as f64;
        assert!((pct(modes[TcasMode::TaRa as usize]) - 13.3).abs() < 1.5);
        assert!((pct(modes[TcasMode::TaOnly as usize]) - 50.0).abs() < 1.5);
        assert!((pct(modes[TcasMode::Standby as usize]) - 36.7).abs() < 1.5);
        assert!((ras.mean().unwrap() - 4.5).abs() < 0.1, "{ras:?}");
        assert!((extra.mean().unwrap() - 2.8).abs() < 0.1, "{extra:?}");
    }

    #[test]
    fn deterministic_per_seed() {
        let cal = TcasPolicy::default().calibrate(10).unwrap();
        for s in 0..50 {
            let mut a = TcasCrew::new(&cal, &mut stream(s, Stream::Crew));
            let mut b = TcasCrew::new(&cal, &mut stream(s, Stream::Crew));
            assert_eq!(campaign(&mut a, 10), campaign(&mut b, 10));
        }
    }
}
