use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ils::{GsIndication, PapiIndication};
use crate::rng::Categorical;
use crate::stats::{Moments, TruncatedNormal};

use super::{categorical, CrewError, Weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ApproachType {
    Vor,
    Sra,
    LocDme,
    Rnav,
    Visual,
}

impl ApproachType {
    pub const ALL: [Self; 5] = [Self::Vor, Self::Sra, Self::LocDme, Self::Rnav, Self::Visual];

    pub fn label(self) -> &'static str {
        match self {
            Self::Vor => "VOR",
            Self::Sra => "SRA",
            Self::LocDme => "LOC/DME",
            Self::Rnav => "RNAV",
            Self::Visual => "Visual",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GsDecision {
    GoAround,
    Land,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GsAction {
    Continue,
    GoAround { agl_ft: f64 },
    SelectApproach(ApproachType),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GsPolicy {
    pub decision: Weights<GsDecision>,
    pub go_around_agl_ft: Moments,
    pub go_around_bounds_ft: [f64; 2],
    pub fallback: Weights<ApproachType>,
    /// Glideslope needle within this many dots counts as centered.
    pub centered_dots: f64,
}

impl Default for GsPolicy {
    fn default() -> Self {
        use ApproachType::*;
        Self {
            decision: [(GsDecision::GoAround, 26.0), (GsDecision::Land, 4.0)].into_iter().collect(),
            go_around_agl_ft: Moments::new(930.0, 235.8),
            go_around_bounds_ft: [200.0, 1500.0],
            fallback: [(Vor, 1.0), (Sra, 2.0), (LocDme, 8.0), (Rnav, 9.0), (Visual, 6.0)].into_iter().collect(),
            centered_dots: 0.5,
        }
    }
}

impl GsPolicy {
    pub fn calibrate(&self) -> Result<CalibratedGsPolicy, CrewError> {
        let [lo, hi] = self.go_around_bounds_ft;
        Ok(CalibratedGsPolicy {
            decision: categorical(&self.decision)?,
            go_around_agl_ft: TruncatedNormal::calibrate(self.go_around_agl_ft, lo, hi)?,
            fallback: categorical(&self.fallback)?,
            centered_dots: self.centered_dots,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedGsPolicy {
    pub decision: Categorical<GsDecision>,
    pub go_around_agl_ft: TruncatedNormal,
    pub fallback: Categorical<ApproachType>,
    pub centered_dots: f64,
}

/// Crew flying a glideslope approach, watching for the needle and the
/// PAPI disagreeing.
#[derive(Debug, Clone)]
pub struct GsCrew {
    decision: GsDecision,
    threshold_ft: f64,
    fallback: ApproachType,
    centered_dots: f64,
    conflict_seen: bool,
    decided: bool,
}

impl GsCrew {
    pub fn new<R: Rng + ?Sized>(policy: &CalibratedGsPolicy, rng: &mut R) -> Self {
        let decision = policy.decision.sample(rng);
        let threshold_ft = policy.go_around_agl_ft.sample(rng);
        let fallback = policy.fallback.sample(rng);
        Self {
            decision,
            threshold_ft,
            fallback,
            centered_dots: policy.centered_dots,
            conflict_seen: false,
            decided: false,
        }
    }

    pub fn decision(&self) -> GsDecision {
        self.decision
    }

    pub fn threshold_ft(&self) -> f64 {
        self.threshold_ft
    }

    pub fn conflict_seen(&self) -> bool {
        self.conflict_seen
    }

    /// Four whites while the needle sits centered.
    pub fn cue_conflict(&self, gs: &GsIndication, papi: &PapiIndication) -> bool {
        papi.whites == 4 && gs.valid && gs.is_centered(self.centered_dots)
    }

    pub fn act(&mut self, gs: &GsIndication, papi: &PapiIndication, agl_ft: f64) -> Vec<GsAction> {
        if self.cue_conflict(gs, papi) {
            self.conflict_seen = true;
        }
        if self.decided || !self.conflict_seen || self.decision == GsDecision::Land || agl_ft > self.threshold_ft {
            return alloc::vec![GsAction::Continue];
        }
        self.decided = true;
        alloc::vec![GsAction::GoAround { agl_ft }, GsAction::SelectApproach(self.fallback)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, trial_seed, Stream};
    use crate::stats::RunningMoments;
    use crate::Origin;

    fn centered() -> GsIndication {
        GsIndication {
            ddm: 0.0,
            deviation_dots: 0.0,
            captured: Some(1),
            captured_origin: Some(Origin::Adversarial),
            valid: true,
        }
    }

    fn crew_at(threshold: f64, decision: GsDecision) -> GsCrew {
        GsCrew {
            decision,
            threshold_ft: threshold,
            fallback: ApproachType::LocDme,
            centered_dots: 0.5,
            conflict_seen: false,
            decided: false,
        }
    }

    #[test]
    fn goes_around_at_sampled_height() {
        let mut c = crew_at(930.0, GsDecision::GoAround);
        let four = PapiIndication { whites: 4 };
        assert_eq!(c.act(&centered(), &four, 1500.0), [GsAction::Continue]);
        assert_eq!(
            c.act(&centered(), &four, 930.0),
            [GsAction::GoAround { agl_ft: 930.0 }, GsAction::SelectApproach(ApproachType::LocDme)]
        );
        assert_eq!(c.act(&centered(), &four, 900.0), [GsAction::Continue]);
    }

    #[test]
    fn no_conflict_lands() {
        let mut c = crew_at(930.0, GsDecision::GoAround);
        let normal = PapiIndication { whites: 2 };
        for h in (0..1800).rev().step_by(10) {
            assert_eq!(c.act(&centered(), &normal, h as f64), [GsAction::Continue]);
        }
    }

    #[test]
    fn conflict_is_latched() {
        let mut c = crew_at(500.0, GsDecision::GoAround);
        c.act(&centered(), &PapiIndication { whites: 4 }, 1200.0);
        let acts = c.act(&centered(), &PapiIndication { whites: 3 }, 480.0);
        assert_eq!(acts[0], GsAction::GoAround { agl_ft: 480.0 });
    }

    #[test]
    fn population_statistics() {
        let cal = GsPolicy::default().calibrate().unwrap();
        let n = 10_000u64;
        let mut go = 0u32;
        let mut loc = 0u32;
        let mut agl = RunningMoments::default();
        for i in 0..n {
            let c = GsCrew::new(&cal, &mut stream(trial_seed(5, i), Stream::Crew));
            if c.decision() == GsDecision::GoAround {
                go += 1;
                loc += (c.fallback == ApproachType::LocDme) as u32;
                agl.push(c.threshold_ft());
            }
        }
        assert!((go as f64 / n as f64 - 26.0 / 30.0).abs() < 0.015);
        assert!((loc as f64 / go as f64 - 8.0 / 26.0).abs() < 0.015);
        assert!((agl.mean().unwrap() - 930.0).abs() < 10.0);
        assert!((agl.sd().unwrap() - 235.8).abs() < 15.0);
    }
}
