use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::gpws::GpwsAlert;
use crate::rng::Categorical;
use crate::stats::{Moments, StatsError, TruncatedNormal};

use super::{categorical, CrewError, Weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GpwsAction {
    Land,
    GoAround,
    TurnOffGpws,
}

impl GpwsAction {
    pub fn label(self) -> &'static str {
        match self {
            Self::Land => "Land",
            Self::GoAround => "Go-around",
            Self::TurnOffGpws => "Turn off",
        }
    }
}

/// Per-approach action tables; the last row covers every later approach.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GpwsPolicy {
    pub approaches: Vec<Weights<GpwsAction>>,
    /// Height at which first-approach go-arounds begin.
    pub go_around_agl_ft: Moments,
    /// Reaction latency; derived from `go_around_agl_ft` when absent.
    pub latency_s: Option<TruncatedNormal>,
    pub max_latency_s: f64,
}

impl Default for GpwsPolicy {
    fn default() -> Self {
        use GpwsAction::*;
        Self {
            approaches: alloc::vec![
                [(Land, 10.0), (GoAround, 20.0)].into_iter().collect(),
                [(TurnOffGpws, 11.0), (Land, 8.0), (GoAround, 1.0)].into_iter().collect(),
                [(TurnOffGpws, 1.0)].into_iter().collect(),
            ],
            go_around_agl_ft: Moments::new(403.9, 51.1),
            latency_s: None,
            max_latency_s: 30.0,
        }
    }
}

/// What the latency calibration needs to know about the approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyInputs {
    pub trigger_mean_ft: f64,
    pub trigger_var_ft2: f64,
    /// True descent rate during the attack, ft/s, positive down.
    pub descent_ft_per_s: f64,
    /// Delay from attack onset to the alert.
    pub alert_delay_mean_s: f64,
    pub alert_delay_var_s2: f64,
}

/// Latency distribution that makes go-around heights match `target`.
///
/// The go-around starts at `trigger - descent * (delay + latency)`, with
/// trigger, delay and latency independent, so the latency mean and variance
/// follow directly; truncation at zero is then undone by calibration.
pub fn calibrate_latency(
    target: Moments,
    inputs: &LatencyInputs,
    max_latency_s: f64,
) -> Result<TruncatedNormal, CrewError> {
    let r = inputs.descent_ft_per_s;
    if !(r > 0.0) {
        return Err(CrewError::BadPolicy("descent rate must be positive"));
    }
    let mean = (inputs.trigger_mean_ft - target.mean) / r - inputs.alert_delay_mean_s;
    let var = (target.sd * target.sd - inputs.trigger_var_ft2) / (r * r) - inputs.alert_delay_var_s2;
    if !(mean > 0.0) || !(var > 0.0) {
        return Err(CrewError::Stats(StatsError::InvalidParameters(
            "target go-around heights leave no room for reaction latency",
        )));
    }
    Ok(TruncatedNormal::calibrate(Moments::new(mean, libm::sqrt(var)), 0.0, max_latency_s)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpwsResponse {
    pub action: GpwsAction,
    /// Seconds from alert to go-around initiation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_s: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GpwsCrew {
    tables: Vec<Categorical<GpwsAction>>,
    latency: TruncatedNormal,
    gpws_off: bool,
}

impl GpwsCrew {
    pub fn new(policy: &GpwsPolicy, latency: TruncatedNormal) -> Result<Self, CrewError> {
        if policy.approaches.is_empty() {
            return Err(CrewError::BadPolicy("no approach tables"));
        }
        let tables = policy.approaches.iter().map(categorical).collect::<Result<_, _>>()?;
        Ok(Self { tables, latency, gpws_off: false })
    }

    pub fn gpws_off(&self) -> bool {
        self.gpws_off
    }

    /// Decision at an alert on approach `approach_index` (1-based), or at
    /// the end of an approach that produced no alert.
    pub fn act<R: Rng + ?Sized>(
        &mut self,
        approach_index: u32,
        alert: Option<&GpwsAlert>,
        rng: &mut R,
    ) -> GpwsResponse {
        if alert.is_none() || self.gpws_off {
            return GpwsResponse { action: GpwsAction::Land, latency_s: None };
        }
        let row = (approach_index.max(1) as usize - 1).min(self.tables.len() - 1);
        let action = self.tables[row].sample(rng);
        let latency_s = match action {
            GpwsAction::GoAround => Some(self.latency.sample(rng)),
            GpwsAction::TurnOffGpws => {
                self.gpws_off = true;
                None
            }
            GpwsAction::Land => None,
        };
        GpwsResponse { action, latency_s }
    }
}
