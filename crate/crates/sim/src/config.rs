//! Scenario configuration: JSON, versioned, unknown keys rejected.

use std::path::{Path, PathBuf};

use avspoof_core::crew::{GpwsPolicy, GsPolicy, TcasPolicy};
use avspoof_core::gpws::{AttackSchedule, Mode2Envelope};
use avspoof_core::ils::{GlideslopeTx, GsReceiverConfig, PapiConfig};
use avspoof_core::radalt::SweepConfig;
use avspoof_core::sentinel::{GroundSensor, ToaConfig};
use avspoof_core::tcas::{FalseIntruderPlan, IcaoAddress, TcasConfig};
use avspoof_core::world::{PerformanceLimits, RunwayModel, TerrainProfile};
use avspoof_core::Origin;
use serde::{Deserialize, Serialize};

use crate::SimError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
#[value(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScenarioKind {
    Gpws,
    Tcas,
    Gs,
    /// Glideslope approach with no attacker.
    Baseline,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Gpws => "GPWS",
            Self::Tcas => "TCAS",
            Self::Gs => "GS",
            Self::Baseline => "BASELINE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    pub scenario: ScenarioKind,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub world: WorldConfig,
    #[serde(default)]
    pub gpws: GpwsScenario,
    #[serde(default)]
    pub tcas: TcasScenario,
    #[serde(default)]
    pub gs: GsScenario,
}

fn default_trials() -> u64 {
    1000
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    /// Record a state sample every this many seconds (0 = off).
    pub trace_interval_s: f64,
    /// Record every surveillance message in TCAS trials.
    pub messages: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WorldConfig {
    pub runway: RunwayModel,
    /// Flat at runway elevation when absent.
    pub terrain: Option<TerrainProfile>,
    pub limits: PerformanceLimits,
    pub step_s: f64,
}

impl Default for WorldConfig {
    fn default() -> Self {
        Self { runway: RunwayModel::default(), terrain: None, limits: PerformanceLimits::default(), step_s: 0.1 }
    }
}

impl WorldConfig {
    pub fn terrain(&self) -> TerrainProfile {
        self.terrain.clone().unwrap_or_else(|| TerrainProfile::flat(self.runway.elevation_m))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GpwsScenario {
    pub start_agl_ft: f64,
    pub descent_fpm: f64,
    pub ground_speed_kt: f64,
    pub go_around_climb_fpm: f64,
    pub go_around_duration_s: f64,
    pub max_approaches: u32,
    pub sweep: SweepConfig,
    pub envelope: Mode2Envelope,
    pub schedule: AttackSchedule,
    pub spoof_rate_fpm: f64,
    pub spoof_duration_s: f64,
    pub genuine_echo_db: f64,
    pub spoof_margin_db: f64,
    pub policy: GpwsPolicy,
}

impl Default for GpwsScenario {
    fn default() -> Self {
        Self {
            start_agl_ft: 1200.0,
            descent_fpm: 700.0,
            ground_speed_kt: 130.0,
            go_around_climb_fpm: 1500.0,
            go_around_duration_s: 20.0,
            max_approaches: 5,
            sweep: SweepConfig::default(),
            envelope: Mode2Envelope::default(),
            schedule: AttackSchedule::default(),
            spoof_rate_fpm: 3000.0,
            spoof_duration_s: 5.0,
            genuine_echo_db: -60.0,
            spoof_margin_db: 10.0,
            policy: GpwsPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficSpec {
    pub icao: IcaoAddress,
    pub position_m: [f64; 2],
    pub altitude_ft: f64,
    pub heading_deg: f64,
    pub ground_speed_kt: f64,
    #[serde(default = "yes")]
    pub mode_s: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TcasScenario {
    pub start_position_m: [f64; 2],
    pub heading_deg: f64,
    pub cruise_altitude_ft: f64,
    pub ground_elevation_ft: f64,
    pub ground_speed_kt: f64,
    pub duration_s: f64,
    pub ra_response_latency_s: f64,
    pub avoidance_climb_ft: f64,
    pub tcas: TcasConfig,
    pub plan: FalseIntruderPlan,
    /// Disable to fly the route with genuine traffic only.
    pub attacker: bool,
    pub traffic: Vec<TrafficSpec>,
    pub policy: TcasPolicy,
    pub sensors: Vec<GroundSensor>,
    pub sensor_jitter_s: f64,
    pub toa: ToaConfig,
}

impl Default for TcasScenario {
    fn default() -> Self {
        let sensor = |id, x, y, z| GroundSensor { id, position_m: [x, y, z], clock_bias_s: 0.0 };
        Self {
            start_position_m: [-150_000.0, 8_000.0],
            heading_deg: 0.0,
            cruise_altitude_ft: 35_000.0,
            ground_elevation_ft: 0.0,
            ground_speed_kt: 450.0,
            duration_s: 1200.0,
            ra_response_latency_s: 5.0,
            avoidance_climb_ft: 1000.0,
            tcas: TcasConfig::default(),
            plan: FalseIntruderPlan::default(),
            attacker: true,
            traffic: vec![TrafficSpec {
                icao: IcaoAddress::new(0x40_6A3F).expect("24-bit"),
                position_m: [-60_000.0, 30_000.0],
                altitude_ft: 37_000.0,
                heading_deg: 180.0,
                ground_speed_kt: 420.0,
                mode_s: true,
            }],
            policy: TcasPolicy::default(),
            sensors: vec![
                sensor(1, -45_000.0, -30_000.0, 40.0),
                sensor(2, 50_000.0, -20_000.0, 15.0),
                sensor(3, 10_000.0, 55_000.0, 120.0),
                sensor(4, -20_000.0, 25_000.0, 60.0),
            ],
            sensor_jitter_s: 100e-9,
            toa: ToaConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GsScenario {
    pub start_agl_ft: f64,
    pub ground_speed_kt: f64,
    pub genuine: GlideslopeTx,
    pub rogue: GlideslopeTx,
    pub receiver: GsReceiverConfig,
    pub papi: PapiConfig,
    /// Seconds to close half the gap to the beam.
    pub guidance_time_constant_s: f64,
    /// Height at which landing crews leave the needle and fly visually.
    pub visual_transition_ft: f64,
    pub go_around_climb_fpm: f64,
    pub go_around_duration_s: f64,
    pub policy: GsPolicy,
}

impl Default for GsScenario {
    fn default() -> Self {
        let runway = RunwayModel::default();
        let tdz = runway.touchdown_along_track_m();
        let tx = |name: &str, x: f64, power, legitimacy| GlideslopeTx {
            name: name.into(),
            antenna_along_track_m: x,
            antenna_elevation_m: runway.elevation_m,
            path_angle_deg: 3.0,
            tx_power_w: power,
            legitimacy,
        };
        Self {
            start_agl_ft: 1800.0,
            ground_speed_kt: 130.0,
            genuine: tx("GS", tdz, 5.0, Origin::Genuine),
            rogue: tx("ROGUE", tdz + 2050.0, 500.0, Origin::Adversarial),
            receiver: GsReceiverConfig::default(),
            papi: PapiConfig::default(),
            guidance_time_constant_s: 4.0,
            visual_transition_ft: 200.0,
            go_around_climb_fpm: 1500.0,
            go_around_duration_s: 30.0,
            policy: GsPolicy::default(),
        }
    }
}

// Negated comparisons below also reject NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
impl ScenarioConfig {
    pub fn new(scenario: ScenarioKind) -> Self {
        Self {
            version: SCHEMA_VERSION,
            scenario,
            trials: default_trials(),
            seed: 0,
            output: OutputConfig::default(),
            world: WorldConfig::default(),
            gpws: GpwsScenario::default(),
            tcas: TcasScenario::default(),
            gs: GsScenario::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            SimError::config(if path == "." { "<root>".into() } else { path }, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Semantic checks the schema cannot express.
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |field: &str, msg: &str| Err(SimError::config(field, msg));
        if self.version != SCHEMA_VERSION {
            return bad("version", &format!("unsupported schema version {}, expected {SCHEMA_VERSION}", self.version));
        }
        if self.trials == 0 {
            return bad("trials", "must be at least 1");
        }
        if !(self.output.trace_interval_s >= 0.0) {
            return bad("output.trace_interval_s", "must be non-negative");
        }
        let w = &self.world;
        if !(w.step_s > 0.0 && w.step_s <= 1.0) {
            return bad("world.step_s", "must lie in (0, 1] seconds");
        }
        w.runway.validate().or_else(|e| bad("world.runway", &e.to_string()))?;
        match self.scenario {
            ScenarioKind::Gpws => self.validate_gpws(),
            ScenarioKind::Tcas => self.validate_tcas(),
            ScenarioKind::Gs | ScenarioKind::Baseline => self.validate_gs(),
        }
    }

    fn validate_gpws(&self) -> Result<(), SimError> {
        let g = &self.gpws;
        let pos = |field: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SimError::config(format!("gpws.{field}"), "must be positive"))
            }
        };
        pos("start_agl_ft", g.start_agl_ft)?;
        pos("descent_fpm", g.descent_fpm)?;
        pos("ground_speed_kt", g.ground_speed_kt)?;
        pos("go_around_climb_fpm", g.go_around_climb_fpm)?;
        pos("spoof_duration_s", g.spoof_duration_s)?;
        if g.max_approaches == 0 {
            return Err(SimError::config("gpws.max_approaches", "must be at least 1"));
        }
        if !(g.spoof_rate_fpm >= 0.0) {
            return Err(SimError::config("gpws.spoof_rate_fpm", "must be non-negative"));
        }
        g.sweep.validate().map_err(|e| SimError::config("gpws.sweep", e.to_string()))?;
        g.envelope.validate().map_err(|e| SimError::config("gpws.envelope", e.to_string()))?;
        g.schedule.validate().map_err(|e| SimError::config("gpws.schedule", e.to_string()))?;
        if g.policy.approaches.is_empty() {
            return Err(SimError::config("gpws.policy.approaches", "needs at least one table"));
        }
        Ok(())
    }

    fn validate_tcas(&self) -> Result<(), SimError> {
        let t = &self.tcas;
        if !(t.duration_s > 0.0) {
            return Err(SimError::config("tcas.duration_s", "must be positive"));
        }
        if !(t.ground_speed_kt > 0.0) {
            return Err(SimError::config("tcas.ground_speed_kt", "must be positive"));
        }
        if !(t.ra_response_latency_s >= 0.0) {
            return Err(SimError::config("tcas.ra_response_latency_s", "must be non-negative"));
        }
        t.plan.validate().map_err(|e| SimError::config("tcas.plan", e.to_string()))?;
        if !(t.sensor_jitter_s >= 0.0) {
            return Err(SimError::config("tcas.sensor_jitter_s", "must be non-negative"));
        }
        if !t.sensors.is_empty() {
            avspoof_core::sentinel::validate_network(&t.sensors)
                .map_err(|e| SimError::config("tcas.sensors", e.to_string()))?;
        }
        Ok(())
    }

    fn validate_gs(&self) -> Result<(), SimError> {
        let g = &self.gs;
        if !(g.start_agl_ft > g.visual_transition_ft && g.visual_transition_ft >= 0.0) {
            return Err(SimError::config("gs.start_agl_ft", "must exceed gs.visual_transition_ft"));
        }
        if !(g.ground_speed_kt > 0.0) {
            return Err(SimError::config("gs.ground_speed_kt", "must be positive"));
        }
        if !(g.guidance_time_constant_s > 0.0) {
            return Err(SimError::config("gs.guidance_time_constant_s", "must be positive"));
        }
        g.genuine.validate().map_err(|e| SimError::config("gs.genuine", e.to_string()))?;
        g.rogue.validate().map_err(|e| SimError::config("gs.rogue", e.to_string()))?;
        Ok(())
    }
}
