//! Point-mass aircraft kinematics and runway/terrain geometry.
//!
//! The ground frame is runway-relative: `x` runs along the landing
//! direction with the threshold at the runway's `threshold_along_track_m`,
//! `y` is cross-track (positive right of the centerline). Aircraft on
//! approach therefore have `x` below the threshold.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::{cos_deg, sin_deg, Vec3};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WorldError {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("time step must be positive, got {0}")]
    BadStep(f64),
    #[error("commanded {what} {value} outside performance limits")]
    OutsideLimits { what: &'static str, value: f64 },
    #[error("position {0} m lies outside the terrain profile")]
    OutsideTerrain(f64),
    #[error("aircraft is not descending (vertical speed {0} m/s)")]
    NotDescending(f64),
    #[error("invalid terrain profile: {0}")]
    BadTerrain(&'static str),
    #[error("invalid runway: {0}")]
    BadRunway(&'static str),
}

/// Own-ship kinematic state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AircraftState {
    pub time_s: f64,
    /// Along-track / cross-track position, meters.
    pub position_m: [f64; 2],
    pub altitude_msl_m: f64,
    /// Negative when descending.
    pub vertical_speed_mps: f64,
    pub ground_speed_mps: f64,
    /// Degrees relative to the along-track axis (0 = landing direction).
    pub heading_deg: f64,
}

impl AircraftState {
    pub fn new(position_m: [f64; 2], altitude_msl_m: f64, ground_speed_mps: f64) -> Self {
        Self { time_s: 0.0, position_m, altitude_msl_m, vertical_speed_mps: 0.0, ground_speed_mps, heading_deg: 0.0 }
    }

    pub fn along_track_m(&self) -> f64 {
        self.position_m[0]
    }

    pub fn position3(&self) -> Vec3 {
        [self.position_m[0], self.position_m[1], self.altitude_msl_m]
    }

    /// Horizontal and vertical velocity as a 3-vector.
    pub fn velocity3(&self) -> Vec3 {
        [
            self.ground_speed_mps * cos_deg(self.heading_deg),
            self.ground_speed_mps * sin_deg(self.heading_deg),
            self.vertical_speed_mps,
        ]
    }

    fn is_finite(&self) -> bool {
        self.time_s.is_finite()
            && self.position_m.iter().all(|v| v.is_finite())
            && self.altitude_msl_m.is_finite()
            && self.vertical_speed_mps.is_finite()
            && self.ground_speed_mps.is_finite()
            && self.heading_deg.is_finite()
    }
}

/// Commanded rates held constant over one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Command {
    pub vertical_speed_mps: f64,
    pub ground_speed_mps: f64,
}

impl Command {
    pub fn new(vertical_speed_mps: f64, ground_speed_mps: f64) -> Self {
        Self { vertical_speed_mps, ground_speed_mps }
    }
}

/// Configured performance envelope. Not ground truth; scenario files may
/// override it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerformanceLimits {
    pub max_climb_mps: f64,
    pub max_descent_mps: f64,
    pub max_ground_speed_mps: f64,
}

impl Default for PerformanceLimits {
    fn default() -> Self {
        Self { max_climb_mps: 30.0, max_descent_mps: 30.0, max_ground_speed_mps: 300.0 }
    }
}

impl PerformanceLimits {
    fn check(&self, cmd: &Command) -> Result<(), WorldError> {
        if cmd.vertical_speed_mps > self.max_climb_mps || cmd.vertical_speed_mps < -self.max_descent_mps {
            return Err(WorldError::OutsideLimits { what: "vertical speed", value: cmd.vertical_speed_mps });
        }
        if cmd.ground_speed_mps < 0.0 || cmd.ground_speed_mps > self.max_ground_speed_mps {
            return Err(WorldError::OutsideLimits { what: "ground speed", value: cmd.ground_speed_mps });
        }
        Ok(())
    }
}

/// Advance `state` by `dt` seconds holding `cmd` constant.
///
/// Integration is closed-form, so splitting a step in two lands on the same
/// state up to floating-point rounding.
pub fn step(
    state: &AircraftState,
    cmd: Command,
    dt: f64,
    limits: &PerformanceLimits,
) -> Result<AircraftState, WorldError> {
    if !state.is_finite() {
        return Err(WorldError::NonFinite("state"));
    }
    if !cmd.vertical_speed_mps.is_finite() || !cmd.ground_speed_mps.is_finite() {
        return Err(WorldError::NonFinite("command"));
    }
    if !dt.is_finite() {
        return Err(WorldError::NonFinite("dt"));
    }
    if dt <= 0.0 {
        return Err(WorldError::BadStep(dt));
    }
    limits.check(&cmd)?;
    let (c, s) = (cos_deg(state.heading_deg), sin_deg(state.heading_deg));
    let d = cmd.ground_speed_mps * dt;
    Ok(AircraftState {
        time_s: state.time_s + dt,
        position_m: [state.position_m[0] + d * c, state.position_m[1] + d * s],
        altitude_msl_m: state.altitude_msl_m + cmd.vertical_speed_mps * dt,
        vertical_speed_mps: cmd.vertical_speed_mps,
        ground_speed_mps: cmd.ground_speed_mps,
        heading_deg: state.heading_deg,
    })
}

/// Piecewise-linear terrain elevation along track.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct TerrainProfile {
    /// (along-track m, elevation m), strictly increasing in along-track.
    points: Vec<[f64; 2]>,
}

impl TerrainProfile {
    /// A single point means flat terrain everywhere.
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self, WorldError> {
        if points.is_empty() {
            return Err(WorldError::BadTerrain("no points"));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(WorldError::BadTerrain("non-finite point"));
        }
        if points.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(WorldError::BadTerrain("along-track positions must strictly increase"));
        }
        Ok(Self { points })
    }

    pub fn flat(elevation_m: f64) -> Self {
        Self { points: alloc::vec![[0.0, elevation_m]] }
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn elevation_at(&self, x: f64) -> Result<f64, WorldError> {
        if !x.is_finite() {
            return Err(WorldError::NonFinite("position"));
        }
        if self.points.len() == 1 {
            return Ok(self.points[0][1]);
        }
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if x < first[0] || x > last[0] {
            return Err(WorldError::OutsideTerrain(x));
        }
        let i = self.points.partition_point(|p| p[0] <= x);
        if i >= self.points.len() {
            return Ok(last[1]);
        }
        let (a, b) = (self.points[i - 1], self.points[i]);
        let f = (x - a[0]) / (b[0] - a[0]);
        Ok(a[1] + f * (b[1] - a[1]))
    }
}

impl TryFrom<Vec<[f64; 2]>> for TerrainProfile {
    type Error = WorldError;
    fn try_from(points: Vec<[f64; 2]>) -> Result<Self, Self::Error> {
        Self::new(points)
    }
}

impl From<TerrainProfile> for Vec<[f64; 2]> {
    fn from(t: TerrainProfile) -> Self {
        t.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunwayModel {
    pub threshold_along_track_m: f64,
    /// Touchdown aim point, meters past the threshold.
    pub touchdown_zone_offset_m: f64,
    pub elevation_m: f64,
    pub true_bearing_deg: f64,
    pub length_m: f64,
}

impl Default for RunwayModel {
    fn default() -> Self {
        Self {
            threshold_along_track_m: 0.0,
            touchdown_zone_offset_m: 300.0,
            elevation_m: 99.0,
            true_bearing_deg: 330.0,
            length_m: 3052.0,
        }
    }
}

impl RunwayModel {
    pub fn validate(&self) -> Result<(), WorldError> {
        let vals = [
            self.threshold_along_track_m,
            self.touchdown_zone_offset_m,
            self.elevation_m,
            self.true_bearing_deg,
            self.length_m,
        ];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(WorldError::BadRunway("non-finite field"));
        }
        if !(0.0 <= self.touchdown_zone_offset_m && self.touchdown_zone_offset_m < self.length_m) {
            return Err(WorldError::BadRunway("touchdown zone must lie on the runway"));
        }
        Ok(())
    }

    pub fn touchdown_along_track_m(&self) -> f64 {
        self.threshold_along_track_m + self.touchdown_zone_offset_m
    }

    pub fn far_end_along_track_m(&self) -> f64 {
        self.threshold_along_track_m + self.length_m
    }
}

/// Height above the terrain directly below the aircraft.
pub fn agl(state: &AircraftState, terrain: &TerrainProfile) -> Result<f64, WorldError> {
    Ok(state.altitude_msl_m - terrain.elevation_at(state.along_track_m())?)
}

/// Time and along-track distance until the current descent reaches the
/// runway surface, using the runway elevation as the ground reference.
pub fn time_and_distance_to_touchdown(state: &AircraftState, runway: &RunwayModel) -> Result<(f64, f64), WorldError> {
    let height = state.altitude_msl_m - runway.elevation_m;
    if height <= 0.0 {
        return Ok((0.0, 0.0));
    }
    if !(state.vertical_speed_mps < 0.0) {
        return Err(WorldError::NotDescending(state.vertical_speed_mps));
    }
    let t = height / -state.vertical_speed_mps;
    Ok((t, state.ground_speed_mps * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::*;
    use proptest::prelude::*;

    fn at(alt: f64) -> AircraftState {
        AircraftState::new([-3000.0, 0.0], alt, 0.0)
    }

    #[test]
    fn zero_rates_are_identity() {
        let s = at(500.0);
        let n = step(&s, Command::new(0.0, 0.0), 1.0, &PerformanceLimits::default()).unwrap();
        assert_eq!(n.position_m, s.position_m);
        assert_eq!(n.altitude_msl_m, s.altitude_msl_m);
        assert_eq!(n.time_s, 1.0);
    }

    #[test]
    fn seven_hundred_fpm_for_a_minute() {
        let s = at(1000.0);
        let n = step(&s, Command::new(fpm_to_mps(-700.0), 0.0), 60.0, &PerformanceLimits::default()).unwrap();
        let drop_m = s.altitude_msl_m - n.altitude_msl_m;
        assert!((drop_m - 213.36).abs() < 1e-9);
        assert!((m_to_ft(drop_m) - 700.0).abs() < 1e-9);
    }

    #[test]
    fn forty_two_seconds_at_130_knots() {
        let s = at(1000.0);
        let n = step(&s, Command::new(0.0, kt_to_mps(130.0)), 42.0, &PerformanceLimits::default()).unwrap();
        let d = n.position_m[0] - s.position_m[0];
        assert!((d - 2_808.866_666_666_667).abs() < 1e-6);
        assert!((m_to_sm(d) - 1.745).abs() < 0.001);
    }

    #[test]
    fn step_rejects_bad_input() {
        let lim = PerformanceLimits::default();
        let s = at(1.0);
        assert!(matches!(step(&s, Command::new(f64::NAN, 0.0), 1.0, &lim), Err(WorldError::NonFinite(_))));
        assert!(matches!(step(&s, Command::new(0.0, 0.0), 0.0, &lim), Err(WorldError::BadStep(_))));
        assert!(matches!(step(&s, Command::new(0.0, 0.0), f64::INFINITY, &lim), Err(WorldError::NonFinite(_))));
        assert!(matches!(step(&s, Command::new(-100.0, 0.0), 1.0, &lim), Err(WorldError::OutsideLimits { .. })));
        assert!(matches!(step(&s, Command::new(0.0, -1.0), 1.0, &lim), Err(WorldError::OutsideLimits { .. })));
    }

    #[test]
    fn agl_examples() {
        let t = TerrainProfile::flat(99.0);
        assert_eq!(agl(&at(99.0), &t).unwrap(), 0.0);
        assert!((agl(&at(99.0 + 152.4), &t).unwrap() - 152.4).abs() < 1e-12);

        // Slope from 0 m at x=-4000 to 40 m at x=-2000; x=-3000 is mid-segment.
        let sloped = TerrainProfile::new(alloc::vec![[-4000.0, 0.0], [-2000.0, 40.0], [0.0, 40.0]]).unwrap();
        assert!((sloped.elevation_at(-3000.0).unwrap() - 20.0).abs() < 1e-12);
        assert!((agl(&at(120.0), &sloped).unwrap() - 100.0).abs() < 1e-12);
        assert!((sloped.elevation_at(-2500.0).unwrap() - 30.0).abs() < 1e-12);
        assert_eq!(sloped.elevation_at(0.0).unwrap(), 40.0);
        assert!(matches!(sloped.elevation_at(-5000.0), Err(WorldError::OutsideTerrain(_))));
    }

    #[test]
    fn terrain_validation() {
        assert!(TerrainProfile::new(alloc::vec![]).is_err());
        assert!(TerrainProfile::new(alloc::vec![[0.0, 1.0], [0.0, 2.0]]).is_err());
        let json = serde_json::to_string(&TerrainProfile::flat(3.0)).unwrap();
        assert_eq!(json, "[[0.0,3.0]]");
        assert!(serde_json::from_str::<TerrainProfile>("[[1.0,0.0],[0.5,0.0]]").is_err());
    }

    #[test]
    fn runway_validation() {
        assert!(RunwayModel::default().validate().is_ok());
        let bad = RunwayModel { touchdown_zone_offset_m: 4000.0, ..RunwayModel::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn touchdown_geometry() {
        let rwy = RunwayModel { elevation_m: 0.0, ..RunwayModel::default() };
        let mut s = at(ft_to_m(500.0));
        s.vertical_speed_mps = fpm_to_mps(-700.0);
        s.ground_speed_mps = kt_to_mps(130.0);
        let (t, d) = time_and_distance_to_touchdown(&s, &rwy).unwrap();
        assert!((t - 42.857_142_857).abs() < 1e-6);
        assert!((d - kt_to_mps(130.0) * t).abs() < 1e-9);

        // 1000 ft at 1000 ft/min and 100 kn: 60 s, 3086.67 m.
        let mut s = at(ft_to_m(1000.0));
        s.vertical_speed_mps = fpm_to_mps(-1000.0);
        s.ground_speed_mps = kt_to_mps(100.0);
        let (t, d) = time_and_distance_to_touchdown(&s, &rwy).unwrap();
        assert!((t - 60.0).abs() < 1e-9);
        assert!((d - 3_086.666_666_667).abs() < 1e-6);

        let s = at(0.0);
        assert_eq!(time_and_distance_to_touchdown(&s, &rwy).unwrap(), (0.0, 0.0));
        let s = at(100.0);
        assert!(matches!(time_and_distance_to_touchdown(&s, &rwy), Err(WorldError::NotDescending(_))));
    }

    proptest! {
        #[test]
        fn step_composes(
            v in -20.0f64..20.0, g in 0.0f64..250.0, h in -180.0f64..180.0,
            a in 0.01f64..50.0, b in 0.01f64..50.0,
        ) {
            let lim = PerformanceLimits::default();
            let mut s = at(2000.0);
            s.heading_deg = h;
            let cmd = Command::new(v, g);
            let once = step(&s, cmd, a + b, &lim).unwrap();
            let twice = step(&step(&s, cmd, a, &lim).unwrap(), cmd, b, &lim).unwrap();
            prop_assert!((once.altitude_msl_m - twice.altitude_msl_m).abs() < 1e-9);
            prop_assert!((once.position_m[0] - twice.position_m[0]).abs() < 1e-9);
            prop_assert!((once.position_m[1] - twice.position_m[1]).abs() < 1e-9);
            prop_assert!((once.time_s - twice.time_s).abs() < 1e-12);
        }

        #[test]
        fn agl_change_over_flat_terrain(v in -20.0f64..20.0, dt in 0.01f64..30.0) {
            let t = TerrainProfile::flat(12.0);
            let s = at(2000.0);
            let n = step(&s, Command::new(v, 70.0), dt, &PerformanceLimits::default()).unwrap();
            let change = agl(&n, &t).unwrap() - agl(&s, &t).unwrap();
            prop_assert!((change - v * dt).abs() < 1e-9);
        }
    }
}
