//! Fuel cost of attack-induced disruption.
//!
//! Extra fuel per event is tabulated in US gallons; dollars follow from the
//! gallons at the given price and the mass from the given density. Diversion
//! costs are only known as a band and are reported as such.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Jet fuel price, US cents per gallon.
pub const DEFAULT_PRICE_CENTS_PER_GAL: f64 = 184.58;
/// Jet fuel density, kg per US gallon.
pub const DEFAULT_DENSITY_KG_PER_GAL: f64 = 3.039;
/// Diversion cost band, GBP.
pub const DIVERSION_BAND_GBP: [f64; 2] = [10_000.0, 80_000.0];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CostError {
    #[error("unknown aircraft type `{0}` (expected B737_800 or B777_200)")]
    UnknownAircraft(String),
    #[error("unknown event `{0}` (expected MISSED_APPROACH, SECOND_APPROACH or DIVERSION)")]
    UnknownEvent(String),
    #[error("{0} must be positive and finite")]
    BadParameter(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AircraftType {
    #[serde(rename = "B737_800")]
    B737_800,
    #[serde(rename = "B777_200")]
    B777_200,
}

impl AircraftType {
    pub const ALL: [Self; 2] = [Self::B737_800, Self::B777_200];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::B737_800 => "B737_800",
            Self::B777_200 => "B777_200",
        }
    }
}

impl fmt::Display for AircraftType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AircraftType {
    type Err = CostError;

    fn from_str(s: &str) -> Result<Self, CostError> {
        let norm = s.trim().to_ascii_uppercase().replace(['-', ' '], "_");
        Self::ALL.into_iter().find(|a| a.as_str() == norm).ok_or_else(|| CostError::UnknownAircraft(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CostEvent {
    /// The aborted approach and climb-out.
    MissedApproach,
    /// Flying the circuit again after a missed approach.
    SecondApproach,
    Diversion,
}

impl CostEvent {
    pub const ALL: [Self; 3] = [Self::MissedApproach, Self::SecondApproach, Self::Diversion];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::MissedApproach => "MISSED_APPROACH",
            Self::SecondApproach => "SECOND_APPROACH",
            Self::Diversion => "DIVERSION",
        }
    }
}

impl FromStr for CostEvent {
    type Err = CostError;

    fn from_str(s: &str) -> Result<Self, CostError> {
        let norm = s.trim().to_ascii_uppercase().replace(['-', ' '], "_");
        Self::ALL.into_iter().find(|e| e.as_str() == norm).ok_or_else(|| CostError::UnknownEvent(s.to_string()))
    }
}

/// Extra fuel burnt, US gallons; `None` for diversions.
pub fn extra_fuel_gal(event: CostEvent, aircraft: AircraftType) -> Option<f64> {
    use AircraftType::*;
    use CostEvent::*;
    match (event, aircraft) {
        (MissedApproach, B737_800) => Some(41.79),
        (SecondApproach, B737_800) => Some(75.68),
        (MissedApproach, B777_200) => Some(111.55),
        (SecondApproach, B777_200) => Some(279.69),
        (Diversion, _) => None,
    }
}

/// A published fuel mass that disagrees with the gallons at the default
/// density. Gallons are used.
fn quoted_mass_kg(event: CostEvent, aircraft: AircraftType) -> Option<f64> {
    (event == CostEvent::MissedApproach && aircraft == AircraftType::B777_200).then_some(399.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub aircraft_type: AircraftType,
    pub event: CostEvent,
    pub extra_fuel_kg: Option<f64>,
    pub gallons: Option<f64>,
    pub usd: Option<f64>,
    pub gbp_band: Option<[f64; 2]>,
    pub price_cents_per_gal: f64,
    pub density_kg_per_gal: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn disruption_cost(
    event: CostEvent,
    aircraft: AircraftType,
    price_cents_per_gal: f64,
    density_kg_per_gal: f64,
) -> Result<CostReport, CostError> {
    if !(price_cents_per_gal > 0.0 && price_cents_per_gal.is_finite()) {
        return Err(CostError::BadParameter("fuel price"));
    }
    if !(density_kg_per_gal > 0.0 && density_kg_per_gal.is_finite()) {
        return Err(CostError::BadParameter("fuel density"));
    }
    let gallons = extra_fuel_gal(event, aircraft);
    let note = quoted_mass_kg(event, aircraft).map(|kg| {
        format!(
            "quoted mass {kg} kg disagrees with {} gal at {DEFAULT_DENSITY_KG_PER_GAL} kg/gal ({:.0} kg); gallons used",
            gallons.unwrap_or(0.0),
            gallons.unwrap_or(0.0) * DEFAULT_DENSITY_KG_PER_GAL
        )
    });
    Ok(CostReport {
        aircraft_type: aircraft,
        event,
        extra_fuel_kg: gallons.map(|g| g * density_kg_per_gal),
        gallons,
        usd: gallons.map(|g| g * price_cents_per_gal / 100.0),
        gbp_band: (event == CostEvent::Diversion).then_some(DIVERSION_BAND_GBP),
        price_cents_per_gal,
        density_kg_per_gal,
        note,
    })
}

impl CostReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}: ", self.aircraft_type, self.event.as_str());
        match (self.gallons, self.usd, self.gbp_band) {
            (Some(g), Some(usd), _) => {
                s += &format!("{g:.2} gal ({:.0} kg) = ${usd:.2}", self.extra_fuel_kg.unwrap_or(0.0));
            }
            (_, _, Some([lo, hi])) => s += &format!("£{lo:.0} to £{hi:.0}"),
            _ => s += "no estimate",
        }
        if let Some(n) = &self.note {
            s += &format!(" [{n}]");
        }
        s
    }
}
