use serde::{Deserialize, Serialize};

use crate::math::Vec3;
use crate::Origin;

use super::advisory::RaSense;

/// 24-bit Mode S address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct IcaoAddress(u32);

impl IcaoAddress {
    pub const MAX: u32 = 0x00FF_FFFF;

    pub fn new(raw: u32) -> Option<Self> {
        (raw <= Self::MAX).then_some(Self(raw))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for IcaoAddress {
    type Error = &'static str;
    fn try_from(v: u32) -> Result<Self, Self::Error> {
        Self::new(v).ok_or("ICAO address exceeds 24 bits")
    }
}

impl From<IcaoAddress> for u32 {
    fn from(a: IcaoAddress) -> u32 {
        a.0
    }
}

impl core::fmt::Display for IcaoAddress {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{:06X}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MessageKind {
    Squitter,
    ModeSInterrogation,
    ModeSReply,
    AllCall,
    ModeCReply,
    Suppression,
}

impl MessageKind {
    pub fn is_reply(self) -> bool {
        matches!(self, Self::ModeSReply | Self::ModeCReply)
    }
}

/// One 1030/1090 MHz surveillance transmission.
///
/// `apparent_position_m` is where a receiver places the sender from reply
/// timing, antenna bearing and reported altitude. For injected traffic that
/// is the fabricated aircraft; `emitter_position_m` is where the energy
/// actually left an antenna.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveillanceMessage {
    pub kind: MessageKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub icao: Option<IcaoAddress>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub altitude_ft: Option<f64>,
    pub tx_power_dbm: f64,
    pub timestamp_s: f64,
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apparent_position_m: Option<Vec3>,
    pub emitter_position_m: Vec3,
    /// Whisper-shout step for all-calls, suppressions and Mode C replies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<u8>,
    /// Resolution sense the sender has selected against the addressee.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ra_intent: Option<RaSense>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum Malformed {
    #[error("Mode S message without an address")]
    MissingAddress,
    #[error("Mode C reply carrying an address")]
    UnexpectedAddress,
    #[error("reply without a position fix")]
    MissingPosition,
    #[error("non-finite field")]
    NonFinite,
}

impl SurveillanceMessage {
    pub fn new(kind: MessageKind, timestamp_s: f64, origin: Origin, emitter_position_m: Vec3) -> Self {
        Self {
            kind,
            icao: None,
            altitude_ft: None,
            tx_power_dbm: 0.0,
            timestamp_s,
            origin,
            apparent_position_m: None,
            emitter_position_m,
            step: None,
            ra_intent: None,
        }
    }

    pub fn validate(&self) -> Result<(), Malformed> {
        let finite = self.tx_power_dbm.is_finite()
            && self.timestamp_s.is_finite()
            && self.emitter_position_m.iter().all(|v| v.is_finite())
            && self.altitude_ft.is_none_or(f64::is_finite)
            && self.apparent_position_m.is_none_or(|p| p.iter().all(|v| v.is_finite()));
        if !finite {
            return Err(Malformed::NonFinite);
        }
        match self.kind {
            MessageKind::Squitter | MessageKind::ModeSInterrogation | MessageKind::ModeSReply
                if self.icao.is_none() =>
            {
                Err(Malformed::MissingAddress)
            }
            MessageKind::ModeCReply if self.icao.is_some() => Err(Malformed::UnexpectedAddress),
            k if k.is_reply() && self.apparent_position_m.is_none() => Err(Malformed::MissingPosition),
            _ => Ok(()),
        }
    }
}
