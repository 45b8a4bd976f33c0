//! Simulation models for wireless attacks on approach and en-route avionics.
//!
//! The crate covers three attack surfaces and the machinery around them:
//!
//! - [`radalt`] and [`gpws`]: an FMCW radio altimeter, the ramp-spoofing
//!   pulse scheduler that fakes a rapidly rising terrain, and the Mode 2
//!   terrain-closure alerting that consumes the spoofed height.
//! - [`tcas`]: Mode S / Mode C surveillance exchanges, whisper-shout,
//!   intruder tracking, TA/RA advisory logic and a false-intruder injector.
//! - [`ils`]: a glideslope receiver with linear DDM, PAPI lights and a
//!   displaced rogue glideslope transmitter.
//!
//! [`world`] provides the point-mass kinematics everything reads,
//! [`crew`] holds outcome-calibrated pilot agents and [`sentinel`] the
//! spectrum-fingerprint and time-of-arrival consistency checks.
//!
//! The crate is `no_std` (with `alloc`); enable the `std` feature when
//! linking into a hosted binary.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod crew;
pub mod gpws;
pub mod ils;
pub mod math;
pub mod radalt;
pub mod rng;
pub mod sentinel;
pub mod stats;
pub mod tcas;
pub mod units;
pub mod world;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Whether a signal comes from legitimate equipment or from an attacker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Genuine,
    Adversarial,
}
