//! Seed derivation and per-purpose random streams.
//!
//! Trial `i` of a run with master seed `m` gets `trial_seed(m, i)`, a pure
//! function of the pair, so results never depend on scheduling order. Each
//! trial then opens independent ChaCha streams per consumer (crew, attacker,
//! sensor noise, ...), so adding draws in one consumer leaves the others
//! untouched.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based split of a master seed into the seed of trial `index`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Independent consumers of randomness inside a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Attacker = 1,
    Crew = 2,
    Avionics = 3,
    Sensors = 4,
    Plan = 5,
}

pub fn stream(seed: u64, which: Stream) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CategoricalError {
    #[error("categorical distribution has no outcomes")]
    Empty,
    #[error("weight {0} is negative or not finite")]
    BadWeight(f64),
    #[error("weights sum to zero")]
    ZeroMass,
}

/// Finite distribution over `T` built from non-negative weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Categorical<T> {
    outcomes: Vec<T>,
    cumulative: Vec<f64>,
}

impl<T: Clone> Categorical<T> {
    pub fn from_weights<I>(pairs: I) -> Result<Self, CategoricalError>
    where
        I: IntoIterator<Item = (T, f64)>,
    {
        let mut outcomes = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for (outcome, w) in pairs {
            if !w.is_finite() || w < 0.0 {
                return Err(CategoricalError::BadWeight(w));
            }
            acc += w;
            outcomes.push(outcome);
            cumulative.push(acc);
        }
        if outcomes.is_empty() {
            return Err(CategoricalError::Empty);
        }
        if acc <= 0.0 {
            return Err(CategoricalError::ZeroMass);
        }
        for c in &mut cumulative {
            *c /= acc;
        }
        Ok(Self { outcomes, cumulative })
    }

    pub fn probability(&self, index: usize) -> f64 {
        let lo = if index == 0 { 0.0 } else { self.cumulative[index - 1] };
        self.cumulative[index] - lo
    }

    pub fn outcomes(&self) -> &[T] {
        &self.outcomes
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let u: f64 = rng.random();
        let idx = self.cumulative.iter().position(|&c| u < c).unwrap_or(self.outcomes.len() - 1);
        self.outcomes[idx].clone()
    }
}
