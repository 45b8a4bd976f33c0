//! Truncated and rounded normal distributions with moment calibration.
//!
//! Crew policies are specified by the moments of what the agents actually
//! do (e.g. "mean go-around height 930 ft, sd 235.8 ft"). Truncation and
//! rounding shift those moments, so the samplers solve for the underlying
//! normal parameters that reproduce the requested moments after truncation.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::math::{normal_cdf, normal_pdf, sqrt};

/// P(z0 < Z < z1) for standard normal Z, without cancellation in the upper tail.
fn interval(z0: f64, z1: f64) -> f64 {
    if z0 > 0.0 {
        normal_cdf(-z0) - normal_cdf(-z1)
    } else {
        normal_cdf(z1) - normal_cdf(z0)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("invalid distribution parameters: {0}")]
    InvalidParameters(&'static str),
    #[error("calibration did not converge to the requested moments")]
    NoConvergence,
}

/// Mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
}

impl Moments {
    pub const fn new(mean: f64, sd: f64) -> Self {
        Self { mean, sd }
    }
}

/// Normal(mu, sigma) conditioned on [lo, hi]. Either bound may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedNormal {
    pub mu: f64,
    pub sigma: f64,
    pub lo: f64,
    pub hi: f64,
}

impl TruncatedNormal {
    pub fn new(mu: f64, sigma: f64, lo: f64, hi: f64) -> Result<Self, StatsError> {
        if !mu.is_finite() || !(sigma > 0.0) || !sigma.is_finite() {
            return Err(StatsError::InvalidParameters("mu must be finite, sigma > 0"));
        }
        if !(lo < hi) {
            return Err(StatsError::InvalidParameters("lower bound must be below upper bound"));
        }
        let d = Self { mu, sigma, lo, hi };
        if d.mass() < 1e-6 {
            return Err(StatsError::InvalidParameters("truncation leaves almost no mass"));
        }
        Ok(d)
    }

    fn standardized(&self) -> (f64, f64) {
        ((self.lo - self.mu) / self.sigma, (self.hi - self.mu) / self.sigma)
    }

    /// Probability mass of the parent normal inside the bounds.
    pub fn mass(&self) -> f64 {
        let (a, b) = self.standardized();
        interval(a, b)
    }

    /// Exact mean and standard deviation of the truncated distribution.
    pub fn moments(&self) -> Moments {
        let (a, b) = self.standardized();
        let z = interval(a, b);
        let (pa, pb) = (normal_pdf(a), normal_pdf(b));
        let apa = if a.is_finite() { a * pa } else { 0.0 };
        let bpb = if b.is_finite() { b * pb } else { 0.0 };
        let shift = (pa - pb) / z;
        let var = self.sigma * self.sigma * (1.0 + (apa - bpb) / z - shift * shift);
        Moments::new(self.mu + self.sigma * shift, sqrt(var.max(0.0)))
    }

    /// Find (mu, sigma) so the truncated distribution has `target` moments.
    pub fn calibrate(target: Moments, lo: f64, hi: f64) -> Result<Self, StatsError> {
        if !(target.sd > 0.0) || !(lo < target.mean && target.mean < hi) {
            return Err(StatsError::InvalidParameters("target moments outside the bounds"));
        }
        let mut mu = target.mean;
        let mut sigma = target.sd;
        for _ in 0..500 {
            let d = Self::new(mu, sigma, lo, hi)?;
            let m = d.moments();
            let dm = target.mean - m.mean;
            let ratio = target.sd / m.sd;
            if dm.abs() < 1e-10 * (1.0 + target.mean.abs()) && (ratio - 1.0).abs() < 1e-10 {
                return Ok(d);
            }
            mu += dm;
            sigma *= ratio;
        }
        Err(StatsError::NoConvergence)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let normal = Normal::new(self.mu, self.sigma).expect("validated on construction");
        loop {
            let x = normal.sample(rng);
            if x >= self.lo && x <= self.hi {
                return x;
            }
        }
    }
}

/// round(Normal(mu, sigma)) conditioned on the integer range [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundedNormal {
    pub mu: f64,
    pub sigma: f64,
    pub lo: i64,
    pub hi: i64,
}

impl RoundedNormal {
    pub fn new(mu: f64, sigma: f64, lo: i64, hi: i64) -> Result<Self, StatsError> {
        if !mu.is_finite() || !(sigma > 0.0) || lo > hi {
            return Err(StatsError::InvalidParameters("need finite mu, sigma > 0, lo <= hi"));
        }
        let d = Self { mu, sigma, lo, hi };
        if d.mass() < 1e-9 {
            return Err(StatsError::InvalidParameters("range carries almost no mass"));
        }
        Ok(d)
    }

    fn bin(&self, j: i64) -> f64 {
        let z0 = (j as f64 - 0.5 - self.mu) / self.sigma;
        let z1 = (j as f64 + 0.5 - self.mu) / self.sigma;
        interval(z0, z1)
    }

    fn mass(&self) -> f64 {
        let a = (self.lo as f64 - 0.5 - self.mu) / self.sigma;
        let b = (self.hi as f64 + 0.5 - self.mu) / self.sigma;
        interval(a, b)
    }

    pub fn pmf(&self, j: i64) -> f64 {
        if j < self.lo || j > self.hi {
            0.0
        } else {
            self.bin(j) / self.mass()
        }
    }

    pub fn mean(&self) -> f64 {
        (self.lo..=self.hi).map(|j| j as f64 * self.pmf(j)).sum()
    }

    /// Solve for `mu` (sigma fixed) so the realised mean equals `target_mean`.
    pub fn calibrate_mean(target_mean: f64, sigma: f64, lo: i64, hi: i64) -> Result<Self, StatsError> {
        if !(lo as f64 <= target_mean && target_mean <= hi as f64) {
            return Err(StatsError::InvalidParameters("target mean outside the integer range"));
        }
        if lo == hi {
            return Self::new(lo as f64, sigma, lo, hi);
        }
        let (mut a, mut b) = (lo as f64 - 20.0 * sigma, hi as f64 + 20.0 * sigma);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            let m = Self { mu: mid, sigma, lo, hi };
            // mass can underflow far outside the range; fall back on the side
            let mean = if m.mass() > 1e-300 {
                m.mean()
            } else if mid < lo as f64 {
                lo as f64
            } else {
                hi as f64
            };
            if mean < target_mean {
                a = mid;
            } else {
                b = mid;
            }
        }
        Self::new(0.5 * (a + b), sigma, lo, hi)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        let normal = Normal::new(self.mu, self.sigma).expect("validated on construction");
        loop {
            let x = crate::math::round(normal.sample(rng));
            if x >= self.lo as f64 && x <= self.hi as f64 {
                return x as i64;
            }
        }
    }
}

/// Welford accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningMoments {
    pub n: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn mean(&self) -> Option<f64> {
        (self.n > 0).then_some(self.mean)
    }

    /// Sample standard deviation (n - 1 denominator).
    pub fn sd(&self) -> Option<f64> {
        (self.n > 1).then(|| sqrt(self.m2 / (self.n - 1) as f64))
    }
}

impl FromIterator<f64> for RunningMoments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Self::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    // Brute-force moments by midpoint quadrature of the parent density.
    fn quadrature_moments(mu: f64, sigma: f64, lo: f64, hi: f64) -> (f64, f64) {
        let lo = lo.max(mu - 12.0 * sigma);
        let hi = hi.min(mu + 12.0 * sigma);
        let n = 200_000;
        let h = (hi - lo) / n as f64;
        let (mut z, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let x = lo + (i as f64 + 0.5) * h;
            let w = normal_pdf((x - mu) / sigma);
            z += w;
            s1 += w * x;
            s2 += w * x * x;
        }
        let m = s1 / z;
        (m, sqrt(s2 / z - m * m))
    }

    #[test]
    fn analytic_moments_match_quadrature() {
        for &(mu, sigma, lo, hi) in &[
            (930.0, 235.8, 200.0, 1500.0),
            (5.0, 4.0, 0.0, f64::INFINITY),
            (0.0, 1.0, f64::NEG_INFINITY, f64::INFINITY),
            (2.0, 1.0, -1.0, 2.5),
        ] {
            let d = TruncatedNormal::new(mu, sigma, lo, hi).unwrap();
            let m = d.moments();
            let (qm, qs) = quadrature_moments(mu, sigma, lo, hi);
            assert!((m.mean - qm).abs() < 1e-6 * sigma, "{mu} {sigma}: {} vs {qm}", m.mean);
            assert!((m.sd - qs).abs() < 1e-6 * sigma, "{mu} {sigma}: {} vs {qs}", m.sd);
        }
    }

    #[test]
    fn calibration_reproduces_targets() {
        let target = Moments::new(930.0, 235.8);
        let d = TruncatedNormal::calibrate(target, 200.0, 1500.0).unwrap();
        let m = d.moments();
        assert!((m.mean - 930.0).abs() < 1e-6);
        assert!((m.sd - 235.8).abs() < 1e-6);
        assert!(d.sigma > 235.8);

        let lat = TruncatedNormal::calibrate(Moments::new(5.3, 4.2), 0.0, f64::INFINITY).unwrap();
        assert!((lat.moments().mean - 5.3).abs() < 1e-6);
    }

    #[test]
    fn sampler_matches_moments() {
        let d = TruncatedNormal::calibrate(Moments::new(930.0, 235.8), 200.0, 1500.0).unwrap();
        let mut rng = stream(11, Stream::Crew);
        let m: RunningMoments = (0..50_000).map(|_| d.sample(&mut rng)).collect();
        assert!((m.mean().unwrap() - 930.0).abs() < 4.0);
        assert!((m.sd().unwrap() - 235.8).abs() < 4.0);
    }

    #[test]
    fn rounded_normal_pmf_sums_to_one_and_calibrates() {
        let d = RoundedNormal::calibrate_mean(2.8, 2.1, 0, 10).unwrap();
        let total: f64 = (0..=10).map(|j| d.pmf(j)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((d.mean() - 2.8).abs() < 1e-9);
        let mut rng = stream(5, Stream::Crew);
        let m: RunningMoments = (0..50_000).map(|_| d.sample(&mut rng) as f64).collect();
        assert!((m.mean().unwrap() - 2.8).abs() < 0.05);
    }

    #[test]
    fn rounded_normal_degenerate_range() {
        let d = RoundedNormal::calibrate_mean(0.0, 2.1, 0, 0).unwrap();
        let mut rng = stream(5, Stream::Crew);
        assert_eq!(d.sample(&mut rng), 0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(TruncatedNormal::new(0.0, 0.0, -1.0, 1.0).is_err());
        assert!(TruncatedNormal::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(TruncatedNormal::calibrate(Moments::new(3000.0, 10.0), 200.0, 1500.0).is_err());
        assert!(RoundedNormal::calibrate_mean(11.0, 1.0, 0, 10).is_err());
    }

    #[test]
    fn running_moments() {
        let m: RunningMoments = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0].into_iter().collect();
        assert_eq!(m.mean(), Some(5.0));
        assert!((m.sd().unwrap() - 2.138_089_935_299_395).abs() < 1e-12);
        assert_eq!(RunningMoments::default().mean(), None);
    }
}
