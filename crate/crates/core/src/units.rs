//! Unit conversions. Everything inside the crate is SI; feet, knots,
//! feet per minute and miles only appear at the edges.

pub const METERS_PER_FOOT: f64 = 0.3048;
pub const METERS_PER_NAUTICAL_MILE: f64 = 1852.0;
pub const METERS_PER_STATUTE_MILE: f64 = 1609.344;
pub const MPS_PER_KNOT: f64 = METERS_PER_NAUTICAL_MILE / 3600.0;
pub const MPS_PER_FPM: f64 = METERS_PER_FOOT / 60.0;

#[inline]
pub fn ft_to_m(ft: f64) -> f64 {
    ft * METERS_PER_FOOT
}

#[inline]
pub fn m_to_ft(m: f64) -> f64 {
    m / METERS_PER_FOOT
}

#[inline]
pub fn kt_to_mps(kt: f64) -> f64 {
    kt * MPS_PER_KNOT
}

#[inline]
pub fn mps_to_kt(mps: f64) -> f64 {
    mps / MPS_PER_KNOT
}

#[inline]
pub fn fpm_to_mps(fpm: f64) -> f64 {
    fpm * MPS_PER_FPM
}

#[inline]
pub fn mps_to_fpm(mps: f64) -> f64 {
    mps / MPS_PER_FPM
}

#[inline]
pub fn sm_to_m(sm: f64) -> f64 {
    sm * METERS_PER_STATUTE_MILE
}

#[inline]
pub fn m_to_sm(m: f64) -> f64 {
    m / METERS_PER_STATUTE_MILE
}

#[inline]
pub fn nmi_to_m(nmi: f64) -> f64 {
    nmi * METERS_PER_NAUTICAL_MILE
}

#[inline]
pub fn m_to_nmi(m: f64) -> f64 {
    m / METERS_PER_NAUTICAL_MILE
}

/// Watts to dBm.
#[inline]
pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * crate::math::log10(w * 1000.0)
}
