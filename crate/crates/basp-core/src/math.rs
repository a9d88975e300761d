//! Thin wrappers around `libm` so the crate builds without `std`.
//!
//! `f64`'s transcendental methods live in `std`, not `core`; routing all
//! calls through this module keeps the rest of the crate oblivious to the
//! distinction and guarantees identical results on every target.

use core::f64::consts::TAU;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn acos(x: f64) -> f64 {
    libm::acos(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Reduces an angle to `[0, 2*pi)`.
#[inline]
pub fn mod_tau(x: f64) -> f64 {
    let r = x - TAU * floor(x / TAU);
    // `floor` rounding can land exactly on TAU for tiny negative inputs.
    if r >= TAU {
        r - TAU
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
#[inline]
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = mod_tau(a - b);
    if d > core::f64::consts::PI {
        TAU - d
    } else {
        d
    }
}
