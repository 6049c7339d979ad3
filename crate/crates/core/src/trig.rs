//! `sin`/`cos` that return exact zeros and units at multiples of a quarter turn.
//!
//! `FRAC_PI_2.cos()` is 6.1e-17, which would otherwise leak through "crossed"
//! polarizers and make closed-form zeros come out as 1e-33.

use std::f64::consts::FRAC_PI_2;

/// Angles within this many ulps of k·π/2 snap to the exact value.
const SNAP_ULPS: f64 = 4.0;

pub(crate) fn sin_cos(angle: f64) -> (f64, f64) {
    let quarter_turns = (angle / FRAC_PI_2).round();
    let residual = angle - quarter_turns * FRAC_PI_2;
    if quarter_turns.abs() < 1e15 && residual.abs() <= SNAP_ULPS * f64::EPSILON * angle.abs().max(1.0) {
        match (quarter_turns as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        angle.sin_cos()
    }
}

pub(crate) fn cos(angle: f64) -> f64 {
    sin_cos(angle).1
}
