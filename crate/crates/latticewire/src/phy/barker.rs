//! Length-13 Barker pilot construction.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use super::PILOT_LEN;

/// The standard length-13 Barker sequence.
pub fn barker_sequence() -> [i8; PILOT_LEN] {
    [1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1]
}

/// Pilot symbols: the Barker chip on both in-phase and quadrature branches,
/// scaled to unit energy, so pilot_i = (b_i + i b_i) / sqrt(2).
pub fn barker_pilot() -> [Complex64; PILOT_LEN] {
    barker_sequence().map(|b| {
        let a = f64::from(b) * FRAC_1_SQRT_2;
        Complex64::new(a, a)
    })
}
