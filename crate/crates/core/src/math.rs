//! Small numeric helpers shared by the physics modules.

use num_complex::Complex64;

/// Below this magnitude `sinc` switches to its Taylor series.
const SINC_SERIES_CUTOFF: f64 = 1e-8;

/// Unnormalized sinc, `sin(u)/u` with `sinc(0) = 1`.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < SINC_SERIES_CUTOFF {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Composite trapezoid weights for `n` uniformly spaced nodes with spacing `h`.
pub(crate) fn trapezoid_weight(k: usize, n: usize, h: f64) -> f64 {
    if k == 0 || k + 1 == n {
        0.5 * h
    } else {
        h
    }
}

/// Composite Simpson weights for an odd number of nodes.
pub(crate) fn simpson_weight(k: usize, n: usize, h: f64) -> f64 {
    debug_assert!(n % 2 == 1 && n >= 3);
    let w = if k == 0 || k + 1 == n {
        1.0
    } else if k % 2 == 1 {
        4.0
    } else {
        2.0
    };
    w * h / 3.0
}

/// Uniform grid `start + k·step` for `k = 0..count`, free of accumulated drift.
pub fn uniform_grid(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start + k as f64 * step).collect()
}
