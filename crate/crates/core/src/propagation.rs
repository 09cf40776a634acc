//! Scalar far-field propagation of the signal photon through the double slit.
//!
//! Slits of half-width `a` sit at `±d`. In transverse momentum the slit modes
//! are
//!
//! ```text
//! ⟨q|±⟩ = √(a/π) · e^{∓idq} · sinc(qa)
//! ```
//!
//! normalized so that `∫dq |⟨q|±⟩|² = 1`. A superposition `W₊|+⟩ + W₋|−⟩`
//! propagated a distance `L` picks up `e^{−iq²α}` with `α = L/2k`, and in the
//! small-parameter regime the amplitude behind a detector slit centred at `x`
//! reduces to
//!
//! ```text
//! (W₊e^{−iπε_x} + W₋e^{iπε_x}) · sinc(xa/2α),    ε_x = 2xd/(Lλ)
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::math::{cis, simpson_weight, sinc, trapezoid_weight};
use crate::state::{Slit, NORM_TOLERANCE};
use crate::{Error, Result};

/// Largest accepted `max(a, b)·d/2α`.
///
/// The standard geometry sits at 0.22, and the closed-form amplitude still
/// tracks brute-force propagation to about 1% of the peak there.
pub const FRAUNHOFER_LIMIT: f64 = 0.25;

/// Double slit, detector slit and propagation distance. All lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitGeometry {
    half_width: f64,
    half_separation: f64,
    detector_half_width: f64,
    distance: f64,
    wavelength: f64,
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::invalid(name, format!("must be positive, got {v}")))
    }
}

impl SlitGeometry {
    pub fn new(
        half_width: f64,
        half_separation: f64,
        detector_half_width: f64,
        distance: f64,
        wavelength: f64,
    ) -> Result<Self> {
        let g = SlitGeometry {
            half_width: positive("half_width", half_width)?,
            half_separation: positive("half_separation", half_separation)?,
            detector_half_width: positive("detector_half_width", detector_half_width)?,
            distance: positive("distance", distance)?,
            wavelength: positive("wavelength", wavelength)?,
        };
        if half_separation <= half_width {
            return Err(Error::invalid(
                "half_separation",
                "slits overlap (need half_separation > half_width)",
            ));
        }
        Ok(g)
    }

    /// 80 µm slits 250 µm apart, 50 µm detector slit, 0.2 m, 702 nm.
    pub fn experiment_default() -> Self {
        SlitGeometry {
            half_width: 40e-6,
            half_separation: 125e-6,
            detector_half_width: 25e-6,
            distance: 0.2,
            wavelength: 702e-9,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn half_separation(&self) -> f64 {
        self.half_separation
    }

    pub fn detector_half_width(&self) -> f64 {
        self.detector_half_width
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn with_wavelength(&self, wavelength: f64) -> Result<Self> {
        Self::new(
            self.half_width,
            self.half_separation,
            self.detector_half_width,
            self.distance,
            wavelength,
        )
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// `α = L/2k = Lλ/4π`.
    pub fn alpha(&self) -> f64 {
        self.distance * self.wavelength / (4.0 * PI)
    }

    /// Slope of `ε_x(x)`, `2d/(Lλ)`.
    pub fn epsilon_x_per_metre(&self) -> f64 {
        2.0 * self.half_separation / (self.distance * self.wavelength)
    }

    pub fn epsilon_x(&self, x: f64) -> f64 {
        x * self.epsilon_x_per_metre()
    }

    /// Argument of the single-slit envelope, `xa/2α`.
    pub fn envelope_argument(&self, x: f64) -> f64 {
        x * self.half_width / (2.0 * self.alpha())
    }

    pub fn envelope(&self, x: f64) -> f64 {
        let s = sinc(self.envelope_argument(x));
        s * s
    }

    /// Fringe spacing at the detector, `λL/2d`.
    pub fn fringe_period(&self) -> f64 {
        1.0 / self.epsilon_x_per_metre()
    }

    /// First zero of the envelope, `λL/2a`.
    pub fn first_envelope_zero(&self) -> f64 {
        self.distance * self.wavelength / (2.0 * self.half_width)
    }

    pub fn fraunhofer_ratio(&self) -> f64 {
        self.half_width.max(self.detector_half_width) * self.half_separation / (2.0 * self.alpha())
    }

    pub fn check_fraunhofer(&self) -> Result<()> {
        let ratio = self.fraunhofer_ratio();
        if ratio > FRAUNHOFER_LIMIT {
            Err(Error::BeyondFraunhofer {
                ratio,
                limit: FRAUNHOFER_LIMIT,
            })
        } else {
            Ok(())
        }
    }
}

/// Path amplitudes `W₊`, `W₋` of the signal photon behind the slits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitAmplitudes {
    pub w_plus: Complex64,
    pub w_minus: Complex64,
}

impl SlitAmplitudes {
    pub fn new(w_plus: Complex64, w_minus: Complex64) -> Result<Self> {
        let n = w_plus.norm_sqr() + w_minus.norm_sqr();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(SlitAmplitudes { w_plus, w_minus })
    }

    pub fn symmetric() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        SlitAmplitudes {
            w_plus: s,
            w_minus: s,
        }
    }

    pub fn upper_only() -> Self {
        SlitAmplitudes {
            w_plus: Complex64::new(1.0, 0.0),
            w_minus: Complex64::new(0.0, 0.0),
        }
    }
}

/// `⟨q|±⟩` for the chosen slit.
pub fn slit_mode_amplitude(q: f64, which: Slit, g: &SlitGeometry) -> Complex64 {
    let sign = match which {
        Slit::Upper => -1.0,
        Slit::Lower => 1.0,
    };
    let a = g.half_width;
    cis(sign * g.half_separation * q) * ((a / PI).sqrt() * sinc(q * a))
}

/// Momentum amplitude after propagation, `e^{−iq²α}·sinc(qa)·(W₊e^{−iqd} + W₋e^{iqd})`.
pub fn far_field_f(q: f64, w: &SlitAmplitudes, g: &SlitGeometry) -> Complex64 {
    let d = g.half_separation;
    let paths = w.w_plus * cis(-q * d) + w.w_minus * cis(q * d);
    cis(-q * q * g.alpha()) * paths * sinc(q * g.half_width)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectedAmplitude {
    pub amplitude: Complex64,
    pub envelope: f64,
    pub epsilon_x: f64,
}

impl DetectedAmplitude {
    pub fn intensity(&self) -> f64 {
        self.amplitude.norm_sqr()
    }
}

/// Small-parameter amplitude behind the detector slit at `x`.
pub fn detected_amplitude(
    x: f64,
    w: &SlitAmplitudes,
    g: &SlitGeometry,
) -> Result<DetectedAmplitude> {
    if !x.is_finite() {
        return Err(Error::invalid("x", "must be finite"));
    }
    g.check_fraunhofer()?;
    let epsilon_x = g.epsilon_x(x);
    let s = sinc(g.envelope_argument(x));
    let half_phase = PI * epsilon_x;
    let amplitude = (w.w_plus * cis(-half_phase) + w.w_minus * cis(half_phase)) * s;
    Ok(DetectedAmplitude {
        amplitude,
        envelope: s * s,
        epsilon_x,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensitySample {
    pub x: f64,
    pub epsilon_x: f64,
    pub envelope: f64,
    pub intensity: f64,
}

pub fn intensity_pattern(
    xs: &[f64],
    w: &SlitAmplitudes,
    g: &SlitGeometry,
) -> Result<Vec<IntensitySample>> {
    xs.iter()
        .map(|&x| {
            let d = detected_amplitude(x, w, g)?;
            Ok(IntensitySample {
                x,
                epsilon_x: d.epsilon_x,
                envelope: d.envelope,
                intensity: d.intensity(),
            })
        })
        .collect()
}

/// Quadrature settings for [`brute_force_intensity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationGrid {
    /// Momentum cut-off; the grid covers `[−q_max, q_max]`.
    pub q_max: f64,
    pub q_points: usize,
    /// Simpson nodes across the detector slit (odd).
    pub detector_points: usize,
}

impl PropagationGrid {
    /// `|q| ≤ 8π/a` on `2¹⁵ + 1` points, 17 nodes across the detector slit.
    pub fn for_geometry(g: &SlitGeometry) -> Self {
        PropagationGrid {
            q_max: 8.0 * PI / g.half_width,
            q_points: (1 << 15) + 1,
            detector_points: 17,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.q_max.is_finite() && self.q_max > 0.0) {
            return Err(Error::invalid("q_max", "must be positive"));
        }
        if self.q_points < (1 << 14) {
            return Err(Error::InsufficientQuadrature(format!(
                "{} momentum points (need >= 16384)",
                self.q_points
            )));
        }
        if self.detector_points < 3 || self.detector_points.is_multiple_of(2) {
            return Err(Error::InsufficientQuadrature(format!(
                "{} detector nodes (need an odd count >= 3)",
                self.detector_points
            )));
        }
        Ok(())
    }
}

/// Transverse field at the detector plane by direct inverse transform of
/// [`far_field_f`] on a precomputed momentum grid.
struct FieldSynthesizer {
    q0: f64,
    h: f64,
    weighted: Vec<Complex64>,
}

impl FieldSynthesizer {
    fn new(w: &SlitAmplitudes, g: &SlitGeometry, grid: &PropagationGrid) -> Self {
        let n = grid.q_points;
        let h = 2.0 * grid.q_max / (n - 1) as f64;
        let q0 = -grid.q_max;
        let weighted = (0..n)
            .map(|k| far_field_f(q0 + k as f64 * h, w, g) * trapezoid_weight(k, n, h))
            .collect();
        FieldSynthesizer { q0, h, weighted }
    }

    fn field(&self, x: f64) -> Complex64 {
        // e^{iqx} stepped by recurrence, renormalized to stop modulus drift
        let step = cis(self.h * x);
        let mut phase = cis(self.q0 * x);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, f) in self.weighted.iter().enumerate() {
            acc += f * phase;
            phase *= step;
            if k % 1024 == 1023 {
                phase /= phase.norm();
            }
        }
        acc
    }
}

/// Intensity collected by the detector slit `[x − b, x + b]`, from the full
/// momentum-space propagation. Unnormalized.
pub fn brute_force_intensity(
    x: f64,
    w: &SlitAmplitudes,
    g: &SlitGeometry,
    grid: &PropagationGrid,
) -> Result<f64> {
    Ok(brute_force_pattern(&[x], w, g, grid)?[0])
}

/// [`brute_force_intensity`] over many positions, sharing the momentum grid.
pub fn brute_force_pattern(
    xs: &[f64],
    w: &SlitAmplitudes,
    g: &SlitGeometry,
    grid: &PropagationGrid,
) -> Result<Vec<f64>> {
    grid.validate()?;
    let synth = FieldSynthesizer::new(w, g, grid);
    let b = g.detector_half_width;
    let m = grid.detector_points;
    let hx = 2.0 * b / (m - 1) as f64;
    Ok(xs
        .iter()
        .map(|&x| {
            (0..m)
                .map(|j| {
                    let xp = x - b + j as f64 * hx;
                    simpson_weight(j, m, hx) * synth.field(xp).norm_sqr()
                })
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn lab() -> SlitGeometry {
        SlitGeometry::experiment_default()
    }

    fn mode_inner(g: &SlitGeometry, a: Slit, b: Slit) -> Complex64 {
        let q_max = 1000.0 / g.half_width();
        let n = 125_001;
        let h = 2.0 * q_max / (n - 1) as f64;
        (0..n)
            .map(|k| {
                let q = -q_max + k as f64 * h;
                slit_mode_amplitude(q, a, g).conj()
                    * slit_mode_amplitude(q, b, g)
                    * trapezoid_weight(k, n, h)
            })
            .sum()
    }

    #[test]
    fn geometry_validation() {
        assert!(SlitGeometry::new(40e-6, 30e-6, 25e-6, 0.2, 702e-9).is_err());
        assert!(SlitGeometry::new(-40e-6, 125e-6, 25e-6, 0.2, 702e-9).is_err());
        assert!(SlitGeometry::new(40e-6, 125e-6, 25e-6, 0.0, 702e-9).is_err());
        let g = lab();
        assert!((g.alpha() - 0.2 * 702e-9 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn lab_geometry_small_parameters() {
        let g = lab();
        let ratio = g.fraunhofer_ratio();
        assert!((ratio - 0.2238).abs() < 1e-3, "{ratio}");
        assert!(g.check_fraunhofer().is_ok());
        let wide = SlitGeometry::new(200e-6, 500e-6, 25e-6, 0.2, 702e-9).unwrap();
        let err = wide.check_fraunhofer().unwrap_err();
        assert!(err
            .to_string()
            .starts_with("beyond Fraunhofer approximation"));
    }

    #[test]
    fn mode_at_zero_momentum() {
        let g = lab();
        let expect = (g.half_width() / PI).sqrt();
        for s in Slit::ALL {
            let m = slit_mode_amplitude(0.0, s, &g);
            assert!((m - Complex64::new(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn modes_are_orthonormal() {
        let g = lab();
        assert!((mode_inner(&g, Slit::Upper, Slit::Upper).re - 1.0).abs() < 1e-3);
        assert!((mode_inner(&g, Slit::Lower, Slit::Lower).re - 1.0).abs() < 1e-3);
        assert!(mode_inner(&g, Slit::Upper, Slit::Lower).norm() < 1e-3);
    }

    #[test]
    fn far_field_on_axis() {
        let g = lab();
        let f = far_field_f(0.0, &SlitAmplitudes::symmetric(), &g);
        assert!((f - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-15);
        let anti = SlitAmplitudes::new(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(-FRAC_1_SQRT_2, 0.0),
        )
        .unwrap();
        assert!(far_field_f(0.0, &anti, &g).norm() < 1e-15);
    }

    #[test]
    fn far_field_period_and_zero() {
        let g = lab();
        let w = SlitAmplitudes::symmetric();
        let d = g.half_separation();
        // |F|² at q and q + π/d differ only by the envelope factor
        for k in 0..50 {
            let q = k as f64 * 713.0;
            let ratio = far_field_f(q, &w, &g).norm_sqr() / sinc(q * g.half_width()).powi(2);
            let shifted = q + PI / d;
            let ratio_s =
                far_field_f(shifted, &w, &g).norm_sqr() / sinc(shifted * g.half_width()).powi(2);
            assert!((ratio - ratio_s).abs() < 1e-9);
        }
        assert!(far_field_f(PI / g.half_width(), &w, &g).norm() < 1e-12);
    }

    #[test]
    fn on_axis_maximum() {
        let g = lab();
        let d = detected_amplitude(0.0, &SlitAmplitudes::symmetric(), &g).unwrap();
        assert_eq!(d.epsilon_x, 0.0);
        assert_eq!(d.envelope, 1.0);
        assert!((d.intensity() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn epsilon_x_slope() {
        let g = lab();
        let slope = 2.0 * 125e-6 / (0.2 * 702e-9);
        assert_eq!(g.epsilon_x_per_metre(), slope);
        assert_eq!(g.epsilon_x(1e-3), 1e-3 * slope);
    }

    #[test]
    fn fringe_period_from_grid() {
        let g = lab();
        assert!((g.fringe_period() - 0.5616e-3).abs() < 1e-7);
        let w = SlitAmplitudes::symmetric();
        let xs: Vec<f64> = (0..=20_000).map(|i| i as f64 * 1e-7).collect();
        let p = intensity_pattern(&xs, &w, &g).unwrap();
        let fringe: Vec<f64> = p.iter().map(|s| s.intensity / s.envelope).collect();
        // first interior maximum of the fringe factor after x = 0
        let peak = (1..fringe.len() - 1)
            .find(|&i| fringe[i] >= fringe[i - 1] && fringe[i] > fringe[i + 1] && xs[i] > 1e-4)
            .unwrap();
        assert!((xs[peak] - 0.562e-3).abs() < 1e-6, "{}", xs[peak]);
    }

    #[test]
    fn envelope_zero_from_grid() {
        let g = lab();
        assert!((g.first_envelope_zero() - 1.755e-3).abs() < 1e-6);
        let first = (0..30_000)
            .map(|i| i as f64 * 1e-7)
            .find(|&x| g.envelope(x) < 1e-9)
            .unwrap();
        assert!((first - 1.755e-3).abs() < 1e-6, "{first}");
    }

    #[test]
    fn single_slit_has_no_fringes() {
        let g = lab();
        let xs: Vec<f64> = (-50..=50).map(|i| i as f64 * 30e-6).collect();
        for s in intensity_pattern(&xs, &SlitAmplitudes::upper_only(), &g).unwrap() {
            assert!((s.intensity - s.envelope).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_pattern_is_even() {
        let g = lab();
        let xs: Vec<f64> = (-50..=50).map(|i| i as f64 * 30e-6).collect();
        let p = intensity_pattern(&xs, &SlitAmplitudes::symmetric(), &g).unwrap();
        for i in 0..p.len() {
            let j = p.len() - 1 - i;
            assert!((p[i].intensity - p[j].intensity).abs() < 1e-12);
            assert!((p[i].envelope - p[j].envelope).abs() < 1e-12);
            assert!(p[i].intensity <= 2.0 * p[i].envelope + 1e-12);
        }
    }

    #[test]
    fn brute_force_grid_validation() {
        let g = lab();
        let mut grid = PropagationGrid::for_geometry(&g);
        grid.q_points = 1000;
        assert!(brute_force_intensity(0.0, &SlitAmplitudes::symmetric(), &g, &grid).is_err());
        grid.q_points = 1 << 15;
        grid.detector_points = 4;
        assert!(brute_force_intensity(0.0, &SlitAmplitudes::symmetric(), &g, &grid).is_err());
    }
}
