//! The unbalanced Mach-Zehnder interferometer as a polarization channel.
//!
//! Polarizing beam splitters route `|H⟩` and `|V⟩` through arms differing by
//! `δ_I`. After post-selecting one output port and tracing out frequency, a
//! polarization qubit `c_h|H⟩ + c_v|V⟩` becomes
//!
//! ```text
//! ρ = |c_h|²|H⟩⟨H| + |c_v|²|V⟩⟨V| − (γ c_h c_v* |H⟩⟨V| + h.c.)
//! γ = exp(−2π² ε_λ² ε_I² − 2iπ ε_I),   ε_λ = Δλ/λ,  ε_I = δ_I/λ
//! ```
//!
//! The minus sign on the coherence belongs to the chosen output port, where
//! the V arm picks up `−e^{iωδ_I/c}`.
//!
//! `γ` is the frequency average `⟨e^{−iωδ_I/c}⟩` over the filtered spectrum.
//! The spectral *density* of the filter is the Gaussian
//! `exp[−(ω − ω_c)²/2Δω²]` with `Δω = 2πcΔλ/λ²`; that reading is what
//! produces the `2π²` in the exponent, and [`gamma_oracle`] integrates it
//! numerically as the reference for [`gamma`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::math::{cis, trapezoid_weight};
use crate::state::{PolarizationDensity, PolarizationKet, NORM_TOLERANCE};
use crate::{Error, Result, SPEED_OF_LIGHT};

/// How the filter width parameter is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthConvention {
    /// `Δλ` enters `ε_λ = Δλ/λ` as is.
    #[default]
    GaussianWidth,
    /// `Δλ` is a full width at half maximum of the spectral density and is
    /// converted to the Gaussian width `Δλ / (2√(2 ln 2))`.
    Fwhm,
}

/// Gaussian interference filter in front of the detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFilter {
    center_wavelength: f64,
    width: f64,
    convention: WidthConvention,
}

impl SpectralFilter {
    pub fn new(center_wavelength: f64, width: f64) -> Result<Self> {
        Self::with_convention(center_wavelength, width, WidthConvention::GaussianWidth)
    }

    pub fn with_convention(
        center_wavelength: f64,
        width: f64,
        convention: WidthConvention,
    ) -> Result<Self> {
        if !(center_wavelength.is_finite() && center_wavelength > 0.0) {
            return Err(Error::invalid("center_wavelength", "must be positive"));
        }
        if !(width.is_finite() && width > 0.0 && width < center_wavelength) {
            return Err(Error::invalid(
                "width",
                "must satisfy 0 < width < center_wavelength",
            ));
        }
        Ok(SpectralFilter {
            center_wavelength,
            width,
            convention,
        })
    }

    /// 10 nm filter centred at 702 nm.
    pub fn experiment_default() -> Self {
        SpectralFilter {
            center_wavelength: 702e-9,
            width: 10e-9,
            convention: WidthConvention::GaussianWidth,
        }
    }

    pub fn center_wavelength(&self) -> f64 {
        self.center_wavelength
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn convention(&self) -> WidthConvention {
        self.convention
    }

    /// Gaussian width actually used in the spectral density.
    pub fn gaussian_width(&self) -> f64 {
        match self.convention {
            WidthConvention::GaussianWidth => self.width,
            WidthConvention::Fwhm => self.width / (2.0 * (2.0 * 2f64.ln()).sqrt()),
        }
    }

    /// `ε_λ = Δλ/λ`.
    pub fn epsilon_lambda(&self) -> f64 {
        self.gaussian_width() / self.center_wavelength
    }

    /// `ω_c = 2πc/λ`.
    pub fn center_angular_frequency(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.center_wavelength
    }

    /// `Δω = 2πcΔλ/λ²`.
    pub fn angular_width(&self) -> f64 {
        self.center_angular_frequency() * self.epsilon_lambda()
    }

    /// `l_c = 2πc/Δω = λ²/Δλ`.
    pub fn coherence_length(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.angular_width()
    }

    /// Normalized spectral density at angular frequency `omega`.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        let u = (omega - self.center_angular_frequency()) / self.angular_width();
        (-0.5 * u * u).exp()
    }
}

/// Arm-length imbalance `δ_I = L_b − L_a` of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MziSetting {
    path_difference: f64,
}

impl MziSetting {
    pub fn new(path_difference: f64) -> Result<Self> {
        if !path_difference.is_finite() {
            return Err(Error::invalid("path_difference", "must be finite"));
        }
        Ok(MziSetting { path_difference })
    }

    /// Setting with `δ_I = ε_I·λ`.
    pub fn from_epsilon(epsilon_i: f64, wavelength: f64) -> Result<Self> {
        Self::new(epsilon_i * wavelength)
    }

    pub fn balanced() -> Self {
        MziSetting {
            path_difference: 0.0,
        }
    }

    pub fn path_difference(&self) -> f64 {
        self.path_difference
    }

    /// `ε_I = δ_I/λ`.
    pub fn epsilon_i(&self, wavelength: f64) -> f64 {
        self.path_difference / wavelength
    }
}

/// Input polarization `c_h|H⟩ + c_v|V⟩` of the idler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputPolarization {
    c_h: Complex64,
    c_v: Complex64,
}

impl InputPolarization {
    pub fn new(c_h: Complex64, c_v: Complex64) -> Result<Self> {
        let n = c_h.norm_sqr() + c_v.norm_sqr();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(InputPolarization { c_h, c_v })
    }

    pub fn from_ket(k: &PolarizationKet) -> Result<Self> {
        Self::new(k.h(), k.v())
    }

    pub fn c_h(&self) -> Complex64 {
        self.c_h
    }

    pub fn c_v(&self) -> Complex64 {
        self.c_v
    }
}

/// Closed-form decoherence factor `exp(−2π²ε_λ²ε_I² − 2iπε_I)`.
pub fn gamma(filter: &SpectralFilter, mzi: &MziSetting) -> Complex64 {
    let el = filter.epsilon_lambda();
    let ei = mzi.epsilon_i(filter.center_wavelength());
    Complex64::new(-2.0 * PI * PI * el * el * ei * ei, -2.0 * PI * ei).exp()
}

pub const GAMMA_ORACLE_MIN_POINTS: usize = 64;
pub const GAMMA_ORACLE_MIN_SPAN: f64 = 6.0;

/// Trapezoid-rule evaluation of `⟨e^{−iωδ_I/c}⟩` over the filter spectrum.
///
/// The grid is uniform over `ω_c ± span·Δω` with `n_points` nodes. Fails if
/// the phase oscillation is resolved by fewer than 4 grid steps per period.
pub fn gamma_oracle(
    filter: &SpectralFilter,
    mzi: &MziSetting,
    n_points: usize,
    span: f64,
) -> Result<Complex64> {
    if n_points < GAMMA_ORACLE_MIN_POINTS {
        return Err(Error::InsufficientQuadrature(format!(
            "{n_points} points (need >= {GAMMA_ORACLE_MIN_POINTS})"
        )));
    }
    if span.is_nan() || span < GAMMA_ORACLE_MIN_SPAN {
        return Err(Error::InsufficientQuadrature(format!(
            "span {span} (need >= {GAMMA_ORACLE_MIN_SPAN})"
        )));
    }
    let omega_c = filter.center_angular_frequency();
    let d_omega = filter.angular_width();
    let h = 2.0 * span * d_omega / (n_points - 1) as f64;
    let delay = mzi.path_difference() / SPEED_OF_LIGHT;
    if delay != 0.0 {
        let steps_per_period = 2.0 * PI / (delay.abs() * h);
        if steps_per_period < 4.0 {
            return Err(Error::UndersampledPhase { steps_per_period });
        }
    }
    let start = omega_c - span * d_omega;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for k in 0..n_points {
        let omega = start + k as f64 * h;
        let w = trapezoid_weight(k, n_points, h) * filter.spectral_density(omega);
        num += cis(-omega * delay) * w;
        den += w;
    }
    Ok(num / den)
}

fn check_coherence(g: Complex64) -> Result<()> {
    let m = g.norm();
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m > 1.0 + NORM_TOLERANCE {
        return Err(Error::UnphysicalCoherence(m));
    }
    Ok(())
}

/// Output polarization state of the interferometer for a pure input.
pub fn apply_channel(input: &InputPolarization, g: Complex64) -> Result<PolarizationDensity> {
    check_coherence(g)?;
    let hv = -(g * input.c_h * input.c_v.conj());
    PolarizationDensity::from_elements(input.c_h.norm_sqr(), input.c_v.norm_sqr(), hv)
}

/// The same channel acting on an arbitrary (possibly mixed) input.
pub fn apply_channel_to_density(
    rho: &PolarizationDensity,
    g: Complex64,
) -> Result<PolarizationDensity> {
    use crate::state::Pol;
    check_coherence(g)?;
    let hv = -(g * rho.element(Pol::H, Pol::V));
    PolarizationDensity::from_elements(
        rho.element(Pol::H, Pol::H).re,
        rho.element(Pol::V, Pol::V).re,
        hv,
    )
}

/// `1 − 2(|c_h||c_v|)²(1 − |g|²)`; requires `|g| ≤ 1`.
pub fn purity_closed_form(input: &InputPolarization, g: Complex64) -> f64 {
    let p = input.c_h.norm() * input.c_v.norm();
    1.0 - 2.0 * p * p * (1.0 - g.norm_sqr())
}
