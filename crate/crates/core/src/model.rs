//! Decohered idler polarization at a detector position and the coincidence
//! counts it predicts.
//!
//! With `a = 2π²ε_λ²` and `S = sinc²(xa/2α)` the unnormalized idler state is
//!
//! ```text
//! ρ ∝ (1/8)[A₋|H⟩⟨H| + A₊|V⟩⟨V| − (B|H⟩⟨V| + B*|V⟩⟨H|)]
//! A± = 2S,  B = S(e^{ξ₊} − e^{ξ₋})
//! ξ± = −a(ε_x ± ε_I)² ± 2iπ(ε_x ∓ ε_I)
//! ```
//!
//! Projecting the idler onto `cosθ|H⟩ + e^{iφ}sinθ|V⟩` gives the coincidence
//! rate. [`full_state_oracle`] recomputes the same rate frequency by frequency
//! from the photon-pair ket and is the reference for every closed form here.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channel::{MziSetting, SpectralFilter};
use crate::math::{cis, trapezoid_weight, uniform_grid};
use crate::optics::{birefringent_double_slit, idler_marker_plate, post_slit_state};
use crate::propagation::SlitGeometry;
use crate::state::{HybridKet, Pol, PolarizationDensity, PolarizationKet, Slit};
use crate::{Error, Result, SPEED_OF_LIGHT};

/// Envelope values below this count as a diffraction zero.
pub const ZERO_INTENSITY_FLOOR: f64 = 1e-15;

/// Everything that fixes a coincidence pattern except the idler measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EraserConfig {
    geometry: SlitGeometry,
    filter: SpectralFilter,
    mzi: MziSetting,
}

impl EraserConfig {
    pub fn new(geometry: SlitGeometry, filter: SpectralFilter, mzi: MziSetting) -> Result<Self> {
        let (lg, lf) = (geometry.wavelength(), filter.center_wavelength());
        if (lg - lf).abs() > 1e-12 * lf {
            return Err(Error::invalid(
                "wavelength",
                format!("geometry uses {lg} m but the filter is centred at {lf} m"),
            ));
        }
        geometry.check_fraunhofer()?;
        Ok(EraserConfig {
            geometry,
            filter,
            mzi,
        })
    }

    /// Standard geometry and filter at 702 nm with `δ_I = ε_I·λ`.
    pub fn experiment_default(epsilon_i: f64) -> Result<Self> {
        let filter = SpectralFilter::experiment_default();
        let mzi = MziSetting::from_epsilon(epsilon_i, filter.center_wavelength())?;
        Self::new(SlitGeometry::experiment_default(), filter, mzi)
    }

    pub fn with_epsilon_i(&self, epsilon_i: f64) -> Result<Self> {
        Ok(EraserConfig {
            mzi: MziSetting::from_epsilon(epsilon_i, self.wavelength())?,
            ..*self
        })
    }

    pub fn geometry(&self) -> &SlitGeometry {
        &self.geometry
    }

    pub fn filter(&self) -> &SpectralFilter {
        &self.filter
    }

    pub fn mzi(&self) -> &MziSetting {
        &self.mzi
    }

    pub fn wavelength(&self) -> f64 {
        self.filter.center_wavelength()
    }

    pub fn epsilon_i(&self) -> f64 {
        self.mzi.epsilon_i(self.wavelength())
    }

    /// `2π²ε_λ²`.
    pub fn decay_rate(&self) -> f64 {
        let e = self.filter.epsilon_lambda();
        2.0 * PI * PI * e * e
    }
}

/// The exponents `ξ₊`, `ξ₋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiPair {
    pub xi_plus: Complex64,
    pub xi_minus: Complex64,
}

impl XiPair {
    pub fn new(epsilon_x: f64, epsilon_i: f64, decay_rate: f64) -> Self {
        let (p, m) = (epsilon_x + epsilon_i, epsilon_x - epsilon_i);
        XiPair {
            xi_plus: Complex64::new(-decay_rate * p * p, 2.0 * PI * m),
            xi_minus: Complex64::new(-decay_rate * m * m, -2.0 * PI * p),
        }
    }

    pub fn at(x: f64, cfg: &EraserConfig) -> Self {
        Self::new(cfg.geometry.epsilon_x(x), cfg.epsilon_i(), cfg.decay_rate())
    }

    /// `e^{ξ₊} − e^{ξ₋}`.
    pub fn coherence(&self) -> Complex64 {
        self.xi_plus.exp() - self.xi_minus.exp()
    }
}

/// Idler projection `cosθ|H⟩ + e^{iφ}sinθ|V⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementSetting {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::invalid("theta", "must be finite"));
        }
        if !phi.is_finite() {
            return Err(Error::invalid("phi", "must be finite"));
        }
        Ok(MeasurementSetting { theta, phi })
    }

    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Result<Self> {
        Self::new(theta_deg.to_radians(), phi_deg.to_radians())
    }

    pub const fn horizontal() -> Self {
        MeasurementSetting {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub const fn vertical() -> Self {
        MeasurementSetting {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }

    pub const fn diagonal() -> Self {
        MeasurementSetting {
            theta: PI / 4.0,
            phi: 0.0,
        }
    }

    pub const fn antidiagonal() -> Self {
        MeasurementSetting {
            theta: PI / 4.0,
            phi: PI,
        }
    }

    pub const fn left_circular() -> Self {
        MeasurementSetting {
            theta: PI / 4.0,
            phi: PI / 2.0,
        }
    }

    pub const fn right_circular() -> Self {
        MeasurementSetting {
            theta: PI / 4.0,
            phi: -PI / 2.0,
        }
    }

    /// `H`, `V`, `P`/`D`, `M`/`A`, `L` or `R`.
    pub fn from_label(label: &str) -> Result<Self> {
        match label.trim() {
            "H" => Ok(Self::horizontal()),
            "V" => Ok(Self::vertical()),
            "P" | "D" => Ok(Self::diagonal()),
            "M" | "A" => Ok(Self::antidiagonal()),
            "L" => Ok(Self::left_circular()),
            "R" => Ok(Self::right_circular()),
            other => Err(Error::UnknownBasis(other.to_string())),
        }
    }

    /// The orthogonal outcome of the same measurement.
    pub fn orthogonal(&self) -> Self {
        MeasurementSetting {
            theta: self.theta + PI / 2.0,
            phi: self.phi,
        }
    }

    pub fn ket(&self) -> PolarizationKet {
        PolarizationKet::elliptical(self.theta, self.phi)
    }
}

/// Raw weights of the idler state together with its normalized density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdlerDensity {
    pub a_minus: f64,
    pub a_plus: f64,
    pub b: Complex64,
    pub density: PolarizationDensity,
}

struct Weights {
    a_minus: f64,
    a_plus: f64,
    b: Complex64,
}

fn weights(x: f64, cfg: &EraserConfig) -> Weights {
    let s = cfg.geometry.envelope(x);
    Weights {
        a_minus: 2.0 * s,
        a_plus: 2.0 * s,
        b: XiPair::at(x, cfg).coherence() * s,
    }
}

pub fn idler_density_at(x: f64, cfg: &EraserConfig) -> Result<IdlerDensity> {
    if !x.is_finite() {
        return Err(Error::invalid("x", "must be finite"));
    }
    if cfg.geometry.envelope(x) < ZERO_INTENSITY_FLOOR {
        return Err(Error::ZeroIntensity(x));
    }
    let w = weights(x, cfg);
    let density = PolarizationDensity::from_unnormalized(nalgebra::Matrix2::new(
        Complex64::new(w.a_minus / 8.0, 0.0),
        -w.b / 8.0,
        -w.b.conj() / 8.0,
        Complex64::new(w.a_plus / 8.0, 0.0),
    ))?;
    Ok(IdlerDensity {
        a_minus: w.a_minus,
        a_plus: w.a_plus,
        b: w.b,
        density,
    })
}

/// `⟨θ|ρ|θ⟩` with the unnormalized idler state.
pub fn coincidence(x: f64, m: &MeasurementSetting, cfg: &EraserConfig) -> f64 {
    let w = weights(x, cfg);
    let (s, c) = m.theta.sin_cos();
    let fringe = 2.0 * c * s * (w.b * cis(m.phi)).re;
    ((w.a_minus * c * c + w.a_plus * s * s - fringe) / 8.0).max(0.0)
}

/// `S·(2 − (χ₊ − χ₋))`, `χ± = e^{−a(ε_x±ε_I)²}cos 2π(ε_x∓ε_I)`.
pub fn c_p_general(x: f64, cfg: &EraserConfig) -> f64 {
    let ex = cfg.geometry.epsilon_x(x);
    let ei = cfg.epsilon_i();
    let a = cfg.decay_rate();
    let chi_plus = (-a * (ex + ei).powi(2)).exp() * (2.0 * PI * (ex - ei)).cos();
    let chi_minus = (-a * (ex - ei).powi(2)).exp() * (2.0 * PI * (ex + ei)).cos();
    cfg.geometry.envelope(x) * (2.0 - (chi_plus - chi_minus))
}

/// Diagonal projection at `ε_I = n/2`, where both cosines share one argument.
/// The configured interferometer setting is ignored.
pub fn c_p_half_integer(x: f64, n: u32, cfg: &EraserConfig) -> f64 {
    let ex = cfg.geometry.epsilon_x(x);
    let a = cfg.decay_rate();
    let nf = f64::from(n);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let term =
        (-a * (ex * ex + nf * nf / 4.0)).exp() * (a * nf * ex).sinh() * (2.0 * PI * ex).cos();
    cfg.geometry.envelope(x) * (1.0 + sign * term)
}

/// Diagonal projection at `ε_I = n + 1/4` with the `cosh` factor set to 1.
/// The configured interferometer setting is ignored.
pub fn c_p_quarter(x: f64, n: u32, cfg: &EraserConfig) -> f64 {
    let ex = cfg.geometry.epsilon_x(x);
    let a = cfg.decay_rate();
    let nf = f64::from(n);
    let term = (-a * (ex * ex + nf * nf)).exp() * (2.0 * PI * ex).sin();
    cfg.geometry.envelope(x) * (1.0 - term)
}

/// Central visibility `e^{−2π²ε_λ²n²}` predicted at `ε_I = n + 1/4`.
pub fn decoherence_visibility(n: u32, cfg: &EraserConfig) -> f64 {
    (-cfg.decay_rate() * f64::from(n).powi(2)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternSample {
    pub x: f64,
    pub epsilon_x: f64,
    pub envelope: f64,
    pub coincidence: f64,
    pub normalized: f64,
}

/// Evaluates `f` over `xs` and normalizes the result to a unit peak.
pub fn sample_pattern(
    xs: &[f64],
    geometry: &SlitGeometry,
    f: impl Fn(f64) -> f64,
) -> Vec<PatternSample> {
    let mut out: Vec<PatternSample> = xs
        .iter()
        .map(|&x| PatternSample {
            x,
            epsilon_x: geometry.epsilon_x(x),
            envelope: geometry.envelope(x),
            coincidence: f(x),
            normalized: 0.0,
        })
        .collect();
    normalize_pattern(&mut out);
    out
}

/// Coincidence pattern for one measurement setting.
pub fn pattern(xs: &[f64], m: &MeasurementSetting, cfg: &EraserConfig) -> Vec<PatternSample> {
    sample_pattern(xs, &cfg.geometry, |x| coincidence(x, m, cfg))
}

/// Rescales `normalized` so that its maximum is 1; leaves zeros for an
/// all-zero pattern.
pub fn normalize_pattern(samples: &mut [PatternSample]) {
    let peak = samples.iter().map(|s| s.coincidence).fold(0.0, f64::max);
    for s in samples {
        s.normalized = if peak > 0.0 {
            s.coincidence / peak
        } else {
            0.0
        };
    }
}

/// Standard detector scan: ±1.5 mm in 30 µm steps.
pub fn default_scan() -> Vec<f64> {
    uniform_grid(-1.5e-3, 30e-6, 101)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VisibilityStatus {
    Ok,
    NoFringes,
    InsufficientSpan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visibility {
    pub value: f64,
    pub status: VisibilityStatus,
}

/// Fraction of peak envelope bounding the central region.
pub const VISIBILITY_ENVELOPE_FRACTION: f64 = 0.2;
/// Minimum `ε_x` extent of the central region (two fringe periods).
pub const VISIBILITY_MIN_SPAN: f64 = 2.0;
const NO_FRINGE_FLOOR: f64 = 1e-9;

/// `(max − min)/(max + min)` of coincidence over envelope, taken over the
/// contiguous region around the envelope peak where the envelope exceeds 20%
/// of its maximum.
pub fn visibility(samples: &[PatternSample]) -> Visibility {
    let none = |status| Visibility { value: 0.0, status };
    let Some((centre, peak)) = samples
        .iter()
        .map(|s| s.envelope)
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
    else {
        return none(VisibilityStatus::InsufficientSpan);
    };
    if peak <= 0.0 {
        return none(VisibilityStatus::NoFringes);
    }
    let inside = |s: &PatternSample| s.envelope > VISIBILITY_ENVELOPE_FRACTION * peak;
    let mut lo = centre;
    while lo > 0 && inside(&samples[lo - 1]) {
        lo -= 1;
    }
    let mut hi = centre;
    while hi + 1 < samples.len() && inside(&samples[hi + 1]) {
        hi += 1;
    }
    let region = &samples[lo..=hi];
    let span = (region[region.len() - 1].epsilon_x - region[0].epsilon_x).abs();
    if span < VISIBILITY_MIN_SPAN {
        return none(VisibilityStatus::InsufficientSpan);
    }
    let (mut max, mut min) = (f64::NEG_INFINITY, f64::INFINITY);
    for s in region {
        let r = s.coincidence / s.envelope;
        max = max.max(r);
        min = min.min(r);
    }
    let v = if max + min > 0.0 {
        (max - min) / (max + min)
    } else {
        0.0
    };
    if v < NO_FRINGE_FLOOR {
        none(VisibilityStatus::NoFringes)
    } else {
        Visibility {
            value: v,
            status: VisibilityStatus::Ok,
        }
    }
}

pub const ORACLE_MIN_POINTS: usize = 1024;
/// Half-width of the oracle's frequency window in units of `Δω`.
pub const ORACLE_SPAN: f64 = 10.0;

/// Pair state right after the birefringent slits and the idler plate.
pub fn marked_pair_state() -> HybridKet {
    birefringent_double_slit(&post_slit_state()).map_idler(idler_marker_plate().matrix())
}

/// Coincidence rate computed from the photon-pair ket, frequency by frequency.
///
/// Each signal frequency `ω` is paired with idler frequency `2ω_c − ω`. The
/// idler's V component picks up `−e^{iω_iδ_I/c}` in the interferometer, the
/// two slit paths pick up `e^{∓iωδ_x/2c}`, and the result is projected onto
/// the idler setting, summed over signal polarization and averaged over the
/// filter spectrum. Proportional to [`coincidence`]; see
/// [`fit_oracle_scale`].
pub fn full_state_oracle(
    x: f64,
    m: &MeasurementSetting,
    cfg: &EraserConfig,
    n_points: usize,
) -> Result<f64> {
    if n_points < ORACLE_MIN_POINTS {
        return Err(Error::InsufficientQuadrature(format!(
            "{n_points} points (need >= {ORACLE_MIN_POINTS})"
        )));
    }
    let lambda = cfg.wavelength();
    let omega_c = cfg.filter.center_angular_frequency();
    let d_omega = cfg.filter.angular_width();
    let h = 2.0 * ORACLE_SPAN * d_omega / (n_points - 1) as f64;
    let idler_delay = cfg.mzi.path_difference() / SPEED_OF_LIGHT;
    let path_delay = cfg.geometry.epsilon_x(x) * lambda / SPEED_OF_LIGHT;

    let fastest = idler_delay.abs() + path_delay.abs();
    if fastest > 0.0 {
        let steps_per_period = 2.0 * PI / (fastest * h);
        if steps_per_period < 4.0 {
            return Err(Error::UndersampledPhase { steps_per_period });
        }
    }

    // ⟨θ| applied to the idler leaves a (signal, path) amplitude per idler
    // component, so the frequency loop only needs the two idler branches.
    let state = marked_pair_state();
    let bra = m.ket();
    let branch = |idler: Pol| -> [[Complex64; 2]; 2] {
        let c = bra.component(idler).conj();
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for s in Pol::ALL {
            for p in Slit::ALL {
                out[s.index()][p.index()] = c * state.amplitude(idler, s, p);
            }
        }
        out
    };
    let (from_h, from_v) = (branch(Pol::H), branch(Pol::V));

    let start = omega_c - ORACLE_SPAN * d_omega;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..n_points {
        let omega = start + k as f64 * h;
        let omega_i = 2.0 * omega_c - omega;
        let v_factor = -cis(omega_i * idler_delay);
        let path = [
            cis(-0.5 * omega * path_delay),
            cis(0.5 * omega * path_delay),
        ];
        let mut prob = 0.0;
        for s in 0..2 {
            let amp: Complex64 = (0..2)
                .map(|p| (from_h[s][p] + from_v[s][p] * v_factor) * path[p])
                .sum();
            prob += amp.norm_sqr();
        }
        let w = trapezoid_weight(k, n_points, h) * cfg.filter.spectral_density(omega);
        num += w * prob;
        den += w;
    }
    Ok(cfg.geometry.envelope(x) * num / den)
}

/// Constant `k` with `full_state_oracle ≈ k · coincidence`, fixed once per
/// configuration from the on-axis `H` projection.
pub fn fit_oracle_scale(cfg: &EraserConfig, n_points: usize) -> Result<f64> {
    let h = MeasurementSetting::horizontal();
    Ok(full_state_oracle(0.0, &h, cfg, n_points)? / coincidence(0.0, &h, cfg))
}
