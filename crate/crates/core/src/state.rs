//! State algebra over the small tensor-product spaces of the eraser.
//!
//! A [`HybridKet`] lives in idler polarization ⊗ signal polarization ⊗ slit
//! path (dimension 8). The flat index is `4·idler + 2·signal + path` with
//! `H = 0, V = 1` and `+ = 0` (upper slit), `− = 1` (lower slit).
//!
//! Every value here is immutable after construction.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerance on squared norms and traces.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Projection probabilities below this leave the conditional state undefined.
pub const PROJECTION_FLOOR: f64 = 1e-15;
/// Smallest eigenvalue tolerated in a density operator.
pub const PSD_FLOOR: f64 = -1e-12;
/// Tolerance on `ρ − ρ†`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pol {
    H,
    V,
}

impl Pol {
    pub const ALL: [Pol; 2] = [Pol::H, Pol::V];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Pol::H => 0,
            Pol::V => 1,
        }
    }
}

/// Which slit the signal photon went through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slit {
    /// `|+⟩`, centred at `+d`.
    Upper,
    /// `|−⟩`, centred at `−d`.
    Lower,
}

impl Slit {
    pub const ALL: [Slit; 2] = [Slit::Upper, Slit::Lower];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Slit::Upper => 0,
            Slit::Lower => 1,
        }
    }
}

fn all_finite(amps: &[Complex64]) -> bool {
    amps.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|c| c.norm_sqr()).sum()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|⟨a|b⟩| / (‖a‖‖b‖)`; 1 means equal up to a global phase.
fn phase_insensitive_overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    let na = norm_sqr(a).sqrt();
    let nb = norm_sqr(b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    inner(a, b).norm() / (na * nb)
}

/// Single-qubit polarization ket `h|H⟩ + v|V⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationKet {
    h: Complex64,
    v: Complex64,
}

impl PolarizationKet {
    pub const fn new(h: Complex64, v: Complex64) -> Self {
        PolarizationKet { h, v }
    }

    pub fn real(h: f64, v: f64) -> Self {
        PolarizationKet::new(Complex64::new(h, 0.0), Complex64::new(v, 0.0))
    }

    /// `cos θ |H⟩ + e^{iφ} sin θ |V⟩`.
    pub fn elliptical(theta: f64, phi: f64) -> Self {
        PolarizationKet::new(
            Complex64::new(theta.cos(), 0.0),
            Complex64::from_polar(theta.sin(), phi),
        )
    }

    pub fn h(&self) -> Complex64 {
        self.h
    }

    pub fn v(&self) -> Complex64 {
        self.v
    }

    pub fn component(&self, pol: Pol) -> Complex64 {
        match pol {
            Pol::H => self.h,
            Pol::V => self.v,
        }
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.h, self.v]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.h.norm_sqr() + self.v.norm_sqr()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if n == 0.0 {
            return Err(Error::NullState);
        }
        let s = 1.0 / n.sqrt();
        Ok(PolarizationKet::new(self.h * s, self.v * s))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PolarizationKet) -> Complex64 {
        self.h.conj() * other.h + self.v.conj() * other.v
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        PolarizationKet::new(self.h * c, self.v * c)
    }

    pub fn equals_up_to_phase(&self, other: &PolarizationKet, tol: f64) -> bool {
        (phase_insensitive_overlap(&self.as_array(), &other.as_array()) - 1.0).abs() <= tol
    }
}

/// Slit-path ket `u|+⟩ + l|−⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathKet {
    pub upper: Complex64,
    pub lower: Complex64,
}

impl PathKet {
    pub const fn new(upper: Complex64, lower: Complex64) -> Self {
        PathKet { upper, lower }
    }

    /// `(|+⟩ + |−⟩)/√2`, the state right after the double slit.
    pub fn symmetric() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PathKet::new(Complex64::new(s, 0.0), Complex64::new(s, 0.0))
    }

    pub fn component(&self, slit: Slit) -> Complex64 {
        match slit {
            Slit::Upper => self.upper,
            Slit::Lower => self.lower,
        }
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.upper, self.lower]
    }

    pub fn equals_up_to_phase(&self, other: &PathKet, tol: f64) -> bool {
        (phase_insensitive_overlap(&self.as_array(), &other.as_array()) - 1.0).abs() <= tol
    }
}

/// Signal photon state over signal polarization ⊗ slit path, indexed
/// `2·signal + path`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalKet {
    amps: [Complex64; 4],
}

impl SignalKet {
    pub fn from_amplitudes(amps: [Complex64; 4]) -> Result<Self> {
        if !all_finite(&amps) {
            return Err(Error::NonFinite);
        }
        Ok(SignalKet { amps })
    }

    pub fn product(pol: &PolarizationKet, path: &PathKet) -> Self {
        let mut amps = [ZERO; 4];
        for s in Pol::ALL {
            for p in Slit::ALL {
                amps[2 * s.index() + p.index()] = pol.component(s) * path.component(p);
            }
        }
        SignalKet { amps }
    }

    #[inline]
    pub fn index(signal: Pol, slit: Slit) -> usize {
        2 * signal.index() + slit.index()
    }

    pub fn amplitude(&self, signal: Pol, slit: Slit) -> Complex64 {
        self.amps[Self::index(signal, slit)]
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    pub fn inner(&self, other: &SignalKet) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    pub fn equals_up_to_phase(&self, other: &SignalKet, tol: f64) -> bool {
        (phase_insensitive_overlap(&self.amps, &other.amps) - 1.0).abs() <= tol
    }

    /// Splits a product state into normalized polarization and path factors.
    ///
    /// Returns `None` when the state is entangled beyond `tol` (a non-vanishing
    /// determinant of the 2×2 coefficient matrix) or null.
    pub fn factorize(&self, tol: f64) -> Option<(PolarizationKet, PathKet)> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return None;
        }
        let c = |s: Pol, p: Slit| self.amplitude(s, p) / n.sqrt();
        let det = c(Pol::H, Slit::Upper) * c(Pol::V, Slit::Lower)
            - c(Pol::H, Slit::Lower) * c(Pol::V, Slit::Upper);
        if det.norm() > tol {
            return None;
        }
        // pick the larger path column as the polarization factor
        let col = |p: Slit| PolarizationKet::new(c(Pol::H, p), c(Pol::V, p));
        let (a, b) = (col(Slit::Upper), col(Slit::Lower));
        let pol = if a.norm_sqr() >= b.norm_sqr() { a } else { b }
            .normalized()
            .ok()?;
        let path = PathKet::new(pol.inner(&a), pol.inner(&b));
        Some((pol, path))
    }
}

/// Pure state of idler polarization ⊗ signal polarization ⊗ slit path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridKet {
    amps: [Complex64; 8],
}

impl HybridKet {
    pub const DIM: usize = 8;

    #[inline]
    pub fn index(idler: Pol, signal: Pol, slit: Slit) -> usize {
        4 * idler.index() + 2 * signal.index() + slit.index()
    }

    pub fn from_amplitudes(amps: [Complex64; 8]) -> Result<Self> {
        if !all_finite(&amps) {
            return Err(Error::NonFinite);
        }
        Ok(HybridKet { amps })
    }

    pub fn from_fn(mut f: impl FnMut(Pol, Pol, Slit) -> Complex64) -> Result<Self> {
        let mut amps = [ZERO; 8];
        for i in Pol::ALL {
            for s in Pol::ALL {
                for p in Slit::ALL {
                    amps[Self::index(i, s, p)] = f(i, s, p);
                }
            }
        }
        Self::from_amplitudes(amps)
    }

    /// `|idler⟩ ⊗ |signal⟩`.
    pub fn product(idler: &PolarizationKet, signal: &SignalKet) -> Self {
        let mut amps = [ZERO; 8];
        for i in Pol::ALL {
            for s in Pol::ALL {
                for p in Slit::ALL {
                    amps[Self::index(i, s, p)] = idler.component(i) * signal.amplitude(s, p);
                }
            }
        }
        HybridKet { amps }
    }

    pub fn amplitude(&self, idler: Pol, signal: Pol, slit: Slit) -> Complex64 {
        self.amps[Self::index(idler, signal, slit)]
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn inner(&self, other: &HybridKet) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    pub fn add(&self, other: &HybridKet) -> HybridKet {
        let mut amps = self.amps;
        for (a, b) in amps.iter_mut().zip(other.amps.iter()) {
            *a += b;
        }
        HybridKet { amps }
    }

    pub fn scaled(&self, c: Complex64) -> HybridKet {
        let mut amps = self.amps;
        for a in amps.iter_mut() {
            *a *= c;
        }
        HybridKet { amps }
    }

    /// `|⟨self|other⟩|` over the product of norms.
    pub fn overlap_modulus(&self, other: &HybridKet) -> f64 {
        phase_insensitive_overlap(&self.amps, &other.amps)
    }

    pub fn equals_up_to_phase(&self, other: &HybridKet, tol: f64) -> bool {
        (self.overlap_modulus(other) - 1.0).abs() <= tol
    }

    /// Applies `u` to the idler polarization.
    pub fn map_idler(&self, u: &Matrix2<Complex64>) -> HybridKet {
        self.map_each(|i, s, p, src| {
            Pol::ALL
                .iter()
                .map(|&j| u[(i.index(), j.index())] * src(j, s, p))
                .sum()
        })
    }

    /// Applies `u` to the signal polarization on both paths.
    pub fn map_signal(&self, u: &Matrix2<Complex64>) -> HybridKet {
        self.map_signal_conditional(u, u)
    }

    /// Applies `upper` to the signal polarization on path `+` and `lower` on path `−`.
    pub fn map_signal_conditional(
        &self,
        upper: &Matrix2<Complex64>,
        lower: &Matrix2<Complex64>,
    ) -> HybridKet {
        self.map_each(|i, s, p, src| {
            let u = match p {
                Slit::Upper => upper,
                Slit::Lower => lower,
            };
            Pol::ALL
                .iter()
                .map(|&t| u[(s.index(), t.index())] * src(i, t, p))
                .sum()
        })
    }

    /// Multiplies the path amplitudes by `upper` and `lower` respectively.
    pub fn map_path_phases(&self, upper: Complex64, lower: Complex64) -> HybridKet {
        self.map_each(|i, s, p, src| {
            src(i, s, p)
                * match p {
                    Slit::Upper => upper,
                    Slit::Lower => lower,
                }
        })
    }

    fn map_each(
        &self,
        f: impl Fn(Pol, Pol, Slit, &dyn Fn(Pol, Pol, Slit) -> Complex64) -> Complex64,
    ) -> HybridKet {
        let src = |i: Pol, s: Pol, p: Slit| self.amplitude(i, s, p);
        let mut amps = [ZERO; 8];
        for i in Pol::ALL {
            for s in Pol::ALL {
                for p in Slit::ALL {
                    amps[Self::index(i, s, p)] = f(i, s, p, &src);
                }
            }
        }
        HybridKet { amps }
    }

    /// Unnormalized `⟨onto|_idler ⊗ 1` applied to the ket.
    pub fn contract_idler(&self, onto: &PolarizationKet) -> SignalKet {
        let mut amps = [ZERO; 4];
        for s in Pol::ALL {
            for p in Slit::ALL {
                amps[SignalKet::index(s, p)] = Pol::ALL
                    .iter()
                    .map(|&i| onto.component(i).conj() * self.amplitude(i, s, p))
                    .sum();
            }
        }
        SignalKet { amps }
    }
}

/// Rescales a ket onto the unit sphere, keeping its ray.
pub fn normalize(k: &HybridKet) -> Result<HybridKet> {
    let n = k.norm_sqr();
    if !n.is_finite() {
        return Err(Error::NonFinite);
    }
    if n == 0.0 {
        return Err(Error::NullState);
    }
    Ok(k.scaled(Complex64::new(1.0 / n.sqrt(), 0.0)))
}

/// Result of measuring the idler polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdlerProjection {
    /// Renormalized conditional signal state.
    pub state: SignalKet,
    pub probability: f64,
}

/// Projects the idler onto `onto` and returns the conditional signal state.
pub fn project_idler(k: &HybridKet, onto: &PolarizationKet) -> Result<IdlerProjection> {
    if !k.is_normalized() {
        return Err(Error::NotNormalized(k.norm_sqr()));
    }
    if !onto.is_normalized() {
        return Err(Error::NotNormalized(onto.norm_sqr()));
    }
    let raw = k.contract_idler(onto);
    let probability = raw.norm_sqr();
    if probability < PROJECTION_FLOOR {
        return Err(Error::OrthogonalProjection(probability));
    }
    let s = 1.0 / probability.sqrt();
    let mut amps = *raw.amplitudes();
    for a in amps.iter_mut() {
        *a *= s;
    }
    Ok(IdlerProjection {
        state: SignalKet { amps },
        probability: probability.min(1.0),
    })
}

/// Density operator of one polarization qubit in the `{H, V}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationDensity {
    m: Matrix2<Complex64>,
}

impl PolarizationDensity {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        if !all_finite(m.as_slice()) {
            return Err(Error::NonFinite);
        }
        let herm = (m - m.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if herm > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let rho = PolarizationDensity { m };
        let (lo, _) = rho.eigenvalues();
        if lo < PSD_FLOOR {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {lo:e}")));
        }
        Ok(rho)
    }

    /// Divides a positive Hermitian matrix by its trace and validates it.
    pub fn from_unnormalized(m: Matrix2<Complex64>) -> Result<Self> {
        let tr = m.trace().re;
        if !tr.is_finite() {
            return Err(Error::NonFinite);
        }
        if tr <= 0.0 {
            return Err(Error::InvalidDensity(format!("trace {tr} is not positive")));
        }
        Self::new(m.map(|c| c / tr))
    }

    /// Builds `hh|H⟩⟨H| + vv|V⟩⟨V| + hv|H⟩⟨V| + hv*|V⟩⟨H|`.
    pub fn from_elements(hh: f64, vv: f64, hv: Complex64) -> Result<Self> {
        Self::new(Matrix2::new(
            Complex64::new(hh, 0.0),
            hv,
            hv.conj(),
            Complex64::new(vv, 0.0),
        ))
    }

    /// Convex combination `Σ p_k ρ_k`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, PolarizationDensity)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if parts.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::invalid("weights", "must be a probability vector"));
        }
        let m = parts.iter().fold(Matrix2::zeros(), |acc, (p, rho)| {
            acc + rho.m * Complex64::new(*p, 0.0)
        });
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.m
    }

    pub fn element(&self, row: Pol, col: Pol) -> Complex64 {
        self.m[(row.index(), col.index())]
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.m[(0, 0)].re;
        let d = self.m[(1, 1)].re;
        let b = self.m[(0, 1)];
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        (mean - half_gap, mean + half_gap)
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    /// `⟨k|ρ|k⟩`.
    pub fn expectation(&self, k: &PolarizationKet) -> f64 {
        let v = nalgebra::Vector2::new(k.h(), k.v());
        (v.adjoint() * self.m * v)[(0, 0)].re
    }

    /// `U ρ U†`.
    pub fn transformed(&self, u: &Matrix2<Complex64>) -> Result<Self> {
        Self::new(u * self.m * u.adjoint())
    }
}

/// `|k⟩⟨k|` for a normalized polarization ket.
pub fn density_from_ket(k: &PolarizationKet) -> Result<PolarizationDensity> {
    if !k.is_normalized() {
        return Err(Error::NotNormalized(k.norm_sqr()));
    }
    let v = nalgebra::Vector2::new(k.h(), k.v());
    PolarizationDensity::new(v * v.adjoint())
}

/// `Tr(ρ²)`, in `[1/2, 1]` for a qubit.
pub fn purity(rho: &PolarizationDensity) -> f64 {
    rho.purity()
}
