//! Jones calculus for the polarization optics of the eraser.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * Angles are measured from `|H⟩` towards `|V⟩`; `rotation(θ)` sends
//!   `|H⟩ → cos θ|H⟩ + sin θ|V⟩`.
//! * A retarder with fast axis at `θ` and retardance `Γ` is
//!   `R(θ)·diag(1, e^{iΓ})·R(−θ)`: the fast axis carries no phase. Hence
//!   `hwp(θ) = [[cos 2θ, sin 2θ], [sin 2θ, −cos 2θ]]`, which reflects a linear
//!   polarization at `β` to `2θ − β`, and `hwp(0)|V⟩ = −|V⟩`.
//! * `|P⟩ = (|H⟩+|V⟩)/√2`, `|M⟩ = (|H⟩−|V⟩)/√2`, `|R⟩ = (|H⟩−i|V⟩)/√2`,
//!   `|L⟩ = (|H⟩+i|V⟩)/√2`.
//!
//! Kets produced by the protocol are compared up to a global phase through
//! `|⟨a|b⟩| = 1`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::state::{HybridKet, PathKet, Pol, PolarizationKet, SignalKet};
use crate::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2×2 complex matrix acting on polarization in the `{H, V}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesMatrix(Matrix2<Complex64>);

impl JonesMatrix {
    pub fn new(m: Matrix2<Complex64>) -> Self {
        JonesMatrix(m)
    }

    pub fn identity() -> Self {
        JonesMatrix(Matrix2::identity())
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, co) = angle.sin_cos();
        JonesMatrix(Matrix2::new(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)))
    }

    /// Linear retarder: fast axis at `angle`, slow axis delayed by `retardance`.
    pub fn retarder(angle: f64, retardance: f64) -> Self {
        let diag = Matrix2::new(
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Complex64::from_polar(1.0, retardance),
        );
        JonesMatrix(Self::rotation(angle).0 * diag * Self::rotation(-angle).0)
    }

    /// Projector `|k⟩⟨k|` onto a normalized ket.
    pub fn projector(k: &PolarizationKet) -> Self {
        let v = nalgebra::Vector2::new(k.h(), k.v());
        JonesMatrix(v * v.adjoint())
    }

    /// Ideal linear polarizer with transmission axis at `angle`.
    pub fn linear_polarizer(angle: f64) -> Self {
        Self::projector(&PolarizationKet::real(angle.cos(), angle.sin()))
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        JonesMatrix(self.0.adjoint())
    }

    pub fn apply(&self, k: &PolarizationKet) -> PolarizationKet {
        let m = &self.0;
        PolarizationKet::new(
            m[(0, 0)] * k.h() + m[(0, 1)] * k.v(),
            m[(1, 0)] * k.h() + m[(1, 1)] * k.v(),
        )
    }

    /// Largest entry of `|U U† − 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.0 * self.0.adjoint() - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// True when `self = e^{iφ}·other` for some real `φ`.
    pub fn equals_up_to_phase(&self, other: &JonesMatrix, tol: f64) -> bool {
        let num: Complex64 = other
            .0
            .iter()
            .zip(self.0.iter())
            .map(|(b, a)| b.conj() * a)
            .sum();
        let den: f64 = other.0.iter().map(|b| b.norm_sqr()).sum();
        if den == 0.0 {
            return self.0.iter().all(|a| a.norm() <= tol);
        }
        let k = num / den;
        if (k.norm() - 1.0).abs() > tol {
            return false;
        }
        (self.0 - other.0 * k).iter().all(|z| z.norm() <= tol)
    }
}

impl Mul for JonesMatrix {
    type Output = JonesMatrix;

    fn mul(self, rhs: JonesMatrix) -> JonesMatrix {
        JonesMatrix(self.0 * rhs.0)
    }
}

/// Half-wave plate with its fast axis at `angle` (radians).
pub fn hwp(angle: f64) -> JonesMatrix {
    let (s, co) = (2.0 * angle).sin_cos();
    JonesMatrix(Matrix2::new(c(co, 0.0), c(s, 0.0), c(s, 0.0), c(-co, 0.0)))
}

/// Quarter-wave plate with its fast axis at `angle` (radians).
pub fn qwp(angle: f64) -> JonesMatrix {
    JonesMatrix::retarder(angle, std::f64::consts::FRAC_PI_2)
}

pub fn horizontal() -> PolarizationKet {
    PolarizationKet::real(1.0, 0.0)
}

pub fn vertical() -> PolarizationKet {
    PolarizationKet::real(0.0, 1.0)
}

/// `(|H⟩ + |V⟩)/√2`.
pub fn diagonal() -> PolarizationKet {
    PolarizationKet::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2)
}

/// `(|H⟩ − |V⟩)/√2`.
pub fn antidiagonal() -> PolarizationKet {
    PolarizationKet::real(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
}

/// `(|H⟩ + i|V⟩)/√2`.
pub fn left_circular() -> PolarizationKet {
    PolarizationKet::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2))
}

/// `(|H⟩ − i|V⟩)/√2`.
pub fn right_circular() -> PolarizationKet {
    PolarizationKet::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2))
}

/// Looks up a single polarization state by its one-letter name (H, V, P, M, L, R).
pub fn named_state(label: &str) -> Result<PolarizationKet> {
    match label.trim().to_ascii_uppercase().as_str() {
        "H" => Ok(horizontal()),
        "V" => Ok(vertical()),
        "P" | "D" => Ok(diagonal()),
        "M" | "A" => Ok(antidiagonal()),
        "L" => Ok(left_circular()),
        "R" => Ok(right_circular()),
        _ => Err(Error::UnknownBasis(label.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    HV,
    PM,
    LR,
}

impl FromStr for BasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "HV" => Ok(BasisLabel::HV),
            "PM" => Ok(BasisLabel::PM),
            "LR" => Ok(BasisLabel::LR),
            _ => Err(Error::UnknownBasis(s.to_string())),
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisLabel::HV => "HV",
            BasisLabel::PM => "PM",
            BasisLabel::LR => "LR",
        })
    }
}

/// An orthonormal polarization basis, listed in the order of its label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NamedBasis {
    pub label: BasisLabel,
    pub first: PolarizationKet,
    pub second: PolarizationKet,
}

impl NamedBasis {
    pub fn of(label: BasisLabel) -> Self {
        let (first, second) = match label {
            BasisLabel::HV => (horizontal(), vertical()),
            BasisLabel::PM => (diagonal(), antidiagonal()),
            BasisLabel::LR => (left_circular(), right_circular()),
        };
        NamedBasis {
            label,
            first,
            second,
        }
    }

    pub fn states(&self) -> [PolarizationKet; 2] {
        [self.first, self.second]
    }
}

/// Basis lookup by label: `"HV"`, `"PM"` or `"LR"`.
pub fn basis(label: &str) -> Result<NamedBasis> {
    Ok(NamedBasis::of(label.parse()?))
}

/// Source pair `(|H_i V_s⟩ + i|V_i H_s⟩)/√2` after the double slit has
/// filtered the signal path into `(|+⟩ + |−⟩)/√2`.
pub fn post_slit_state() -> HybridKet {
    let path = PathKet::symmetric();
    let a = HybridKet::product(&horizontal(), &SignalKet::product(&vertical(), &path));
    let b = HybridKet::product(&vertical(), &SignalKet::product(&horizontal(), &path));
    a.add(&b.scaled(c(0.0, 1.0))).scaled(c(FRAC_1_SQRT_2, 0.0))
}

/// Quarter-wave plates with orthogonal fast axes behind the two slits.
///
/// The upper plate sits at −45° and the lower at +45°. Fed with
/// [`post_slit_state`], the pair produces
/// `|H_i⟩(|R,+⟩ − |L,−⟩) + |V_i⟩(|L,+⟩ + |R,−⟩)` (normalized) up to the global
/// phase `e^{3iπ/4}`; the source's relative phase `i` is consumed by the
/// plates' retardance rather than dropped. In the laboratory the same map is
/// realised by a 22.5° half-wave plate before the slits and plates at 0°/90°.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirefringentMask {
    pub upper: JonesMatrix,
    pub lower: JonesMatrix,
}

impl Default for BirefringentMask {
    fn default() -> Self {
        BirefringentMask {
            upper: qwp(-FRAC_PI_4),
            lower: qwp(FRAC_PI_4),
        }
    }
}

impl BirefringentMask {
    pub fn apply(&self, k: &HybridKet) -> HybridKet {
        k.map_signal_conditional(self.upper.matrix(), self.lower.matrix())
    }

    pub fn adjoint(&self) -> BirefringentMask {
        BirefringentMask {
            upper: self.upper.adjoint(),
            lower: self.lower.adjoint(),
        }
    }
}

/// Path-conditional polarization coupling of the birefringent double slit.
pub fn birefringent_double_slit(k: &HybridKet) -> HybridKet {
    BirefringentMask::default().apply(k)
}

/// The half-wave plate on the idler arm.
///
/// Its nominal 22.5° is read in the idler's mirrored frame; in the lab-frame
/// convention of [`hwp`] it sits at −π/8, sending `|H⟩ → |M⟩` and
/// `|V⟩ → −|P⟩`.
pub fn idler_marker_plate() -> JonesMatrix {
    hwp(-FRAC_PI_8)
}

/// Applies [`idler_marker_plate`] to the idler polarization.
pub fn apply_idler_hwp_pi8(k: &HybridKet) -> HybridKet {
    k.map_idler(idler_marker_plate().matrix())
}

/// Applies `u` to the idler polarization.
pub fn apply_idler(k: &HybridKet, u: &JonesMatrix) -> HybridKet {
    k.map_idler(u.matrix())
}

/// Applies `u` to the signal polarization on both paths.
pub fn apply_signal(k: &HybridKet, u: &JonesMatrix) -> HybridKet {
    k.map_signal(u.matrix())
}

/// `|idler⟩ ⊗ |signal⟩ ⊗ |path⟩`.
pub fn product_ket(idler: &PolarizationKet, signal: &PolarizationKet, path: &PathKet) -> HybridKet {
    HybridKet::product(idler, &SignalKet::product(signal, path))
}

/// Component of a [`HybridKet`] along idler polarization `pol`, as a signal ket.
pub fn idler_branch(k: &HybridKet, pol: Pol) -> SignalKet {
    let onto = match pol {
        Pol::H => horizontal(),
        Pol::V => vertical(),
    };
    k.contract_idler(&onto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn hwp_pi8_takes_h_to_p() {
        let out = hwp(FRAC_PI_8).apply(&horizontal());
        assert!(out.equals_up_to_phase(&diagonal(), 1e-12));
    }

    #[test]
    fn hwp_zero_flips_v() {
        let out = hwp(0.0).apply(&vertical());
        assert!((out.v() + c(1.0, 0.0)).norm() < 1e-15);
        assert!(out.h().norm() < 1e-15);
    }

    #[test]
    fn hwp_reflects_linear_polarization() {
        for &(theta, beta) in &[(0.3, 0.1f64), (-0.7, 1.2), (2.0, -0.4)] {
            let out = hwp(theta).apply(&PolarizationKet::real(beta.cos(), beta.sin()));
            let target = 2.0 * theta - beta;
            let expect = PolarizationKet::real(target.cos(), target.sin());
            assert!(out.equals_up_to_phase(&expect, 1e-12));
        }
    }

    #[test]
    fn half_wave_plate_is_an_involution() {
        for k in 0..50 {
            let theta = -PI + k as f64 * 0.13;
            let sq = hwp(theta) * hwp(theta);
            assert!(sq.equals_up_to_phase(&JonesMatrix::identity(), 1e-12));
        }
    }

    #[test]
    fn qwp_at_45_makes_circular_light() {
        let out = qwp(FRAC_PI_4).apply(&horizontal());
        let is_circular = out.equals_up_to_phase(&left_circular(), 1e-12)
            || out.equals_up_to_phase(&right_circular(), 1e-12);
        assert!(is_circular);
        // with this convention it is |R⟩
        assert!(out.equals_up_to_phase(&right_circular(), 1e-12));
    }

    #[test]
    fn two_qwps_make_a_hwp() {
        for k in 0..50 {
            let theta = -2.0 + k as f64 * 0.081;
            assert!((qwp(theta) * qwp(theta)).equals_up_to_phase(&hwp(theta), 1e-12));
        }
    }

    #[test]
    fn crossed_qwps_cancel() {
        for k in 0..50 {
            let theta = -2.0 + k as f64 * 0.081;
            let pair = qwp(theta + FRAC_PI_2) * qwp(theta);
            assert!(pair.equals_up_to_phase(&JonesMatrix::identity(), 1e-12));
        }
    }

    #[test]
    fn polarizer_is_rank_one_projector() {
        let p = JonesMatrix::linear_polarizer(0.4);
        assert!((p * p).equals_up_to_phase(&p, 1e-12));
        assert!(p.matrix().determinant().norm() < 1e-15);
        assert!(!p.is_unitary(1e-3));
    }

    #[test]
    fn named_bases() {
        let hv = basis("HV").unwrap();
        assert_eq!(hv.first, PolarizationKet::real(1.0, 0.0));
        assert_eq!(hv.second, PolarizationKet::real(0.0, 1.0));

        let s = FRAC_1_SQRT_2;
        let pm = basis("PM").unwrap();
        assert_eq!(pm.first, PolarizationKet::real(s, s));
        assert_eq!(pm.second, PolarizationKet::real(s, -s));

        let lr = basis("LR").unwrap();
        assert_eq!(lr.first, PolarizationKet::new(c(s, 0.0), c(0.0, s)));
        assert_eq!(lr.second, PolarizationKet::new(c(s, 0.0), c(0.0, -s)));

        assert_eq!(basis("XY"), Err(Error::UnknownBasis("XY".into())));
    }

    #[test]
    fn bases_are_orthonormal() {
        for label in [BasisLabel::HV, BasisLabel::PM, BasisLabel::LR] {
            let b = NamedBasis::of(label);
            assert_eq!(b.first.inner(&b.second), c(0.0, 0.0));
            assert!((b.first.norm_sqr() - 1.0).abs() < 1e-12);
            assert!((b.second.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn named_state_lookup() {
        assert_eq!(named_state("p").unwrap(), diagonal());
        assert_eq!(named_state("R").unwrap(), right_circular());
        assert!(named_state("Q").is_err());
    }

    #[test]
    fn mask_on_single_path_uses_upper_plate_only() {
        let up = PathKet::new(c(1.0, 0.0), c(0.0, 0.0));
        let k = product_ket(&horizontal(), &right_circular(), &up);
        let out = birefringent_double_slit(&k);
        let expect = product_ket(
            &horizontal(),
            &qwp(-FRAC_PI_4).apply(&right_circular()),
            &up,
        );
        for (a, b) in out.amplitudes().iter().zip(expect.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn mask_adjoint_inverts() {
        let k = crate::state::normalize(
            &HybridKet::from_fn(|i, s, p| {
                c(
                    0.3 + i.index() as f64,
                    0.7 * s.index() as f64 - 0.2 * p.index() as f64,
                )
            })
            .unwrap(),
        )
        .unwrap();
        let mask = BirefringentMask::default();
        let back = mask.adjoint().apply(&mask.apply(&k));
        for (a, b) in back.amplitudes().iter().zip(k.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn idler_plate_sends_h_to_m_and_v_to_minus_p() {
        let u = idler_marker_plate();
        let h_out = u.apply(&horizontal());
        let v_out = u.apply(&vertical());
        for (a, b) in h_out.as_array().iter().zip(antidiagonal().as_array()) {
            assert!((a - b).norm() < 1e-15);
        }
        for (a, b) in v_out
            .as_array()
            .iter()
            .zip(diagonal().scaled(c(-1.0, 0.0)).as_array())
        {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn idler_plate_twice_is_identity() {
        let k = birefringent_double_slit(&post_slit_state());
        let twice = apply_idler_hwp_pi8(&apply_idler_hwp_pi8(&k));
        assert!(twice.equals_up_to_phase(&k, 1e-12));
    }
}
