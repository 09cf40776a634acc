//! End-to-end checks of the pure (decoherence-free) eraser protocol: source,
//! birefringent slits, idler plate and idler projections.

use eraser_core::optics::{
    antidiagonal, apply_idler_hwp_pi8, birefringent_double_slit, diagonal, horizontal,
    left_circular, post_slit_state, product_ket, right_circular, vertical,
};
use eraser_core::state::{
    normalize, project_idler, HybridKet, PathKet, Pol, PolarizationKet, SignalKet, Slit,
};
use num_complex::Complex64;

const FIDELITY_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn upper() -> PathKet {
    PathKet::new(c(1.0, 0.0), c(0.0, 0.0))
}

fn lower() -> PathKet {
    PathKet::new(c(0.0, 0.0), c(1.0, 0.0))
}

/// `Σ_k w_k |idler_k⟩|signal_k⟩|path_k⟩`, normalized.
fn superpose(terms: &[(Complex64, PolarizationKet, PolarizationKet, PathKet)]) -> HybridKet {
    let zero = HybridKet::from_amplitudes([c(0.0, 0.0); 8]).unwrap();
    let sum = terms.iter().fold(zero, |acc, (w, i, s, p)| {
        acc.add(&product_ket(i, s, p).scaled(*w))
    });
    normalize(&sum).unwrap()
}

fn path(upper_amp: Complex64, lower_amp: Complex64) -> PathKet {
    let n = (upper_amp.norm_sqr() + lower_amp.norm_sqr()).sqrt();
    PathKet::new(upper_amp / n, lower_amp / n)
}

/// Coherence between the two slit paths after tracing out signal polarization.
fn path_coherence(k: &SignalKet) -> Complex64 {
    Pol::ALL
        .iter()
        .map(|&s| k.amplitude(s, Slit::Upper) * k.amplitude(s, Slit::Lower).conj())
        .sum()
}

fn one() -> Complex64 {
    c(1.0, 0.0)
}

#[test]
fn birefringent_slits_reproduce_circular_marking() {
    // |H_i⟩(|R,+⟩ − |L,−⟩) + |V_i⟩(|L,+⟩ + |R,−⟩)
    let (h, v, l, r) = (horizontal(), vertical(), left_circular(), right_circular());
    let target = superpose(&[
        (one(), h, r, upper()),
        (-one(), h, l, lower()),
        (one(), v, l, upper()),
        (one(), v, r, lower()),
    ]);
    let state = birefringent_double_slit(&post_slit_state());
    assert!(state.is_normalized());
    assert!(state.overlap_modulus(&target) > 1.0 - FIDELITY_TOL);

    // one global phase for all eight amplitudes: e^{3iπ/4}
    let phase = target.inner(&state);
    let expect = Complex64::from_polar(1.0, 3.0 * std::f64::consts::FRAC_PI_4);
    assert!((phase - expect).norm() < 1e-12, "{phase}");
    for (a, b) in state.amplitudes().iter().zip(target.amplitudes()) {
        assert!((a - b * phase).norm() < 1e-12);
    }
}

#[test]
fn circular_marking_in_idler_circular_basis() {
    // |L_i⟩(|P,+⟩ − i|P,−⟩) + i|R_i⟩(|M,+⟩ + i|M,−⟩)
    let (l, r, p, m) = (
        left_circular(),
        right_circular(),
        diagonal(),
        antidiagonal(),
    );
    let i = c(0.0, 1.0);
    let target = superpose(&[
        (one(), l, p, upper()),
        (-i, l, p, lower()),
        (i, r, m, upper()),
        (i * i, r, m, lower()),
    ]);
    let state = birefringent_double_slit(&post_slit_state());
    assert!(state.overlap_modulus(&target) > 1.0 - FIDELITY_TOL);
}

#[test]
fn circular_idler_projections_give_fringes_and_antifringes() {
    let state = birefringent_double_slit(&post_slit_state());

    let on_l = project_idler(&state, &left_circular()).unwrap();
    assert!((on_l.probability - 0.5).abs() < 1e-12);
    let (pol, p) = on_l.state.factorize(1e-12).unwrap();
    assert!(pol.equals_up_to_phase(&diagonal(), 1e-12));
    assert!(p.equals_up_to_phase(&path(one(), c(0.0, -1.0)), 1e-12));

    let on_r = project_idler(&state, &right_circular()).unwrap();
    assert!((on_r.probability - 0.5).abs() < 1e-12);
    let (pol, p) = on_r.state.factorize(1e-12).unwrap();
    assert!(pol.equals_up_to_phase(&antidiagonal(), 1e-12));
    assert!(p.equals_up_to_phase(&path(one(), c(0.0, 1.0)), 1e-12));

    // fringes and antifringes: opposite path coherence
    let cl = path_coherence(&on_l.state);
    let cr = path_coherence(&on_r.state);
    assert!((cl + cr).norm() < 1e-12);
    assert!((cl.norm() - 0.5).abs() < 1e-12);
}

#[test]
fn linear_idler_projections_carry_which_path() {
    let state = birefringent_double_slit(&post_slit_state());
    for onto in [horizontal(), vertical()] {
        let pr = project_idler(&state, &onto).unwrap();
        assert!((pr.probability - 0.5).abs() < 1e-12);
        assert!(path_coherence(&pr.state).norm() < 1e-12);
    }
}

#[test]
fn idler_plate_reproduces_diagonal_marking() {
    // |M_i⟩(|R,+⟩ − |L,−⟩) − |P_i⟩(|L,+⟩ + |R,−⟩)
    let (l, r, p, m) = (
        left_circular(),
        right_circular(),
        diagonal(),
        antidiagonal(),
    );
    let target = superpose(&[
        (one(), m, r, upper()),
        (-one(), m, l, lower()),
        (-one(), p, l, upper()),
        (-one(), p, r, lower()),
    ]);
    let state = apply_idler_hwp_pi8(&birefringent_double_slit(&post_slit_state()));
    assert!(state.is_normalized());
    assert!(state.overlap_modulus(&target) > 1.0 - FIDELITY_TOL);
}

#[test]
fn diagonal_idler_projections_after_plate_carry_which_path() {
    let state = apply_idler_hwp_pi8(&birefringent_double_slit(&post_slit_state()));
    for onto in [diagonal(), antidiagonal()] {
        let pr = project_idler(&state, &onto).unwrap();
        assert!((pr.probability - 0.5).abs() < 1e-12);
        assert!(pr.state.factorize(1e-9).is_none());
        assert!(path_coherence(&pr.state).norm() < 1e-12);
    }
}

#[test]
fn circular_idler_projections_after_plate() {
    let state = apply_idler_hwp_pi8(&birefringent_double_slit(&post_slit_state()));

    let on_l = project_idler(&state, &left_circular()).unwrap();
    let (pol_l, path_l) = on_l.state.factorize(1e-12).unwrap();
    assert!(pol_l.equals_up_to_phase(&antidiagonal(), 1e-12));
    assert!(path_l.equals_up_to_phase(&path(one(), c(0.0, 1.0)), 1e-12));

    let on_r = project_idler(&state, &right_circular()).unwrap();
    let (pol_r, path_r) = on_r.state.factorize(1e-12).unwrap();
    assert!(pol_r.equals_up_to_phase(&diagonal(), 1e-12));
    assert!(path_r.equals_up_to_phase(&path(one(), c(0.0, -1.0)), 1e-12));

    // the pair of conditional path states is {(+ − i−), (+ + i−)}: fringes and
    // antifringes, with the signal polarization factored out
    let fringe = path(one(), c(0.0, -1.0));
    let anti = path(one(), c(0.0, 1.0));
    let found = [path_r, path_l];
    assert!(found.iter().any(|p| p.equals_up_to_phase(&fringe, 1e-12)));
    assert!(found.iter().any(|p| p.equals_up_to_phase(&anti, 1e-12)));
    assert!((path_coherence(&on_l.state) + path_coherence(&on_r.state)).norm() < 1e-12);
}

#[test]
fn printed_circular_form_after_plate_differs_from_diagonal_form() {
    // |L_i⟩(|P,+⟩ − i|P,−⟩) − |R_i⟩(|M,+⟩ + i|M,−⟩) is not the same ray as
    // the diagonal-basis form; only its bracket states swap idler labels.
    let (l, r, p, m) = (
        left_circular(),
        right_circular(),
        diagonal(),
        antidiagonal(),
    );
    let i = c(0.0, 1.0);
    let printed = superpose(&[
        (one(), l, p, upper()),
        (-i, l, p, lower()),
        (-one(), r, m, upper()),
        (-i, r, m, lower()),
    ]);
    let state = apply_idler_hwp_pi8(&birefringent_double_slit(&post_slit_state()));
    assert!(state.overlap_modulus(&printed) < 0.9);

    let swapped = superpose(&[
        (one(), r, p, upper()),
        (-i, r, p, lower()),
        (-one(), l, m, upper()),
        (-i, l, m, lower()),
    ]);
    assert!(state.overlap_modulus(&swapped) > 1.0 - FIDELITY_TOL);
}

#[test]
fn source_state_normalization() {
    let s = post_slit_state();
    assert!(s.is_normalized());
    let h = s.amplitude(Pol::H, Pol::V, Slit::Upper);
    assert!((h - c(0.5, 0.0)).norm() < 1e-15);
    let v = s.amplitude(Pol::V, Pol::H, Slit::Lower);
    assert!((v - c(0.0, 0.5)).norm() < 1e-15);
    assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
}
