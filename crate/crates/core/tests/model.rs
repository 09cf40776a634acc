use eraser_core::math::uniform_grid;
use eraser_core::model::{
    c_p_general, c_p_half_integer, c_p_quarter, coincidence, decoherence_visibility, default_scan,
    full_state_oracle, idler_density_at, sample_pattern, visibility, EraserConfig,
    MeasurementSetting, VisibilityStatus,
};
use proptest::prelude::*;

fn cfg(eps: f64) -> EraserConfig {
    EraserConfig::experiment_default(eps).unwrap()
}

proptest! {
    #[test]
    fn outcomes_of_one_measurement_add_to_fringe_free_total(
        x in -1.5e-3..1.5e-3f64,
        eps in 0.0..40.0f64,
        theta in -3.2..3.2f64,
        phi in -3.2..3.2f64,
    ) {
        let c = cfg(eps);
        let m = MeasurementSetting::new(theta, phi).unwrap();
        let total = coincidence(x, &m, &c) + coincidence(x, &m.orthogonal(), &c);
        // (A₋ + A₊)/8 = envelope/2
        let expect = c.geometry().envelope(x) / 2.0;
        prop_assert!((total - expect).abs() < 1e-14);
    }

    #[test]
    fn diagonal_pattern_is_bounded_by_twice_envelope(x in -1.5e-3..1.5e-3f64, eps in 0.0..40.0f64) {
        let c = cfg(eps);
        let v = c_p_general(x, &c);
        let env = c.geometry().envelope(x);
        prop_assert!(v >= -1e-15 && v <= 4.0 * env + 1e-15);
    }

    #[test]
    fn idler_purity_within_qubit_bounds(x in -1.5e-3..1.5e-3f64, eps in 0.0..40.0f64) {
        let d = idler_density_at(x, &cfg(eps)).unwrap();
        let p = d.density.purity();
        prop_assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&p));
        // purity = (1 + |B|²/A²)/2 with A₋ = A₊ = A
        let r = d.b.norm() / d.a_minus;
        prop_assert!((p - 0.5 * (1.0 + r * r)).abs() < 1e-12);
    }
}

#[test]
fn horizontal_projection_ignores_interferometer() {
    // 100 pseudo-random (x, ε_I) pairs from a fixed low-discrepancy sequence
    let h = MeasurementSetting::horizontal();
    let base = cfg(0.0);
    for k in 1..=100 {
        let u = (k as f64 * 0.618_033_988_749_895).fract();
        let w = (k as f64 * 0.754_877_666_246_693).fract();
        let x = (2.0 * u - 1.0) * 1.5e-3;
        let eps = 60.0 * w;
        let reference = coincidence(x, &h, &base);
        let v = coincidence(x, &h, &cfg(eps));
        assert!((v - reference).abs() < 1e-12);
    }
}

#[test]
fn purity_grows_with_coherence() {
    let x = 0.2e-3;
    let mut pairs: Vec<(f64, f64)> = (0..200)
        .map(|k| {
            let d = idler_density_at(x, &cfg(0.1 * k as f64)).unwrap();
            (d.b.norm() / d.a_minus, d.density.purity())
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in pairs.windows(2) {
        if w[1].0 > w[0].0 + 1e-12 {
            assert!(w[1].1 > w[0].1);
        }
    }
}

#[test]
fn diagonal_and_antidiagonal_are_antiphased() {
    let step = 1e-6;
    let xs = uniform_grid(-1.0e-3, step, 2001);
    for n in [0u32, 3, 7] {
        let c = cfg(f64::from(n) + 0.25);
        let g = c.geometry();
        let p: Vec<f64> = xs
            .iter()
            .map(|&x| coincidence(x, &MeasurementSetting::diagonal(), &c) / g.envelope(x))
            .collect();
        let m: Vec<f64> = xs
            .iter()
            .map(|&x| coincidence(x, &MeasurementSetting::antidiagonal(), &c) / g.envelope(x))
            .collect();
        let argmax = |v: &[f64]| (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
        let argmin = |v: &[f64]| (0..v.len()).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
        let (pmax, mmin) = (argmax(&p), argmin(&m));
        assert!(
            (xs[pmax] - xs[mmin]).abs() <= step / 2.0,
            "n = {n}: {} vs {}",
            xs[pmax],
            xs[mmin]
        );
        for i in 0..xs.len() {
            assert!((p[i] + m[i] - 0.5).abs() < 1e-12);
        }
    }
}

#[test]
fn quarter_wave_visibility_follows_decoherence_law() {
    let xs = default_scan();
    let c = cfg(0.25);
    let mut last = f64::INFINITY;
    for n in 0..=35u32 {
        let v = visibility(&sample_pattern(&xs, c.geometry(), |x| {
            c_p_quarter(x, n, &c)
        }));
        assert_eq!(v.status, VisibilityStatus::Ok);
        assert!(v.value < last, "visibility not decreasing at n = {n}");
        let law = decoherence_visibility(n, &c);
        assert!(
            ((v.value - law) / law).abs() < 0.01,
            "n = {n}: {} vs {law}",
            v.value
        );
        last = v.value;
    }
}

#[test]
fn exact_model_visibility_stays_near_decoherence_law() {
    // Keeping the cosh factor and the quarter in ε_I moves the central
    // visibility by a few percent either way of e^{−a n²}.
    let xs = default_scan();
    let mut last = f64::INFINITY;
    for n in 0..=35u32 {
        let c = cfg(f64::from(n) + 0.25);
        let v = visibility(&sample_pattern(&xs, c.geometry(), |x| c_p_general(x, &c))).value;
        assert!(v < last);
        let law = decoherence_visibility(n, &c);
        assert!(((v - law) / law).abs() < 0.05, "n = {n}: {v} vs {law}");
        last = v;
    }
}

#[test]
fn closed_forms_agree_with_each_other() {
    let xs = default_scan();
    for n in 0..=20u32 {
        let half = cfg(f64::from(n) / 2.0);
        let quarter = cfg(f64::from(n) + 0.25);
        for &x in &xs {
            let g = c_p_general(x, &half);
            assert!((c_p_half_integer(x, n, &half) - g / 2.0).abs() < 1e-9);
            let env = quarter.geometry().envelope(x);
            let q = c_p_quarter(x, n, &quarter);
            let exact = c_p_general(x, &quarter) / 2.0;
            // cosh(2ε_I a ε_x) ≈ 1 is tight for small n and loosens slowly
            let tol = if n <= 5 { 0.01 } else { 0.03 };
            assert!((q - exact).abs() <= tol * env, "n = {n}, x = {x}");
        }
    }
}

#[test]
fn oracle_matches_general_form_on_grid() {
    let xs = [-1.2e-3, -0.45e-3, 0.0, 0.31e-3, 1.05e-3];
    let p = MeasurementSetting::diagonal();
    for eps in [0.0, 0.25, 1.6, 7.25, 19.25] {
        let c = cfg(eps);
        let k = eraser_core::model::fit_oracle_scale(&c, 4096).unwrap();
        for &x in &xs {
            let o = full_state_oracle(x, &p, &c, 4096).unwrap() / k;
            let model = c_p_general(x, &c) / 8.0;
            assert!(
                ((o - model) / model).abs() < 1e-5,
                "{eps} {x}: {o} vs {model}"
            );
        }
    }
}
