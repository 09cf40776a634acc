//! Oracle cross-validations behind the `check` subcommand.

use eraser_core::channel::{gamma, gamma_oracle, MziSetting};
use eraser_core::model::{
    c_p_general, c_p_half_integer, coincidence, fit_oracle_scale, full_state_oracle, EraserConfig,
    MeasurementSetting,
};
use eraser_core::optics::{
    apply_idler_hwp_pi8, birefringent_double_slit, post_slit_state, product_ket,
};
use eraser_core::propagation::{
    brute_force_pattern, intensity_pattern, PropagationGrid, SlitAmplitudes,
};
use eraser_core::state::{normalize, HybridKet, PathKet, PolarizationKet};
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: f64, limit: f64, what: &str) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst < limit,
        detail: format!("max {what} {worst:.3e} (limit {limit:.0e})"),
    }
}

/// Closed-form decoherence factor against its frequency quadrature.
pub fn gamma_vs_quadrature(cfg: &RunConfig) -> Result<CheckOutcome> {
    let filter = cfg.filter()?;
    let mut worst: f64 = 0.0;
    for eps in [0.0, 0.25, 1.0, 5.0, 30.0, 50.0] {
        let m = MziSetting::from_epsilon(eps, filter.center_wavelength())
            .map_err(crate::error::CliError::model("interferometer"))?;
        let q = gamma_oracle(&filter, &m, 4096, 10.0)
            .map_err(crate::error::CliError::model("gamma quadrature"))?;
        worst = worst.max((gamma(&filter, &m) - q).norm());
    }
    Ok(outcome(
        "gamma closed form vs quadrature",
        worst,
        1e-6,
        "|difference|",
    ))
}

fn cfgs(cfg: &RunConfig, eps: &[f64]) -> Result<Vec<EraserConfig>> {
    eps.iter().map(|&e| cfg.eraser_config(e)).collect()
}

/// Frequency-resolved pair-state oracle against the diagonal closed form.
pub fn oracle_vs_closed_form(cfg: &RunConfig) -> Result<CheckOutcome> {
    let p = MeasurementSetting::diagonal();
    let mut worst: f64 = 0.0;
    for ec in cfgs(cfg, &[0.0, 0.25, 1.6, 7.25, 19.25])? {
        let k = fit_oracle_scale(&ec, 4096).map_err(crate::error::CliError::model("oracle"))?;
        for x in [-1.2e-3, -0.45e-3, 0.0, 0.31e-3, 1.05e-3] {
            let o = full_state_oracle(x, &p, &ec, 4096)
                .map_err(crate::error::CliError::model("oracle"))?
                / k;
            let m = c_p_general(x, &ec) / 8.0;
            worst = worst.max(((o - m) / m).abs());
        }
    }
    Ok(outcome(
        "pair-state oracle vs closed form",
        worst,
        1e-5,
        "relative error",
    ))
}

/// Horizontal projection must not see the interferometer.
pub fn horizontal_independence(cfg: &RunConfig) -> Result<CheckOutcome> {
    let h = MeasurementSetting::horizontal();
    let all = cfgs(cfg, &[0.0, 0.25, 3.0, 17.5, 40.0])?;
    let xs = cfg.scan.positions();
    let mut worst: f64 = 0.0;
    for ec in &all[1..] {
        for &x in &xs {
            worst = worst.max((coincidence(x, &h, ec) - coincidence(x, &h, &all[0])).abs());
        }
    }
    Ok(outcome(
        "H projection independent of imbalance",
        worst,
        1e-12,
        "|difference|",
    ))
}

/// Half-integer closed form against the general form.
pub fn half_integer_vs_general(cfg: &RunConfig) -> Result<CheckOutcome> {
    let xs = cfg.scan.positions();
    let mut worst: f64 = 0.0;
    for n in 0..=20u32 {
        let ec = cfg.eraser_config(f64::from(n) / 2.0)?;
        for &x in &xs {
            worst = worst.max((c_p_half_integer(x, n, &ec) - c_p_general(x, &ec) / 2.0).abs());
        }
    }
    Ok(outcome(
        "half-integer form vs general form",
        worst,
        1e-9,
        "|difference|",
    ))
}

/// Small-parameter detector amplitude against direct momentum-space propagation.
pub fn propagation_vs_brute_force(cfg: &RunConfig) -> Result<CheckOutcome> {
    let g = cfg.geometry()?;
    let xs = cfg.scan.positions();
    let w = SlitAmplitudes::symmetric();
    let approx =
        intensity_pattern(&xs, &w, &g).map_err(crate::error::CliError::model("propagation"))?;
    let brute = brute_force_pattern(&xs, &w, &g, &PropagationGrid::for_geometry(&g))
        .map_err(crate::error::CliError::model("propagation"))?;
    let pa = approx.iter().map(|s| s.intensity).fold(0.0, f64::max);
    let pb = brute.iter().cloned().fold(0.0, f64::max);
    let worst = approx
        .iter()
        .zip(&brute)
        .map(|(a, b)| (a.intensity / pa - b / pb).abs())
        .fold(0.0, f64::max);
    Ok(outcome(
        "far-field amplitude vs brute-force propagation",
        worst,
        0.02,
        "peak-relative difference",
    ))
}

fn ket(terms: &[(Complex64, PolarizationKet, PolarizationKet, PathKet)]) -> HybridKet {
    let zero = HybridKet::from_amplitudes([Complex64::new(0.0, 0.0); 8]).expect("finite");
    let sum = terms.iter().fold(zero, |acc, (c, i, s, p)| {
        acc.add(&product_ket(i, s, p).scaled(*c))
    });
    normalize(&sum).expect("non-null")
}

/// Pure protocol: marked pair state with and without the idler plate.
pub fn protocol_states() -> CheckOutcome {
    use eraser_core::optics::{
        antidiagonal, diagonal, horizontal, left_circular, right_circular, vertical,
    };
    let one = Complex64::new(1.0, 0.0);
    let up = PathKet::new(one, Complex64::new(0.0, 0.0));
    let down = PathKet::new(Complex64::new(0.0, 0.0), one);
    let (h, v, l, r, p, m) = (
        horizontal(),
        vertical(),
        left_circular(),
        right_circular(),
        diagonal(),
        antidiagonal(),
    );
    let marked = ket(&[
        (one, h, r, up),
        (-one, h, l, down),
        (one, v, l, up),
        (one, v, r, down),
    ]);
    let plated = ket(&[
        (one, m, r, up),
        (-one, m, l, down),
        (-one, p, l, up),
        (-one, p, r, down),
    ]);
    let s2 = birefringent_double_slit(&post_slit_state());
    let s3 = apply_idler_hwp_pi8(&s2);
    let worst = (1.0 - s2.overlap_modulus(&marked)).max(1.0 - s3.overlap_modulus(&plated));
    outcome("protocol states", worst, 1e-12, "infidelity")
}

pub fn run_all(cfg: &RunConfig) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        gamma_vs_quadrature(cfg)?,
        protocol_states(),
        horizontal_independence(cfg)?,
        half_integer_vs_general(cfg)?,
        oracle_vs_closed_form(cfg)?,
        propagation_vs_brute_force(cfg)?,
    ])
}
