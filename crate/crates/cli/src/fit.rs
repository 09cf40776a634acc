//! Least-squares fringe fit `C(x) = A·E(x)·(1 − v·sin(2πε_x + φ₀))`.
//!
//! The scale `A` enters linearly and is solved in closed form for every
//! `(v, φ₀)`, so the search runs over two parameters: a coarse grid followed
//! by a compass search with shrinking steps.

use std::f64::consts::{PI, TAU};

use crate::error::{CliError, Result};
use crate::scan::PatternRecord;

const ENVELOPE_FRACTION: f64 = 0.2;
const MIN_SPAN: f64 = 2.0;
const V_GRID: usize = 51;
const PHI_GRID: usize = 90;
/// RMS improvement over a fringe-free fit below which `v` counts as zero.
const DEGENERATE_IMPROVEMENT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeFit {
    pub visibility: f64,
    /// `φ₀` in `(−π, π]`.
    pub phase: f64,
    /// RMS residual on the normalized column.
    pub residual: f64,
    pub degenerate: bool,
}

struct Point {
    y: f64,
    envelope: f64,
    epsilon_x: f64,
}

/// Sum of squared residuals with the optimal scale.
fn ssr(points: &[Point], v: f64, phi: f64) -> f64 {
    let (mut yy, mut yg, mut gg) = (0.0, 0.0, 0.0);
    for p in points {
        let g = p.envelope * (1.0 - v * (TAU * p.epsilon_x + phi).sin());
        yy += p.y * p.y;
        yg += p.y * g;
        gg += g * g;
    }
    if gg > 0.0 {
        (yy - yg * yg / gg).max(0.0)
    } else {
        yy
    }
}

fn wrap(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Fits one `ε_I` group over its central envelope lobe.
pub fn fit_fringes(records: &[PatternRecord]) -> Result<FringeFit> {
    let Some((centre, peak)) = records
        .iter()
        .map(|r| r.envelope)
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
    else {
        return Err(CliError::FitSpan(0.0));
    };
    let inside = |r: &PatternRecord| r.envelope > ENVELOPE_FRACTION * peak;
    let (mut lo, mut hi) = (centre, centre);
    while lo > 0 && inside(&records[lo - 1]) {
        lo -= 1;
    }
    while hi + 1 < records.len() && inside(&records[hi + 1]) {
        hi += 1;
    }
    let region = &records[lo..=hi];
    let span = (region[region.len() - 1].epsilon_x - region[0].epsilon_x).abs();
    if span < MIN_SPAN {
        return Err(CliError::FitSpan(span));
    }
    let points: Vec<Point> = region
        .iter()
        .map(|r| Point {
            y: r.coincidence_normalized,
            envelope: r.envelope,
            epsilon_x: r.epsilon_x,
        })
        .collect();
    let n = points.len() as f64;

    let mut best = (0.0, 0.0, ssr(&points, 0.0, 0.0));
    for i in 0..V_GRID {
        let v = i as f64 / (V_GRID - 1) as f64;
        for j in 0..PHI_GRID {
            let phi = -PI + TAU * j as f64 / PHI_GRID as f64;
            let s = ssr(&points, v, phi);
            if s < best.2 {
                best = (v, phi, s);
            }
        }
    }

    let (mut dv, mut dphi) = (1.0 / (V_GRID - 1) as f64, TAU / PHI_GRID as f64);
    while dv > 1e-12 || dphi > 1e-12 {
        let (v, phi, s) = best;
        let candidates = [
            ((v + dv).min(1.0), phi),
            ((v - dv).max(0.0), phi),
            (v, phi + dphi),
            (v, phi - dphi),
        ];
        let mut moved = false;
        for (cv, cphi) in candidates {
            let cs = ssr(&points, cv, cphi);
            if cs < s {
                best = (cv, cphi, cs);
                moved = true;
                break;
            }
        }
        if !moved {
            dv *= 0.5;
            dphi *= 0.5;
        }
    }

    let flat = (ssr(&points, 0.0, 0.0) / n).sqrt();
    let fitted = (best.2 / n).sqrt();
    if flat - fitted < DEGENERATE_IMPROVEMENT {
        return Ok(FringeFit {
            visibility: 0.0,
            phase: 0.0,
            residual: flat,
            degenerate: true,
        });
    }
    Ok(FringeFit {
        visibility: best.0,
        phase: wrap(best.1),
        residual: fitted,
        degenerate: false,
    })
}
