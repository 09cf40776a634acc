use std::io::Write;
use std::path::Path;

use eraser_core::model::{coincidence, fit_oracle_scale, full_state_oracle};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const CSV_HEADER: [&str; 6] = [
    "epsilon_I",
    "x_m",
    "epsilon_x",
    "envelope",
    "coincidence_raw",
    "coincidence_normalized",
];

/// Frequency grid used for oracle spot checks.
pub const ORACLE_POINTS: usize = 4096;
/// Relative tolerance of oracle spot checks.
pub const ORACLE_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternRecord {
    pub epsilon_i: f64,
    pub x_m: f64,
    pub epsilon_x: f64,
    pub envelope: f64,
    pub coincidence_raw: f64,
    pub coincidence_normalized: f64,
}

/// One record per `(ε_I, x)`, grouped by `ε_I` in config order with `x`
/// ascending inside each group. Normalization is per group.
pub fn run_scan(cfg: &RunConfig) -> Result<Vec<PatternRecord>> {
    let setting = cfg.measurement.setting()?;
    let xs = cfg.scan.positions();
    let configs = cfg
        .epsilon_i_list
        .iter()
        .map(|&e| cfg.eraser_config(e))
        .collect::<Result<Vec<_>>>()?;

    let mut records: Vec<PatternRecord> = configs
        .par_iter()
        .zip(cfg.epsilon_i_list.par_iter())
        .flat_map_iter(|(ec, &epsilon_i)| {
            let g = *ec.geometry();
            xs.iter().map(move |&x| PatternRecord {
                epsilon_i,
                x_m: x,
                epsilon_x: g.epsilon_x(x),
                envelope: g.envelope(x),
                coincidence_raw: coincidence(x, &setting, ec),
                coincidence_normalized: 0.0,
            })
        })
        .collect();

    for group in records.chunks_mut(xs.len()) {
        let peak = group.iter().map(|r| r.coincidence_raw).fold(0.0, f64::max);
        for r in group {
            r.coincidence_normalized = if peak > 0.0 {
                r.coincidence_raw / peak
            } else {
                0.0
            };
        }
    }

    if cfg.oracle_check {
        // one scale per configuration, fixed before the checks fan out
        let scales = configs
            .iter()
            .map(|ec| fit_oracle_scale(ec, ORACLE_POINTS))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(CliError::model("oracle normalization"))?;
        let n = xs.len();
        (0..records.len())
            .into_par_iter()
            .step_by(10)
            .try_for_each(|i| {
                let r = &records[i];
                let ec = &configs[i / n];
                let oracle = full_state_oracle(r.x_m, &setting, ec, ORACLE_POINTS)
                    .map_err(CliError::model(format!("oracle at x = {} m", r.x_m)))?
                    / scales[i / n];
                let model = r.coincidence_raw;
                let floor = 1e-9 * r.envelope;
                let relative = (oracle - model).abs() / model.max(floor);
                if relative > ORACLE_TOLERANCE {
                    return Err(CliError::OracleMismatch {
                        epsilon_i: r.epsilon_i,
                        x: r.x_m,
                        oracle,
                        model,
                        relative,
                    });
                }
                Ok(())
            })?;
    }
    Ok(records)
}

fn fmt(v: f64) -> String {
    format!("{v:.10e}")
}

/// Writes the CSV header and one row per record.
pub fn write_csv<W: Write>(records: &[PatternRecord], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            fmt(r.epsilon_i),
            fmt(r.x_m),
            fmt(r.epsilon_x),
            fmt(r.envelope),
            fmt(r.coincidence_raw),
            fmt(r.coincidence_normalized),
        ])?;
    }
    w.flush()
}

pub fn emit_csv(records: &[PatternRecord], destination: &Path) -> Result<()> {
    let wrap = |source| CliError::Write {
        path: destination.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(destination).map_err(wrap)?;
    write_csv(records, std::io::BufWriter::new(file)).map_err(wrap)
}

/// Splits records into consecutive runs sharing one `ε_I`.
pub fn groups(records: &[PatternRecord]) -> Vec<&[PatternRecord]> {
    records
        .chunk_by(|a, b| a.epsilon_i.to_bits() == b.epsilon_i.to_bits())
        .collect()
}
