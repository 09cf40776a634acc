//! Run configuration.
//!
//! A config file is a flat TOML table. Every key is optional; absent keys take
//! the values of the standard setup.
//!
//! | key                         | type            | default  |
//! |-----------------------------|-----------------|----------|
//! | `wavelength_nm`             | number > 0      | 702      |
//! | `filter_width_nm`           | number > 0      | 10       |
//! | `filter_width_convention`   | `"gaussian"` or `"fwhm"` | `"gaussian"` |
//! | `slit_full_width_um`        | number > 0      | 80       |
//! | `slit_center_separation_um` | number > 0      | 250      |
//! | `detector_slit_width_um`    | number > 0      | 50       |
//! | `propagation_distance_m`    | number > 0      | 0.2      |
//! | `x_min_mm`                  | number          | -1.5     |
//! | `x_max_mm`                  | number          | 1.5      |
//! | `step_um`                   | number > 0      | 30       |
//! | `basis`                     | `H V P M L R`   | `"P"`    |
//! | `theta_deg`, `phi_deg`      | numbers, given together, instead of `basis` | |
//! | `epsilon_I_list`            | non-empty array of numbers | `[0.25]` |
//! | `oracle_check`              | bool            | false    |
//!
//! Widths and separations are full, centre-to-centre lengths as measured on
//! the bench; they are halved on the way into [`SlitGeometry`]. The
//! `(x_max_mm − x_min_mm)` range must be a whole number of steps.

use std::str::FromStr;

use eraser_core::channel::{MziSetting, SpectralFilter, WidthConvention};
use eraser_core::model::{EraserConfig, MeasurementSetting};
use eraser_core::propagation::SlitGeometry;
use toml::{Table, Value};

use crate::error::{CliError, Result};

const KNOWN_KEYS: &[&str] = &[
    "wavelength_nm",
    "filter_width_nm",
    "filter_width_convention",
    "slit_full_width_um",
    "slit_center_separation_um",
    "detector_slit_width_um",
    "propagation_distance_m",
    "x_min_mm",
    "x_max_mm",
    "step_um",
    "basis",
    "theta_deg",
    "phi_deg",
    "epsilon_I_list",
    "oracle_check",
];

/// Idler measurement as written in the config.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementSpec {
    Label(String),
    Angles { theta_deg: f64, phi_deg: f64 },
}

impl MeasurementSpec {
    pub fn setting(&self) -> Result<MeasurementSetting> {
        match self {
            MeasurementSpec::Label(l) => MeasurementSetting::from_label(l)
                .map_err(|e| CliError::invalid("basis", e.to_string())),
            MeasurementSpec::Angles { theta_deg, phi_deg } => {
                MeasurementSetting::from_degrees(*theta_deg, *phi_deg)
                    .map_err(|e| CliError::invalid("theta_deg", e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRange {
    pub x_min_mm: f64,
    pub x_max_mm: f64,
    pub step_um: f64,
}

impl ScanRange {
    pub fn steps(&self) -> usize {
        ((self.x_max_mm - self.x_min_mm) * 1e3 / self.step_um).round() as usize
    }

    /// Detector positions in metres, ascending.
    pub fn positions(&self) -> Vec<f64> {
        let start = self.x_min_mm / 1e3;
        let step = self.step_um / 1e6;
        (0..=self.steps())
            .map(|k| start + k as f64 * step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub wavelength_nm: f64,
    pub filter_width_nm: f64,
    pub filter_width_convention: WidthConvention,
    pub slit_full_width_um: f64,
    pub slit_center_separation_um: f64,
    pub detector_slit_width_um: f64,
    pub propagation_distance_m: f64,
    pub scan: ScanRange,
    pub measurement: MeasurementSpec,
    pub epsilon_i_list: Vec<f64>,
    pub oracle_check: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        parse_config("").expect("defaults are valid")
    }
}

impl RunConfig {
    pub fn geometry(&self) -> Result<SlitGeometry> {
        SlitGeometry::new(
            self.slit_full_width_um / 2e6,
            self.slit_center_separation_um / 2e6,
            self.detector_slit_width_um / 2e6,
            self.propagation_distance_m,
            self.wavelength_nm / 1e9,
        )
        .map_err(CliError::model("slit geometry"))
    }

    pub fn filter(&self) -> Result<SpectralFilter> {
        SpectralFilter::with_convention(
            self.wavelength_nm / 1e9,
            self.filter_width_nm / 1e9,
            self.filter_width_convention,
        )
        .map_err(|e| CliError::invalid("filter_width_nm", e.to_string()))
    }

    /// Model configuration at one interferometer imbalance.
    pub fn eraser_config(&self, epsilon_i: f64) -> Result<EraserConfig> {
        let geometry = self.geometry()?;
        let filter = self.filter()?;
        let mzi = MziSetting::from_epsilon(epsilon_i, filter.center_wavelength())
            .map_err(|e| CliError::invalid("epsilon_I_list", e.to_string()))?;
        EraserConfig::new(geometry, filter, mzi).map_err(|e| match e {
            eraser_core::Error::BeyondFraunhofer { .. } => CliError::Model {
                context: format!(
                    "scan x in [{} mm, {} mm]",
                    self.scan.x_min_mm, self.scan.x_max_mm
                ),
                source: e,
            },
            other => CliError::Model {
                context: "configuration".into(),
                source: other,
            },
        })
    }
}

/// Figure presets; each fills only keys absent from the user's config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Diagonal projection at ε_I = 0, 1/8, 1/4.
    Fig2,
    /// Diagonal projection at ε_I = n + 1/4 for n = 0..=40.
    Fig3,
    /// Diagonal projection at ε_I = 7.25, 11.25, 15.25, 19.25.
    Fig5,
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig5" => Ok(Preset::Fig5),
            other => Err(CliError::UnknownPreset(other.to_string())),
        }
    }
}

impl Preset {
    pub fn epsilon_i_list(self) -> Vec<f64> {
        match self {
            Preset::Fig2 => vec![0.0, 0.125, 0.25],
            Preset::Fig3 => (0..=40).map(|n| f64::from(n) + 0.25).collect(),
            Preset::Fig5 => vec![7.25, 11.25, 15.25, 19.25],
        }
    }

    fn fill(self, table: &mut Table) {
        let explicit_angles = table.contains_key("theta_deg") || table.contains_key("phi_deg");
        if !explicit_angles {
            table
                .entry("basis")
                .or_insert_with(|| Value::String("P".into()));
        }
        table.entry("epsilon_I_list").or_insert_with(|| {
            Value::Array(
                self.epsilon_i_list()
                    .into_iter()
                    .map(Value::Float)
                    .collect(),
            )
        });
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    build(parse_table(text)?)
}

pub fn parse_config_with_preset(text: &str, preset: Preset) -> Result<RunConfig> {
    let mut table = parse_table(text)?;
    preset.fill(&mut table);
    build(table)
}

fn parse_table(text: &str) -> Result<Table> {
    let table = Table::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    if let Some(k) = table.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(CliError::UnknownKey(k.clone()));
    }
    Ok(table)
}

fn number(table: &Table, key: &'static str) -> Result<Option<f64>> {
    match table.get(key) {
        None => Ok(None),
        Some(v) => as_number(v)
            .map(Some)
            .ok_or_else(|| CliError::invalid(key, format!("expected a number, got {v}"))),
    }
}

fn as_number(v: &Value) -> Option<f64> {
    match v {
        Value::Integer(i) => Some(*i as f64),
        Value::Float(f) if f.is_finite() => Some(*f),
        _ => None,
    }
}

fn positive(table: &Table, key: &'static str, default: f64) -> Result<f64> {
    let v = number(table, key)?.unwrap_or(default);
    if v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::invalid(key, format!("must be positive, got {v}")))
    }
}

fn build(table: Table) -> Result<RunConfig> {
    let filter_width_convention = match table.get("filter_width_convention") {
        None => WidthConvention::GaussianWidth,
        Some(Value::String(s)) if s == "gaussian" => WidthConvention::GaussianWidth,
        Some(Value::String(s)) if s == "fwhm" => WidthConvention::Fwhm,
        Some(v) => {
            return Err(CliError::invalid(
                "filter_width_convention",
                format!("expected \"gaussian\" or \"fwhm\", got {v}"),
            ))
        }
    };

    let scan = ScanRange {
        x_min_mm: number(&table, "x_min_mm")?.unwrap_or(-1.5),
        x_max_mm: number(&table, "x_max_mm")?.unwrap_or(1.5),
        step_um: positive(&table, "step_um", 30.0)?,
    };
    if scan.x_max_mm <= scan.x_min_mm {
        return Err(CliError::invalid("x_max_mm", "must exceed x_min_mm"));
    }
    let steps = (scan.x_max_mm - scan.x_min_mm) * 1e3 / scan.step_um;
    if (steps - steps.round()).abs() > 1e-6 {
        return Err(CliError::invalid(
            "step_um",
            format!("does not divide the scan range ({steps:.4} steps)"),
        ));
    }

    let measurement = match (
        table.get("basis"),
        number(&table, "theta_deg")?,
        number(&table, "phi_deg")?,
    ) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(CliError::invalid(
                "basis",
                "give either basis or theta_deg/phi_deg, not both",
            ))
        }
        (Some(Value::String(s)), None, None) => {
            MeasurementSetting::from_label(s)
                .map_err(|e| CliError::invalid("basis", e.to_string()))?;
            MeasurementSpec::Label(s.clone())
        }
        (Some(v), None, None) => {
            return Err(CliError::invalid(
                "basis",
                format!("expected a string, got {v}"),
            ))
        }
        (None, Some(theta_deg), Some(phi_deg)) => MeasurementSpec::Angles { theta_deg, phi_deg },
        (None, Some(_), None) => return Err(CliError::MissingKey("phi_deg")),
        (None, None, Some(_)) => return Err(CliError::MissingKey("theta_deg")),
        (None, None, None) => MeasurementSpec::Label("P".into()),
    };

    let epsilon_i_list = match table.get("epsilon_I_list") {
        None => vec![0.25],
        Some(Value::Array(items)) => {
            let list = items
                .iter()
                .map(|v| {
                    as_number(v).ok_or_else(|| {
                        CliError::invalid("epsilon_I_list", format!("expected numbers, got {v}"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if list.is_empty() {
                return Err(CliError::invalid("epsilon_I_list", "must not be empty"));
            }
            list
        }
        Some(v) => {
            return Err(CliError::invalid(
                "epsilon_I_list",
                format!("expected an array, got {v}"),
            ))
        }
    };

    let oracle_check = match table.get("oracle_check") {
        None => false,
        Some(Value::Boolean(b)) => *b,
        Some(v) => {
            return Err(CliError::invalid(
                "oracle_check",
                format!("expected true or false, got {v}"),
            ))
        }
    };

    let cfg = RunConfig {
        wavelength_nm: positive(&table, "wavelength_nm", 702.0)?,
        filter_width_nm: positive(&table, "filter_width_nm", 10.0)?,
        filter_width_convention,
        slit_full_width_um: positive(&table, "slit_full_width_um", 80.0)?,
        slit_center_separation_um: positive(&table, "slit_center_separation_um", 250.0)?,
        detector_slit_width_um: positive(&table, "detector_slit_width_um", 50.0)?,
        propagation_distance_m: positive(&table, "propagation_distance_m", 0.2)?,
        scan,
        measurement,
        epsilon_i_list,
        oracle_check,
    };
    if cfg.filter_width_nm >= cfg.wavelength_nm {
        return Err(CliError::invalid(
            "filter_width_nm",
            "must be smaller than wavelength_nm",
        ));
    }
    if cfg.slit_center_separation_um <= cfg.slit_full_width_um {
        return Err(CliError::invalid(
            "slit_center_separation_um",
            "slits overlap (separation must exceed the slit width)",
        ));
    }
    Ok(cfg)
}
