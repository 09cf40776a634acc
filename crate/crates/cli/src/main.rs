use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use eraser_cli::checks::run_all;
use eraser_cli::config::{parse_config, parse_config_with_preset, Preset, RunConfig};
use eraser_cli::fit::fit_fringes;
use eraser_cli::scan::{emit_csv, groups, run_scan, write_csv, PatternRecord};
use eraser_cli::CliError;
use eraser_core::channel::{gamma, purity_closed_form, InputPolarization, MziSetting};
use num_complex::Complex64;

#[derive(Parser)]
#[command(
    name = "eraser",
    version,
    about = "Double-slit quantum eraser with a decohering which-path marker"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; defaults apply to absent keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cross-check every 10th point against the pair-state oracle
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured scan and write CSV
    Scan(Common),
    /// Run a figure preset, write CSV and print fitted visibilities
    Preset {
        /// fig2, fig3 or fig5
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print |γ|, arg γ and the balanced-input purity over a range of imbalances
    Gamma {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 50.0)]
        to: f64,
        #[arg(long, default_value_t = 5.0)]
        step: f64,
    },
    /// Run all oracle cross-validations; exit nonzero on failure
    Check {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn read_config(path: Option<&Path>) -> anyhow::Result<String> {
    match path {
        None => Ok(String::new()),
        Some(p) => std::fs::read_to_string(p)
            .map_err(|source| CliError::Read {
                path: p.to_path_buf(),
                source,
            })
            .map_err(Into::into),
    }
}

fn write_records(records: &[PatternRecord], out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => emit_csv(records, p)?,
        None => write_csv(records, std::io::stdout().lock()).context("writing CSV to stdout")?,
    }
    Ok(())
}

fn scan(mut cfg: RunConfig, common: &Common) -> anyhow::Result<Vec<PatternRecord>> {
    cfg.oracle_check |= common.oracle;
    let records = run_scan(&cfg)?;
    write_records(&records, common.out.as_deref())?;
    Ok(records)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Scan(common) => {
            let cfg = parse_config(&read_config(common.config.as_deref())?)?;
            scan(cfg, &common)?;
        }
        Command::Preset { name, common } => {
            let preset: Preset = name.parse()?;
            let cfg = parse_config_with_preset(&read_config(common.config.as_deref())?, preset)?;
            let records = scan(cfg, &common)?;
            // keep stdout clean when it carries the CSV
            let mut report: Box<dyn Write> = if common.out.is_some() {
                Box::new(std::io::stdout().lock())
            } else {
                Box::new(std::io::stderr().lock())
            };
            for group in groups(&records) {
                let eps = group[0].epsilon_i;
                match fit_fringes(group) {
                    Ok(f) => writeln!(
                        report,
                        "epsilon_I={eps} visibility={:.6} phase={:.6} residual={:.3e}{}",
                        f.visibility,
                        f.phase,
                        f.residual,
                        if f.degenerate { " (no fringes)" } else { "" }
                    )?,
                    Err(e) => writeln!(report, "epsilon_I={eps} fit failed: {e}")?,
                }
            }
        }
        Command::Gamma {
            config,
            from,
            to,
            step,
        } => {
            anyhow::ensure!(step > 0.0 && to >= from, "need step > 0 and to >= from");
            let cfg = parse_config(&read_config(config.as_deref())?)?;
            let filter = cfg.filter()?;
            let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let balanced = InputPolarization::new(half, half)?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "epsilon_I\t|gamma|\targ_gamma\tpurity")?;
            let count = ((to - from) / step + 1e-9).floor() as usize;
            for k in 0..=count {
                let eps = from + k as f64 * step;
                let g = gamma(
                    &filter,
                    &MziSetting::from_epsilon(eps, filter.center_wavelength())?,
                );
                writeln!(
                    out,
                    "{eps}\t{:.6e}\t{:.6}\t{:.6}",
                    g.norm(),
                    g.arg(),
                    purity_closed_form(&balanced, g)
                )?;
            }
        }
        Command::Check { config } => {
            let cfg = parse_config(&read_config(config.as_deref())?)?;
            let mut failed = false;
            for c in run_all(&cfg)? {
                println!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
                failed |= !c.passed;
            }
            if failed {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
