// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod scan;
mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use casimir_thermo::verify::{self, Suite};
use casimir_thermo::QuadSettings;

use config::{parse_values, Config, Values};

/// Thermal corrections to the vacuum energy of a plasma sheet and a plasma slab.
/// All quantities in natural units (ħ = c = k_B = 1).
#[derive(Parser)]
#[command(name = "thermo", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Free energy and entropy of the sheet per part (TE, TM, sf) over a T grid.
    Sheet(SheetArgs),
    /// Free energy and entropy of the slab per part (s_TE, s_TM, L_TE, L_TM, exp).
    Slab(SlabArgs),
    /// ln T coefficient c(ω₀) and min_T S_total per ω₀; reports the negative-entropy window.
    Scan(ScanArgs),
    /// Run verification suites; prints JSON lines and exits nonzero on any failure.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// TOML file with defaults for any of these flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    tmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tmax: Option<f64>,
    /// Number of log-spaced temperatures
    #[arg(long)]
    tpts: Option<usize>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Worker threads (rows are still written in input order)
    #[arg(long)]
    jobs: Option<usize>,
    /// Output CSV (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SheetArgs {
    #[command(flatten)]
    common: Common,
    /// Mass parameter ω₀: list and/or ranges a:b:n[:log]
    #[arg(long)]
    omega0: Option<String>,
    /// Plasma parameter Ω₀
    #[arg(long = "Omega0")]
    plasma: Option<String>,
    /// Subset of TE,TM,sf
    #[arg(long, value_delimiter = ',')]
    parts: Option<Vec<String>>,
}

#[derive(Args)]
struct SlabArgs {
    #[command(flatten)]
    common: Common,
    /// Plasma frequency ω_p
    #[arg(long)]
    omegap: Option<String>,
    /// Thickness L
    #[arg(long = "L")]
    thickness: Option<String>,
    /// Subset of s_TE,s_TM,L_TE,L_TM,exp (s and L select both polarisations)
    #[arg(long, value_delimiter = ',')]
    parts: Option<Vec<String>>,
    /// Also write the surface-plasmon dispersion (k, ω_sf) here
    #[arg(long)]
    plasmon_out: Option<PathBuf>,
    /// Largest k of the dispersion grid, in units of ω_p
    #[arg(long, default_value_t = 10.0)]
    kmax: f64,
    #[arg(long, default_value_t = 200)]
    kpts: usize,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: Common,
    /// ω₀ values to scan, in units of Ω₀ (default 0.6:0.95:71)
    #[arg(long)]
    omega0: Option<String>,
    #[arg(long = "Omega0")]
    plasma: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites to run (all if none): oracle, asymptotics, constants, thermo-identity, nernst
    #[arg(value_parser = parse_suite)]
    suites: Vec<Suite>,
    #[arg(long)]
    rel_tol: Option<f64>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: casimir_thermo::Error| e.to_string())
}

/// Bad flag values or config contents: reported like clap's usage errors.
#[derive(Debug)]
struct Usage(anyhow::Error);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| Usage(e).into())
}

/// Settings resolved from flags, then config, then defaults.
pub struct Run {
    pub temps: Vec<f64>,
    pub settings: QuadSettings,
    pub jobs: usize,
}

fn resolve(c: &Common, cfg: &Config, t_default: (f64, f64, usize)) -> Result<Run> {
    let tmin = c.tmin.or(cfg.tmin).unwrap_or(t_default.0);
    let tmax = c.tmax.or(cfg.tmax).unwrap_or(t_default.1);
    let tpts = c.tpts.or(cfg.tpts).unwrap_or(t_default.2);
    if !(tmin > 0.0) || !(tmax >= tmin) || !tmax.is_finite() {
        bail!("temperature range needs 0 < tmin ≤ tmax, got [{tmin}, {tmax}]");
    }
    if tpts == 0 {
        bail!("empty temperature grid (tpts = 0)");
    }
    let defaults = QuadSettings::default();
    let settings = QuadSettings::with_tolerances(
        c.rel_tol.or(cfg.rel_tol).unwrap_or(defaults.rel_tol),
        c.abs_tol.or(cfg.abs_tol).unwrap_or(defaults.abs_tol),
    )?;
    let jobs = c.jobs.or(cfg.jobs).unwrap_or(1).max(1);
    Ok(Run {
        temps: config::logspace(tmin, tmax, tpts)?,
        settings,
        jobs,
    })
}

fn values(
    flag: &Option<String>,
    cfg: &Option<Values>,
    default: &[f64],
    what: &str,
) -> Result<Vec<f64>> {
    match (flag, cfg) {
        (Some(s), _) => parse_values(s),
        (None, Some(v)) => v.resolve(),
        (None, None) => Ok(default.to_vec()),
    }
    .with_context(|| format!("--{what}"))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Sheet(a) => {
            let cfg = usage(Config::load(a.common.config.as_deref()))?;
            let run = usage(resolve(&a.common, &cfg, (1e-2, 1e2, 41)))?;
            let job = sweep::SheetSweep {
                plasma: usage(values(&a.plasma, &cfg.plasma, &[1.0], "Omega0"))?,
                omega0: usage(values(&a.omega0, &cfg.omega0, &[0.0], "omega0"))?,
                parts: usage(sweep::sheet_parts(a.parts.as_ref().or(cfg.parts.as_ref())))?,
            };
            let failed = sweep::sheet(&job, &run, output(&a.common.out)?)?;
            report_failures(failed);
        }
        Cmd::Slab(a) => {
            let cfg = usage(Config::load(a.common.config.as_deref()))?;
            let run = usage(resolve(&a.common, &cfg, (1e-2, 1e2, 41)))?;
            let job = sweep::SlabSweep {
                omega_p: usage(values(&a.omegap, &cfg.omegap, &[1.0], "omegap"))?,
                thickness: usage(values(&a.thickness, &cfg.thickness, &[1.0], "L"))?,
                parts: usage(sweep::slab_parts(a.parts.as_ref().or(cfg.parts.as_ref())))?,
            };
            eprintln!("note: the slab surface plasmon is not included in the totals (its free energy diverges)");
            let failed = sweep::slab(&job, &run, output(&a.common.out)?)?;
            report_failures(failed);
            if let Some(path) = &a.plasmon_out {
                let file =
                    File::create(path).with_context(|| format!("creating {}", path.display()))?;
                sweep::plasmon_dispersion(&job, a.kmax, a.kpts, &run, BufWriter::new(file))?;
            }
        }
        Cmd::Scan(a) => {
            let cfg = usage(Config::load(a.common.config.as_deref()))?;
            let run = usage(resolve(&a.common, &cfg, (1e-2, 1e3, 161)))?;
            let plasma = match a.plasma {
                Some(x) => x,
                None => usage(cfg.plasma.as_ref().map(Values::resolve).transpose())?
                    .map_or(1.0, |v| v[0]),
            };
            let (lo, hi, n) = verify::WINDOW_SCAN;
            let omega0 = usage(values(
                &a.omega0,
                &cfg.omega0,
                &config::linspace(lo, hi, n),
                "omega0",
            ))?;
            let summary = scan::scan(plasma, &omega0, &run, output(&a.common.out)?)?;
            eprintln!("{summary}");
        }
        Cmd::Verify(a) => {
            let suites = if a.suites.is_empty() {
                Suite::ALL.to_vec()
            } else {
                a.suites
            };
            let mut settings = verify::default_settings();
            if let Some(r) = a.rel_tol {
                settings =
                    usage(QuadSettings::with_tolerances(r, settings.abs_tol).map_err(Into::into))?;
            }
            let mut out = io::stdout().lock();
            let mut all_pass = true;
            let mut summary = Vec::new();
            for suite in suites {
                let records = suite.run(&settings);
                let passed = records.iter().filter(|r| r.pass).count();
                for r in &records {
                    writeln!(out, "{}", serde_json::to_string(r)?)?;
                }
                summary.push(format!("{suite}: {passed}/{} checks pass", records.len()));
                for r in records.iter().filter(|r| !r.pass) {
                    summary.push(format!(
                        "  FAIL {}: expected {}, measured {}, tolerance {}",
                        r.check, r.expected, r.measured, r.tolerance
                    ));
                }
                all_pass &= passed == records.len();
            }
            out.flush()?;
            for line in summary {
                eprintln!("{line}");
            }
            return Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_failures(failed: usize) {
    if failed > 0 {
        eprintln!("warning: {failed} row(s) failed and are written as nan");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e:#}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("thermo: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
