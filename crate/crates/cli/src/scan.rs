//! Negative-entropy window: c(ω₀) and min_T S_total per ω₀.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use rayon::prelude::*;

use casimir_thermo::plasma_sheet::{self, ScanRow};

use crate::sweep::num;
use crate::Run;

fn describe(name: &str, w: Option<(f64, f64)>) -> String {
    match w {
        Some((a, b)) => format!("{name}: ω₀/Ω₀ ∈ [{a:.4}, {b:.4}]"),
        None => format!("{name}: empty"),
    }
}

/// Writes the per-ω₀ CSV; returns the human-readable summary.
pub fn scan(plasma: f64, omega0: &[f64], run: &Run, out: impl Write) -> Result<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(run.jobs)
        .build()?;
    let rows: Vec<casimir_thermo::Result<ScanRow>> = pool.install(|| {
        omega0
            .par_iter()
            .map(|&x| plasma_sheet::scan_row(plasma, x * plasma, &run.temps, &run.settings))
            .collect()
    });

    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "Omega0",
        "omega0_over_Omega0",
        "c",
        "min_S_total",
        "T_at_min",
        "status",
    ])?;
    for (&x, r) in omega0.iter().zip(&rows) {
        let rec = match r {
            Ok(r) => [
                num(r.log_coefficient),
                num(r.min_entropy),
                num(r.t_at_min),
                "ok".into(),
            ],
            Err(e) => [
                num(f64::NAN),
                num(f64::NAN),
                num(f64::NAN),
                format!("failed: {e}"),
            ],
        };
        w.write_record([num(plasma), num(x)].into_iter().chain(rec))?;
    }
    w.flush()?;

    // windows in units of Ω₀
    let ok: Vec<ScanRow> = rows
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| ScanRow {
            omega0: r.omega0 / plasma,
            ..*r
        })
        .collect();
    let c_win = plasma_sheet::window(&ok, |r| r.log_coefficient < 0.0);
    let s_win = plasma_sheet::window(&ok, |r| r.min_entropy < 0.0);
    let (ref_lo, ref_hi) = (FRAC_1_SQRT_2, 1.2 * FRAC_1_SQRT_2);
    let mut s = String::new();
    writeln!(
        s,
        "scanned {} ω₀ values over {} temperatures ({} failed)",
        omega0.len(),
        run.temps.len(),
        rows.len() - ok.len()
    )?;
    writeln!(s, "{}", describe("c(ω₀) < 0", c_win))?;
    writeln!(s, "{}", describe("min_T S_total < 0", s_win))?;
    let overlaps = c_win.is_some_and(|(a, b)| a < ref_hi && b > ref_lo);
    write!(
        s,
        "overlaps (1/√2, 1.2/√2)·Ω₀ = ({ref_lo:.4}, {ref_hi:.4}): {}",
        if overlaps { "yes" } else { "no" }
    )?;
    Ok(s)
}
