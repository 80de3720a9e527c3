//! Sheet and slab sweeps: one CSV row per (parameter point, T).

use std::io::Write;

use anyhow::{bail, Result};
use rayon::prelude::*;

use casimir_thermo::{
    plasma_sheet, slab, Part, QuadSettings, SheetParams, SlabParams, ThermoPoint,
};

use crate::Run;

pub struct SheetSweep {
    pub plasma: Vec<f64>,
    pub omega0: Vec<f64>,
    pub parts: Vec<Part>,
}

pub struct SlabSweep {
    pub omega_p: Vec<f64>,
    pub thickness: Vec<f64>,
    pub parts: Vec<Part>,
}

fn parse_parts(
    names: Option<&Vec<String>>,
    all: &[Part],
    groups: &[(&str, &[Part])],
) -> Result<Vec<Part>> {
    let Some(names) = names else {
        return Ok(all.to_vec());
    };
    let mut out = Vec::new();
    for name in names.iter().map(|s| s.trim()) {
        let hit: Vec<Part> = if let Some((_, g)) = groups.iter().find(|(n, _)| *n == name) {
            g.to_vec()
        } else if let Some(p) = all.iter().find(|p| p.label() == name) {
            vec![*p]
        } else {
            let valid: Vec<&str> = all
                .iter()
                .map(|p| p.label())
                .chain(groups.iter().map(|g| g.0))
                .collect();
            bail!("unknown part '{name}' (valid: {})", valid.join(", "));
        };
        out.extend(hit);
    }
    // canonical order, no repeats: column layout depends only on the set
    let out: Vec<Part> = all.iter().copied().filter(|p| out.contains(p)).collect();
    if out.is_empty() {
        bail!("no parts selected");
    }
    Ok(out)
}

pub fn sheet_parts(names: Option<&Vec<String>>) -> Result<Vec<Part>> {
    parse_parts(names, &Part::SHEET, &[])
}

pub fn slab_parts(names: Option<&Vec<String>>) -> Result<Vec<Part>> {
    parse_parts(
        names,
        &Part::SLAB,
        &[
            ("s", &[Part::SurfaceTe, Part::SurfaceTm]),
            ("L", &[Part::LifshitzTe, Part::LifshitzTm]),
        ],
    )
}

pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:e}")
    }
}

fn header(params: &[&str], parts: &[Part]) -> Vec<String> {
    let mut h: Vec<String> = params.iter().map(|s| s.to_string()).collect();
    h.push("T".into());
    for p in parts {
        h.push(format!("F_subtr_{}", p.label()));
        h.push(format!("S_subtr_{}", p.label()));
    }
    h.extend(
        [
            "F_subtr_total",
            "S_subtr_total",
            "F_raw_total",
            "S_raw_total",
            "quad_error",
        ]
        .map(String::from),
    );
    h
}

/// Numeric columns after T; a failed point becomes all "nan".
fn values(point: &casimir_thermo::Result<ThermoPoint>, parts: &[Part]) -> Vec<String> {
    let n = 2 * parts.len() + 5;
    let Ok(pt) = point else {
        return vec![num(f64::NAN); n];
    };
    let mut v = Vec::with_capacity(n);
    for p in parts {
        let pv = pt.part(*p).copied().unwrap_or_default();
        v.push(num(pv.f_subtr));
        v.push(num(pv.s_subtr));
    }
    v.extend([pt.f_subtr, pt.s_subtr, pt.f_raw, pt.s_raw, pt.error].map(num));
    v
}

fn status(point: &casimir_thermo::Result<ThermoPoint>) -> String {
    match point {
        Ok(_) => "ok".into(),
        Err(e) => format!("failed: {e}"),
    }
}

/// Evaluates all points on `jobs` threads; results come back in input order.
fn evaluate<P: Sync, R: Send>(
    points: &[P],
    jobs: usize,
    f: impl Fn(&P) -> R + Sync + Send,
) -> Result<Vec<R>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| points.par_iter().map(&f).collect()))
}

fn sheet_point(
    t: f64,
    params: &SheetParams,
    parts: &[Part],
    s: &QuadSettings,
) -> casimir_thermo::Result<ThermoPoint> {
    let full = plasma_sheet::total(t, params, s)?;
    if parts.len() == Part::SHEET.len() {
        return Ok(full);
    }
    let kept = full
        .breakdown
        .into_iter()
        .filter(|(p, _)| parts.contains(p))
        .collect();
    Ok(ThermoPoint::from_parts(t, kept))
}

/// Returns the number of failed rows.
pub fn sheet(job: &SheetSweep, run: &Run, out: impl Write) -> Result<usize> {
    let mut points = Vec::new();
    for &o in &job.plasma {
        for &w0 in &job.omega0 {
            for &t in &run.temps {
                points.push((o, w0, t));
            }
        }
    }
    let results = evaluate(&points, run.jobs, |&(o, w0, t)| {
        SheetParams::new(o, w0).and_then(|p| sheet_point(t, &p, &job.parts, &run.settings))
    })?;
    let mut w = csv::Writer::from_writer(out);
    let mut h = header(&["Omega0", "omega0"], &job.parts);
    h.push("status".into());
    w.write_record(&h)?;
    let mut failed = 0;
    for (&(o, w0, t), r) in points.iter().zip(&results) {
        let mut row = vec![num(o), num(w0), num(t)];
        row.extend(values(r, &job.parts));
        row.push(status(r));
        failed += r.is_err() as usize;
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(failed)
}

/// Slab rows carry `plasmon_in_totals = false`: the surface plasmon's free
/// energy is not part of any total.
pub fn slab(job: &SlabSweep, run: &Run, out: impl Write) -> Result<usize> {
    let mut points = Vec::new();
    for &wp in &job.omega_p {
        for &l in &job.thickness {
            for &t in &run.temps {
                points.push((wp, l, t));
            }
        }
    }
    let results = evaluate(&points, run.jobs, |&(wp, l, t)| {
        SlabParams::new(wp, l).and_then(|p| slab::total_parts(t, &p, &job.parts, &run.settings))
    })?;
    let mut w = csv::Writer::from_writer(out);
    let mut h = header(&["omegap", "L"], &job.parts);
    h.push("plasmon_in_totals".into());
    h.push("status".into());
    w.write_record(&h)?;
    let mut failed = 0;
    for (&(wp, l, t), r) in points.iter().zip(&results) {
        let mut row = vec![num(wp), num(l), num(t)];
        row.extend(values(r, &job.parts));
        row.push("false".into());
        row.push(status(r));
        failed += r.is_err() as usize;
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(failed)
}

/// (k, ω_sf) on a linear k grid up to kmax·ω_p for every (ω_p, L).
pub fn plasmon_dispersion(
    job: &SlabSweep,
    kmax: f64,
    kpts: usize,
    run: &Run,
    out: impl Write,
) -> Result<()> {
    if !(kmax > 0.0) || kpts == 0 {
        bail!("dispersion grid needs kmax > 0 and kpts ≥ 1");
    }
    let mut points = Vec::new();
    for &wp in &job.omega_p {
        for &l in &job.thickness {
            for i in 1..=kpts {
                points.push((wp, l, kmax * wp * i as f64 / kpts as f64));
            }
        }
    }
    let x_tol = 1e-14;
    let results = evaluate(&points, run.jobs, |&(wp, l, k)| {
        SlabParams::new(wp, l).and_then(|p| slab::plasmon_dispersion(k, &p, x_tol * wp))
    })?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["omegap", "L", "k", "omega_sf", "status"])?;
    for (&(wp, l, k), r) in points.iter().zip(&results) {
        let (v, st) = match r {
            Ok(x) => (*x, "ok".to_string()),
            Err(e) => (f64::NAN, format!("failed: {e}")),
        };
        w.write_record([num(wp), num(l), num(k), num(v), st])?;
    }
    w.flush()?;
    Ok(())
}
