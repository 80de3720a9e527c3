use std::path::Path;
use std::process::{Command, Output};

fn thermo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermo"))
        .args(args)
        .output()
        .expect("spawn thermo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows as header-keyed lookups.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let h = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect();
    (h, rows)
}

fn col(h: &[String], name: &str) -> usize {
    h.iter()
        .position(|x| x == name)
        .unwrap_or_else(|| panic!("no column {name} in {h:?}"))
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn sheet_without_mass_has_positive_entropy() {
    let o = thermo(&[
        "sheet", "--omega0", "0", "--Omega0", "1", "--tmin", "1e-2", "--tmax", "1e2", "--tpts", "9",
    ]);
    assert!(o.status.success());
    let (h, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 9);
    let s = col(&h, "S_subtr_total");
    assert!(rows.iter().all(|r| f(&r[s]) >= 0.0));
    assert!(rows.iter().all(|r| r[col(&h, "status")] == "ok"));
    assert!(rows.iter().all(|r| f(&r[col(&h, "quad_error")]) >= 0.0));
}

#[test]
fn sheet_low_temperature_slope() {
    let o = thermo(&["sheet", "--tmin", "1e-3", "--tmax", "1e-3", "--tpts", "1"]);
    let (h, rows) = table(&stdout(&o));
    let slope = f(&rows[0][col(&h, "S_subtr_total")]) / 1e-3;
    assert!((slope - 2.0 / 9.0).abs() < 0.01 * 2.0 / 9.0, "{slope}");
}

#[test]
fn bad_grids_are_usage_errors() {
    for args in [
        &["sheet", "--tpts", "0"][..],
        &["sheet", "--tmin", "2", "--tmax", "1"],
        &["slab", "--parts", "TE"],
        &["sheet", "--omega0", "1:2"],
        &["verify", "nonsense"],
    ] {
        let o = thermo(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn output_is_identical_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, name: &str| {
        let p = dir.path().join(name);
        let o = thermo(&[
            "sheet",
            "--omega0",
            "0,0.9",
            "--tpts",
            "6",
            "--jobs",
            jobs,
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        std::fs::read(p).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("4", "b.csv");
    let c = run("4", "c.csv");
    assert_eq!(a, b);
    assert_eq!(b, c);
}

#[test]
fn failed_rows_are_nan_and_the_run_continues() {
    let o = thermo(&["sheet", "--Omega0", "0,1", "--tpts", "2"]);
    assert!(o.status.success());
    let (h, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][col(&h, "F_subtr_total")], "nan");
    assert!(rows[0][col(&h, "status")].starts_with("failed"));
    assert_eq!(rows[3][col(&h, "status")], "ok");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "tmin = 0.5\ntmax = 0.5\ntpts = 1\nomega0 = [0.0, 0.3]\nparts = [\"TE\"]\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let (h, rows) = table(&stdout(&thermo(&["sheet", "--config", cfg])));
    assert_eq!(rows.len(), 2);
    assert!(h.contains(&"F_subtr_TE".to_string()) && !h.contains(&"F_subtr_TM".to_string()));
    let (_, rows) = table(&stdout(&thermo(&[
        "sheet", "--config", cfg, "--omega0", "0.7",
    ])));
    assert_eq!(rows.len(), 1);
    assert_eq!(f(&rows[0][1]), 0.7);
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "omegga = 1\n").unwrap();
    assert_eq!(
        thermo(&["sheet", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn slab_parts_thickness_and_plasmon_flag() {
    let dir = tempfile::tempdir().unwrap();
    let disp = dir.path().join("disp.csv");
    let o = thermo(&[
        "slab",
        "--L",
        "1,2",
        "--tmin",
        "0.3",
        "--tmax",
        "300",
        "--tpts",
        "3",
        "--plasmon-out",
        disp.to_str().unwrap(),
        "--kpts",
        "4",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("not included in the totals"));
    let (h, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 6);
    assert!(rows
        .iter()
        .all(|r| r[col(&h, "plasmon_in_totals")] == "false"));
    let s_exp = col(&h, "S_subtr_exp");
    for i in 0..3 {
        let ratio = f(&rows[i + 3][s_exp]) / f(&rows[i][s_exp]);
        assert!((ratio - 2.0).abs() < 1e-9, "{ratio}");
    }
    // Lifshitz entropy positive; surface entropy negative at high T
    let s_l = f(&rows[2][col(&h, "S_subtr_L_TE")]) + f(&rows[2][col(&h, "S_subtr_L_TM")]);
    let s_s = f(&rows[2][col(&h, "S_subtr_s_TE")]) + f(&rows[2][col(&h, "S_subtr_s_TM")]);
    assert!(s_l > 0.0 && s_s < 0.0, "{s_l} {s_s}");
    let (dh, drows) = table(&std::fs::read_to_string(&disp).unwrap());
    assert_eq!(drows.len(), 8);
    let w = col(&dh, "omega_sf");
    assert!(drows
        .iter()
        .all(|r| f(&r[w]) > 0.0 && f(&r[w]) <= std::f64::consts::FRAC_1_SQRT_2));
}

#[test]
fn scan_reports_the_window() {
    let o = thermo(&[
        "scan",
        "--omega0",
        "0,0.6:0.95:15",
        "--tpts",
        "31",
        "--jobs",
        "4",
    ]);
    assert!(o.status.success());
    let (h, rows) = table(&stdout(&o));
    assert_eq!(rows.len(), 16);
    assert!(f(&rows[0][col(&h, "c")]) > 0.0);
    assert!(f(&rows[0][col(&h, "min_S_total")]) >= 0.0);
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("overlaps") && err.contains(": yes"), "{err}");

    let one = thermo(&["scan", "--omega0", "0.8", "--tpts", "5"]);
    assert_eq!(table(&stdout(&one)).1.len(), 1);
}

#[test]
fn verify_emits_json_lines() {
    let o = thermo(&["verify", "nernst", "constants"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut suites = std::collections::BTreeSet::new();
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in [
            "suite",
            "check",
            "expected",
            "measured",
            "tolerance",
            "pass",
        ] {
            assert!(v.get(key).is_some(), "{line}");
        }
        suites.insert(v["suite"].as_str().unwrap().to_string());
    }
    assert_eq!(suites.len(), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("checks pass"));
}

#[test]
fn verify_fails_on_a_red_suite() {
    // the asymptotics suite carries the slab low-T limits that do not hold
    let o = thermo(&["verify", "asymptotics"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn writes_to_file_only_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out.csv");
    let o = thermo(&["sheet", "--tpts", "1", "--out", p.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert!(Path::new(&p).exists());
}
