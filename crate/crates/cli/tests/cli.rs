use std::process::{Command, Output};

use cr_umbilic::ambient::Point4;
use cr_umbilic::ellipsoid::{sextic_forms, EllipsoidParams};
use cr_umbilic::invariants::invariants_at;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cr-umbilic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn records(text: &str) -> (csv::StringRecord, Vec<csv::StringRecord>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let head = r.headers().unwrap().clone();
    let rows = r.records().map(|x| x.unwrap()).collect();
    (head, rows)
}

fn col(head: &csv::StringRecord, row: &csv::StringRecord, name: &str) -> f64 {
    let i = head.iter().position(|h| h == name).unwrap();
    row[i].parse().unwrap()
}

fn point(head: &csv::StringRecord, row: &csv::StringRecord) -> Point4 {
    Point4::from_real(["x", "y", "u", "v"].map(|c| col(head, row, c)))
}

#[test]
fn invariants_pole_row() {
    let o = run(&["invariants", "--a", "0.5", "--b", "0", "--grid", "100"]);
    assert!(o.status.success());
    let (head, rows) = records(&stdout(&o));
    assert_eq!(rows.len(), 10_000);
    let pole = rows
        .iter()
        .find(|r| (col(&head, r, "u") - 1.0).abs() < 1e-15 && col(&head, r, "x").abs() < 1e-15)
        .expect("grid contains (0, 1)");
    assert!((col(&head, pole, "R") - 1.75).abs() < 1e-14);
    assert!((col(&head, pole, "re_q11") - 0.125).abs() < 1e-14);
}

#[test]
fn invariants_sphere_is_umbilical() {
    let o = run(&["invariants", "--a", "0", "--b", "0", "--grid", "12"]);
    assert!(o.status.success());
    let (head, rows) = records(&stdout(&o));
    for r in &rows {
        assert_eq!(col(&head, r, "re_q11"), 0.0);
        assert_eq!(col(&head, r, "im_q11"), 0.0);
        assert_eq!(col(&head, r, "R"), 2.0);
    }
}

#[test]
fn bad_parameters_exit_2() {
    let o = run(&["invariants", "--a", "1.5", "--b", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("need 0 <= b <= a"));
    let o = run(&["invariants", "--grid", "banana"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exit_2() {
    let o = run(&["locus", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot write"));
}

fn curve_kinds(args: &[&str]) -> Vec<String> {
    let o = run(args);
    assert!(o.status.success(), "{}", stderr(&o));
    let (head, rows) = records(&stdout(&o));
    let ci = head.iter().position(|h| h == "curve").unwrap();
    let ki = head.iter().position(|h| h == "kind").unwrap();
    let mut kinds: Vec<(usize, String)> = rows.iter().map(|r| (r[ci].parse().unwrap(), r[ki].to_string())).collect();
    kinds.dedup();
    kinds.into_iter().map(|k| k.1).collect()
}

#[test]
fn locus_families() {
    let ba = curve_kinds(&["locus", "--a", "0.3", "--b", "0.3", "--samples", "16"]);
    assert_eq!(ba, ["special_ba=gamma_plus", "special_ba=gamma_minus", "special_ba", "special_ba"]);
    let b0 = curve_kinds(&["locus", "--a", "0.5", "--b", "0", "--samples", "16"]);
    assert_eq!(b0, ["special_b0", "special_b0", "axis_circle"]);
    let o = run(&["locus", "--a", "0.5", "--b", "0.2", "--samples", "16"]);
    assert!(stderr(&o).contains("cr-umbilic trace"));
    let g = curve_kinds(&["locus", "--a", "0.5", "--b", "0.2", "--samples", "16"]);
    assert_eq!(g, ["gamma_plus", "gamma_minus"]);
}

#[test]
fn trace_json_schema() {
    let o = run(&["trace", "--a", "0.5", "--b", "0.2", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["format_version"], 1);
    assert_eq!(doc["command"], "trace");
    assert_eq!(doc["params"]["a"], 0.5);
    let comps = doc["components"].as_array().unwrap();
    assert!(!comps.is_empty());
    for c in comps {
        assert!(c["closed"].is_boolean());
        let v = c["vertices"].as_array().unwrap();
        assert!(!v.is_empty());
        for key in ["x", "y", "u", "v", "rho_residual", "re_s", "im_s", "dist_gamma", "singular"] {
            assert!(v[0].get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn trace_redirects_special_parameters() {
    let o = run(&["trace", "--a", "0.5", "--b", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cr-umbilic locus"));
    let o = run(&["trace", "--a", "0.5", "--b", "0.2", "--step", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn csv_round_trip_reproduces_residuals() {
    // trace
    let o = run(&["trace", "--a", "0.5", "--b", "0.2"]);
    assert!(o.status.success());
    let pr = EllipsoidParams::new(0.5, 0.2).unwrap();
    let (head, rows) = records(&stdout(&o));
    assert!(!rows.is_empty());
    for r in &rows {
        let p = point(&head, r);
        let s = sextic_forms(p.z.re, p.z.im, p.w.re, p.w.im, &pr);
        assert!((pr.rho(&p).abs() - col(&head, r, "rho_residual")).abs() <= 1e-12);
        assert!((s.re_s - col(&head, r, "re_s")).abs() <= 1e-12);
        assert!((s.im_s - col(&head, r, "im_s")).abs() <= 1e-12);
    }
    // invariants
    let o = run(&["invariants", "--a", "0.6", "--b", "0.25", "--grid", "20"]);
    let pr = EllipsoidParams::new(0.6, 0.25).unwrap();
    let (head, rows) = records(&stdout(&o));
    for r in &rows {
        let rep = invariants_at(&pr.poly(), &point(&head, r)).unwrap();
        assert!((rep.r - col(&head, r, "R")).abs() <= 1e-12);
        assert!((rep.q11.re - col(&head, r, "re_q11")).abs() <= 1e-12);
        assert!((rep.q11.im - col(&head, r, "im_q11")).abs() <= 1e-12);
    }
    // locus
    let o = run(&["locus", "--a", "0.4", "--b", "0", "--samples", "50"]);
    let pr = EllipsoidParams::new(0.4, 0.0).unwrap();
    let (head, rows) = records(&stdout(&o));
    for r in &rows {
        let p = point(&head, r);
        assert!((pr.rho(&p) - col(&head, r, "rho")).abs() <= 1e-12);
        let q = invariants_at(&pr.poly(), &p).unwrap().q11.norm();
        assert!((q - col(&head, r, "abs_q11")).abs() <= 1e-12);
    }
}

#[test]
fn verify_single_suite() {
    let o = run(&["verify", "--suite", "lemma34"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("lemma34"));
    assert!(!out.contains("mainardi"));
    let o = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_injected_fault_fails_by_name() {
    let o = run(&["verify", "--suite", "mainardi", "--suite", "lj", "--inject-fault", "mainardi"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("mainardi")).unwrap();
    assert!(line.contains("FAIL"));
    let line = out.lines().find(|l| l.starts_with("lj")).unwrap();
    assert!(line.contains("pass"));
}

#[test]
fn verify_default_run_passes() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all suites passed"));
}
