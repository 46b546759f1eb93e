mod common;

use std::process::{Command, Output};

use dulac::cli::{parse_grid, VectorFieldSpec};
use dulac::dulac::DulacSeriesJson;
use dulac::oracle::ValidationReport;

use common::data;

fn dulac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dulac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn resonance_listing() {
    let o = dulac(&[
        "resonances",
        "--alpha",
        "2/3",
        "--beta",
        "1/2",
        "--max-degree",
        "6",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("Case 1"));
    assert!(
        s.lines()
            .any(|l| l.starts_with("y:") && l.contains("x^2*y^4")),
        "{s}"
    );

    let o = dulac(&[
        "resonances",
        "--alpha",
        "2/3",
        "--beta",
        "1/2",
        "--max-degree",
        "1",
    ]);
    assert!(stdout(&o).contains("no resonant monomials"));

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = dulac(&[
        "resonances",
        "--alpha",
        "1",
        "--beta",
        "1/2",
        "--max-degree",
        "4",
        "--json",
        json.to_str().unwrap(),
    ]);
    let s = stdout(&o);
    assert!(s.starts_with("Case 2") && s.contains("m = 2"), "{s}");
    assert!(s.lines().any(|l| l.starts_with("y:") && l.contains("z^2")));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(r["m"], 2);
    assert!(r["monomials"]["y"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!([0, 0, 2])));
    assert!(r["families"]["n1"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!([-1, 0])));
}

#[test]
fn bad_rational_is_an_error() {
    let o = dulac(&["resonances", "--alpha", "2/x", "--beta", "1/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error"));
}

#[test]
fn normalize_reports() {
    let o = dulac(&["normalize", "--input", &path("linear.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 terms removed"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nf.json");
    let o = dulac(&[
        "normalize",
        "--input",
        &path("case1_xz.json"),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(
        stdout(&o).contains("1 term removed at degree 1"),
        "{}",
        stdout(&o)
    );
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let nf: VectorFieldSpec = serde_json::from_value(r["normal_form"].clone()).unwrap();
    assert!(nf.to_field().is_ok());
    assert_eq!(r["removed"][0]["exponents"], serde_json::json!([1, 0, 1]));

    let o = dulac(&["normalize", "--input", &path("case2.json")]);
    assert!(stdout(&o).contains("kept: (0,0,2) d/dy"), "{}", stdout(&o));
}

#[test]
fn dulac_printing() {
    let o = dulac(&["dulac", "--input", &path("linear.json")]);
    assert!(stdout(&o).contains("y1 ~ x0^alpha * y0"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let o = dulac(&[
        "dulac",
        "--input",
        &path("case2.json"),
        "--output",
        out.to_str().unwrap(),
    ]);
    let s = stdout(&o);
    assert!(s.contains("alpha_{-1,0} * z0^2 * omega(gamma1, x0)"), "{s}");
    assert!(s.contains("# convention: y1 carries x0^alpha"));
    let j: DulacSeriesJson = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(j.case, "case2");

    let o = dulac(&[
        "eval",
        "--series",
        out.to_str().unwrap(),
        "--x0",
        "0.01",
        "--compare",
        &path("case2.json"),
    ]);
    let s = stdout(&o);
    let y: f64 = s
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("y1 = ")
        .parse()
        .unwrap();
    assert!((y - 0.01 * (1.0 + 100f64.ln())).abs() < 1e-14);
}

#[test]
fn leading_correction_exponent_case1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nf.json");
    dulac(&[
        "normalize",
        "--input",
        &path("case1_xz.json"),
        "--output",
        out.to_str().unwrap(),
    ]);
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let nf = dir.path().join("field.json");
    std::fs::write(&nf, r["normal_form"].to_string()).unwrap();
    let o = dulac(&["dulac", "--input", nf.to_str().unwrap(), "--order", "2"]);
    // the kept x y z^2 term enters y1 as x0^alpha * x0^1 * y0 z0^2
    assert!(
        stdout(&o).contains("# leading correction exponent of y1: 1"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn dulac_refuses_non_normal_input() {
    let o = dulac(&["dulac", "--input", &path("case1_xz.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("normalize"));
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let o = dulac(&[
        "validate",
        "--input",
        &path("case2_cubic.json"),
        "--grid",
        "1e-4:1e-2:8",
        "--report",
        report.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let r: ValidationReport =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r.all_pass());
    assert!((r.checks[0].measured.unwrap() - r.checks[0].expected.unwrap()).abs() <= 0.2);
    let c = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(c.lines().next(), Some("log_x,log_error"));
    assert_eq!(c.lines().count(), 9);

    // exact series: nothing to measure, reported as a pass
    let o = dulac(&[
        "validate",
        "--input",
        &path("linear.json"),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"));

    // a check that cannot pass: an absurdly tight slope tolerance
    let o = dulac(&[
        "validate",
        "--input",
        &path("case2_cubic.json"),
        "--grid",
        "1e-4:1e-2:5",
        "--slope-tol",
        "1e-6",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r: ValidationReport =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(!r.all_pass());

    let o = dulac(&["validate", "--input", &path("case2.json"), "--grid", "0.01"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conjugacy_validation() {
    let o = dulac(&[
        "validate",
        "--input",
        &path("case1_xz.json"),
        "--conjugacy",
        "--grid",
        "1e-3:1e-1:6",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("expected 5"));
}

#[test]
fn grid_parsing() {
    assert_eq!(parse_grid("0.1,0.01").unwrap(), vec![0.1, 0.01]);
    assert_eq!(parse_grid("1e-4:1e-2:3").unwrap().len(), 3);
    assert!(parse_grid("0.1").is_err());
    assert!(parse_grid("1e-4:1e-2:1").is_err());
    assert!(parse_grid("0.5,2").is_err());
}

#[test]
fn spec_round_trip() {
    for f in [
        "case2.json",
        "case1_xz.json",
        "linear.json",
        "case2_cubic.json",
    ] {
        let s = VectorFieldSpec::from_json(&std::fs::read_to_string(data(f)).unwrap()).unwrap();
        let field = s.to_field().unwrap();
        let back = VectorFieldSpec::from_field(&field);
        let again = VectorFieldSpec::from_json(&back.to_json()).unwrap();
        assert_eq!(again, back);
        assert_eq!(again.to_field().unwrap(), field);
    }
}

#[test]
fn parse_errors_carry_position() {
    let e = VectorFieldSpec::from_json("{\n  \"eigenvalues\": 3,\n}").unwrap_err();
    let msg = e.to_string();
    assert!(msg.contains("line 2"), "{msg}");
    let bad = r#"{"eigenvalues":{"alpha":"1","beta":"1/2"},"centre_dim":1,"jet_order":1,"degree":1,
        "terms":[{"component":"w","exponents":[0,0,2],"coeff":{"(0)":"1"}}]}"#;
    let e = VectorFieldSpec::from_json(bad)
        .unwrap()
        .to_field()
        .unwrap_err();
    assert!(e.to_string().contains("term 0"));
}
