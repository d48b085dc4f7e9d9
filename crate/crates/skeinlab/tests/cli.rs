use std::path::{Path, PathBuf};

use serde_json::Value;
use skeinlab::cli::run;
use skeinlab::diagram::Diagram;
use skeinlab::RationalFunc;

fn fixture(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel).display().to_string()
}

fn skeinlab(args: &[&str]) -> (i32, String) {
    run(std::iter::once("skeinlab").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let (code, out) = skeinlab(&a);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{out}: {e}")))
}

fn diagram_files() -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut out = Vec::new();
    for sub in ["", "genus", "s3", "cores", "tait", "z2", "homotopy"] {
        for e in std::fs::read_dir(root.join(sub)).unwrap().flatten() {
            if e.path().extension().is_some_and(|x| x == "json") {
                out.push(e.path());
            }
        }
    }
    out.sort();
    out
}

#[test]
fn bracket_of_table_entry() {
    let (code, out) = skeinlab(&["bracket", &fixture("3_1.json")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("-A^5 - A^-3 + A^-7"));
    let report: Value = serde_json::from_str(out.lines().nth(1).unwrap()).unwrap();
    for k in ["breadth", "ord_i", "alternating", "adequate", "z2_class", "inputs_digest"] {
        assert!(report.get(k).is_some(), "missing {k}");
    }
    assert_eq!(report["breadth"], 12);
    assert_eq!(report["diff"], Value::Null);
}

#[test]
fn lens_of_s1_x_s2() {
    let (code, out) = skeinlab(&["lens", "--r", "5", "--n", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("1+0i"));
    let (_, v) = json(&["lens", "--r", "6", "--n", "-1"]);
    assert!((v["norm_sqr"].as_f64().unwrap() - (1.0f64 / 3.0) * (std::f64::consts::PI / 6.0).sin().powi(2)).abs() < 1e-12);
}

#[test]
fn reproduce_table_reports_each_entry() {
    let (code, v) = json(&["reproduce-table", "--fixtures", &fixture("")]);
    let entries = v["entries"].as_array().unwrap();
    assert!(entries.len() >= 20);
    let diffs: Vec<&str> = entries.iter().filter(|e| !e["diff"].is_null()).map(|e| e["fixture"].as_str().unwrap()).collect();
    assert_eq!(diffs, ["3_2.json", "3_3.json"]);
    assert_eq!(code, 1);
}

#[test]
fn emitted_polynomials_reparse() {
    for f in diagram_files() {
        let p = f.display().to_string();
        let (code, v) = json(&["bracket", &p]);
        assert!(code == 0 || code == 1, "{p}: {code}");
        let text = v["bracket"].as_str().unwrap();
        let parsed: RationalFunc = text.parse().unwrap();
        let d = Diagram::from_json_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
        assert_eq!(parsed, d.bracket().unwrap(), "{p}");
        assert_eq!(parsed.to_string(), text);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(skeinlab(&["frobnicate"]).0, 1);
    assert_eq!(skeinlab(&["--help"]).0, 0);
    let dir = std::env::temp_dir().join(format!("skeinlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(skeinlab(&["bracket", &bad.display().to_string()]).0, 1);
    assert_eq!(skeinlab(&["bracket", &dir.join("missing.json").display().to_string()]).0, 1);
    let (code, v) = json(&["--state-cap", "2", "bracket", &fixture("3_1.json")]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("state cap"));
    assert_eq!(skeinlab(&["bracket", &fixture("3_2.json")]).0, 1);
    assert_eq!(skeinlab(&["t3-reduce", "2", "4", "6"]).0, 1);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn deterministic_reports() {
    let a = skeinlab(&["--json", "tait", &fixture("tait/trefoil_g0.json")]);
    let b = skeinlab(&["--json", "--jobs", "2", "tait", &fixture("tait/trefoil_g0.json")]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["breadth"], v["expected"]);
}

#[test]
fn diagram_queries() {
    let (_, v) = json(&["ord-i", &fixture("genus/ribbon_obstruction_g3.json")]);
    assert_eq!(v["ord_i"], -2);
    assert_eq!(v["exit_code"], 0);
    let (_, v) = json(&["z2", &fixture("z2/braid3_1_2.json")]);
    assert_eq!(v["z2_trivial"], false);
    let (_, v) = json(&["z2", &fixture("2_1.json")]);
    assert_eq!(v["z2_trivial"], true);
}

#[test]
fn shadow_commands() {
    let (code, v) = json(&["shadow-eval", &fixture("shadows/holed_disk_2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "1");
    let (_, v) = json(&["shadow-sig", &fixture("shadows/sphere_gleam_m2.json")]);
    assert_eq!(v["signature"], -1);
    let (_, v) = json(&["rtw", "--r", "5", &fixture("shadows/sphere_gleam_1.json")]);
    let eta = (2.0f64 / 5.0).sqrt() * (std::f64::consts::PI / 5.0).sin();
    assert!((v["re"].as_f64().unwrap() - eta).abs() < 1e-9);
    assert!(v["im"].as_f64().unwrap().abs() < 1e-9);
    let (_, v) = json(&["tv", "--r", "5", &fixture("polyhedra/s2.json")]);
    assert!((v["re"].as_f64().unwrap() - eta * eta).abs() < 1e-9);
}

#[test]
fn algebra_commands() {
    let (code, out) = skeinlab(&["t2-mul", "1", "0", "0", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("(A^-1)*(1,-1)_T + (A)*(1,1)_T"));
    let (_, v) = json(&["t3-reduce", "3", "-2", "5"]);
    assert_eq!(v["generator"], "[1,0,1]");
    let (_, v) = json(&["tangle", &fixture("tangles/crossing.json")]);
    assert_eq!((v["a"].as_str(), v["b"].as_str(), v["conway"].as_str()), (Some("A"), Some("A^-1"), Some("-1")));
    let (_, v) = json(&["tangle", &fixture("tangles/infinity.json")]);
    assert_eq!(v["conway"], "\u{221e}");
    assert_eq!(json(&["montesinos", "--e", "1", "--fractions", "1/2,1/3"]).1["obstruction"], true);
    assert_eq!(json(&["montesinos", "--e", "0", "--fractions", "1/2,-1/2"]).1["obstruction"], false);
    assert_eq!(json(&["montesinos", "--e", "0", "--fractions", ""]).1["obstruction"], false);
}
