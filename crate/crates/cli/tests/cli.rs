use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use blaschke_core::{BlaschkeProduct, Complex, ModelMap};
use serde_json::Value;
use tempfile::TempDir;

const TWO_CYCLE: &str = r#"{"vertices":[{"id":"a","weight":1,"image":"b"},{"id":"b","weight":1,"image":"a"}]}"#;
const ONE_VERTEX_W2: &str = r#"{"vertices":[{"id":"v","weight":2,"image":"v"}]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blaschke")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_out(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn schema_groups_two_cycle() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "two.json", TWO_CYCLE);
    let v = json_out(&run(&["schema", "groups", s(&f)]));
    assert_eq!(v, serde_json::json!({"aut": 2, "n": 3, "g": 6, "n0": 1, "g_bar": 6}));
}

#[test]
fn center_map_is_cube() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "w2.json", ONE_VERTEX_W2);
    let o = run(&["model", "center", "--schema", s(&f)]);
    let m: ModelMap = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(m.factor(0), &BlaschkeProduct::power(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("# seed 0"));
}

#[test]
fn seeded_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "two.json", TWO_CYCLE);
    let a = run(&["model", "sample", "--schema", s(&f), "--seed", "7"]);
    let b = run(&["model", "sample", "--schema", s(&f), "--seed", "7"]);
    let c = run(&["model", "sample", "--schema", s(&f), "--seed", "8"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let r1 = run(&["verify", "action", "--weight", "2", "--trials", "4", "--seed", "3"]);
    let r2 = run(&["verify", "action", "--weight", "2", "--trials", "4", "--seed", "3"]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn verify_reports_and_exit_codes() {
    let o = run(&["verify", "fixed-points", "--degree", "3", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# seed 0\n"));
    assert!(text.contains("PASS  maps with d-1 distinct boundary fixed points: 20 = 20"));

    // an impossible residual bound turns the same run into a failure
    let o = run(&["verify", "fixed-points", "--degree", "3", "--trials", "5", "--tol", "eval=1e-300"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));

    let o = run(&["verify", "barycenter", "--trials", "5", "--format", "json"]);
    let v = json_out(&o);
    assert_eq!(v[0]["suite"], "barycenter");
    assert_eq!(v[0]["passed"], true);
}

#[test]
fn usage_and_domain_errors_exit_one() {
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["schema"]).status.code(), Some(1));
    assert_eq!(run(&["--tol", "bogus=1", "schema", "enumerate", "--weight", "1"]).status.code(), Some(1));
    assert_eq!(run(&["schema", "enumerate", "--weight", "9"]).status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"vertices":[{"id":"a","weight":0,"image":"a"}]}"#);
    let o = run(&["schema", "validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn validate_rejects_non_member() {
    let dir = TempDir::new().unwrap();
    // z² · μ_{1/2} fixes 1 and 0 but has degree 3 on a weight-1 vertex
    let body = r#"{"schema":{"vertices":[{"id":"v","weight":1,"image":"v"}]},
                   "factors":{"v":{"c":[1,0],"zeros":[[0,0],[0,0],[0.5,0]]}}}"#;
    let f = write(&dir, "m.json", body);
    let o = run(&["model", "validate", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out_allow_fail(&o)["member"], false);
}

fn json_out_allow_fail(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn act_then_equivalent() {
    let dir = TempDir::new().unwrap();
    let schema = write(&dir, "two.json", TWO_CYCLE);
    let m = run(&["model", "sample", "--schema", s(&schema), "--seed", "4", "--out", s(&dir.path().join("m.json"))]);
    assert!(m.status.success());
    let m_path = dir.path().join("m.json");
    let acted = run(&["model", "act", s(&m_path), "--element", "4"]);
    let acted_path = write(&dir, "acted.json", std::str::from_utf8(&acted.stdout).unwrap());
    let v = json_out(&run(&["model", "equivalent", s(&m_path), s(&acted_path)]));
    assert_eq!(v["equivalent"], true);
    assert_eq!(run(&["model", "act", s(&m_path), "--element", "6"]).status.code(), Some(1));

    let orbit = json_out(&run(&["model", "orbit", s(&m_path)]));
    assert_eq!(orbit.as_array().unwrap().len(), 6);
}

#[test]
fn circle_table_csv() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", r#"{"c":[1,0],"zeros":[[0,0],[0.5,0]]}"#);
    let out = dir.path().join("t.csv");
    let o = run(&["circle", "table", "--degree-map", s(&f), "--depth", "5", "--out", s(&out)]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("angle,re,im,t_numerator,t_denominator"));
    assert_eq!(lines.count(), 32);

    let m = json_out(&run(&["circle", "measure", "--degree-map", s(&f), "--arc", "0,3.141592653589793", "--depth", "8"]));
    assert_eq!(m["total"], 256);
    assert_eq!(run(&["blaschke", "critical", s(&f), "--format", "csv"]).status.code(), Some(1));
}

#[test]
fn blaschke_commands() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", r#"{"c":[1,0],"zeros":[[0,0],[0.5,0]]}"#);
    let v: Vec<Complex> = serde_json::from_value(json_out(&run(&["blaschke", "eval", s(&f), "--at", "-1,0"]))).unwrap();
    assert!((v[0] - Complex::new(1.0, 0.0)).norm() < 1e-12);
    let fp = json_out(&run(&["blaschke", "fixed-points", s(&f)]));
    assert_eq!(fp["boundary"].as_array().unwrap().len(), 1);
    assert_eq!(json_out(&run(&["blaschke", "normalize-cc", s(&f)])).as_array().unwrap().len(), 2);
    let pts = write(&dir, "p.json", "[[0.5,0],[-0.5,0]]");
    let b = json_out(&run(&["blaschke", "barycenter", s(&pts)]));
    assert!(b["point"][0].as_f64().unwrap().abs() < 1e-12);
    let monic = json_out(&run(&["util", "sym", "to-monic", s(&pts)]));
    assert_eq!(monic, serde_json::json!([[0.0, 0.0], [-0.25, 0.0]]));
}

#[test]
fn basin_straighten_first() {
    let dir = TempDir::new().unwrap();
    let body = r#"{"components":[{"label":"a","image":"a"}],"factors":{"a":{"c":[-1,0],"zeros":[[0,0],[0,0]]}}}"#;
    let f = write(&dir, "b.json", body);
    let schema = json_out(&run(&["basin", "derive-schema", s(&f)]));
    assert_eq!(schema["vertices"][0]["weight"], 1);
    let st = json_out(&run(&["basin", "straighten", s(&f), "--first"]));
    let m: ModelMap = serde_json::from_value(st["model"].clone()).unwrap();
    assert!(m.factor(0).distance(&BlaschkeProduct::power(2)) < 1e-12);
}
