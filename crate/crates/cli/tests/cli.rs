use std::fs;
use std::process::{Command, Output};

fn motzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motzeta")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn zeta_of_a_square_writes_a_table_and_a_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.json");
    let o = motzeta(&["zeta", "--f", "x^2", "--q", "5", "--degree", "8", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("2  [2/5, 0]"), "{s}");
    assert!(s.contains("closed form (int)"), "{s}");
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["mode"], "trunc");
    assert_eq!(doc["q"], 5);
    assert_eq!(doc["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let a = motzeta(&["mzeta", "--f", "x", "--g", "y^2", "--q", "5", "--degree", "6"]);
    let b = motzeta(&["mzeta", "--f", "x", "--g", "y^2", "--q", "5", "--degree", "6"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = motzeta(&["mzeta", "--f", "x", "--g", "y^2", "--q", "5", "--degree", "6", "--format", "csv"]);
    assert!(stdout(&c).starts_with("T1,T2,coeff\n"), "{}", stdout(&c));
}

#[test]
fn syntax_errors_are_usage_errors() {
    let o = motzeta(&["zeta", "--f", "x^^2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset 2"));
    assert_eq!(motzeta(&["zeta"]).status.code(), Some(1));
    assert_eq!(motzeta(&["nonsense"]).status.code(), Some(1));
    assert_eq!(motzeta(&["--help"]).status.code(), Some(0));
}

#[test]
fn limit_of_a_closed_form_and_of_a_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z.json");
    let o = motzeta(&["zeta", "--f", "x^3", "--q", "7", "--mode", "closed", "--out", z.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = motzeta(&["limit", "--in", z.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // -lim Z_{x^3} = [mu_3], which has 3 points over F_7 and none twisted
    assert_eq!(stdout(&o), "[-3, 0, 0]\n");
    let p = dir.path().join("p.json");
    fs::write(
        &p,
        r#"{"vars": ["T"], "mode": "closed", "strands": [{"coeff": "[1]", "b": [3], "factors": []}]}"#,
    )
    .unwrap();
    let o = motzeta(&["limit", "--in", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not limit-normal"));
}

#[test]
fn dl_eval_of_one_stratum() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("res.json");
    fs::write(&r, r#"{"strata": [{"I": [1], "atom": "mu_2", "order": 2, "N": [[2]], "nu": [1]}]}"#).unwrap();
    let o = motzeta(&["dl-eval", "--in", r.to_str().unwrap(), "--q", "5", "--mode", "trunc", "--degree", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let coeffs: Vec<&str> = doc["entries"].as_array().unwrap().iter().map(|e| e["coeff"].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["[2/5, 0]", "[2/25, 0]"]);
}

#[test]
fn reflexion_passes_and_reports() {
    let o = motzeta(&["reflexion", "--f", "x^2", "--g", "y^3", "--q", "13", "--degree", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["id"], "reflexion-uni");
    assert!(doc["entries"].as_array().unwrap().iter().all(|e| e["equal"] == true));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("PASS reflexion-uni"));
}

#[test]
fn failing_checks_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cases = dir.path().join("cases.json");
    fs::write(&cases, r#"[{"id": "phi-auto", "families": [["x^2", "y^3"]], "q": [13], "degree": 6}]"#).unwrap();
    let out = dir.path().join("r.csv");
    let o = motzeta(&["suite", "--in", cases.to_str().unwrap(), "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("id,case,realization,q,entries,failed,status\n"), "{csv}");
    assert!(csv.contains(",fail\n"));
    assert!(stdout(&o).starts_with("FAIL phi-auto"));
}

#[test]
fn thom_sebastiani_for_squares() {
    let o = motzeta(&["thomseb", "--f", "x^2", "--g", "y^2", "--q", "13", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("exponent,label,lhs,rhs,equal\n"));
    let o = motzeta(&["thomseb", "--f", "x", "--g", "y", "--symbolic"]);
    assert_eq!(o.status.code(), Some(0));
    let o = motzeta(&["thomseb", "--f", "x^2", "--g", "y", "--symbolic"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn budget_exhaustion_exits_with_two() {
    let o = motzeta(&["zeta", "--f", "x^2 + y^2 + x*y", "--q", "13", "--degree", "6", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}
