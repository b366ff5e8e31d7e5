use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_hypercov");

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn multivar_fixture(name: &str) -> String {
    format!("{}/../core/tests/fixtures/multivar/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_example_row() {
    let o = run(&["eval", "--d", "3", "--a", "1", "--alpha", "2", "--beta", "2.5", "--gamma", "4", "--r", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "r,cov\n0.5,0.3125\n");
}

#[test]
fn eval_grid_is_inclusive() {
    let o = run(&["eval", "--d", "1", "--alpha", "1", "--beta", "1.5", "--gamma", "2", "--r", "0:1:5"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, ["0.0,1.0", "0.25,0.75", "0.5,0.5", "0.75,0.25", "1.0,0.0"]);
}

#[test]
fn check_params_failure_names_conditions() {
    let o = run(&["check-params", "--d", "3", "--alpha", "2", "--beta", "2.1", "--gamma", "2.1"]);
    assert_eq!(o.status.code(), Some(2));
    let diag: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(diag["error"], "param_space");
    assert!(diag["failures"].as_array().unwrap().iter().any(|f| f == "2(beta+gamma) >= 6alpha+1"));
}

#[test]
fn make_askey_emits_parameters() {
    let o = run(&["make", "askey", "--d", "2", "--ell", "2", "--a", "1", "--emit-params", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["alpha"].as_f64(), v["beta"].as_f64(), v["gamma"].as_f64()), (Some(1.5), Some(2.5), Some(3.0)));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["simulate", "--points", &fixture("points2d.txt"), "--d", "2", "--alpha", "1.5", "--beta", "2.5",
        "--gamma", "3", "--n-real", "3", "--seed", "11"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = run(&[&args[..args.len() - 1], &["12"]].concat());
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["eval", "--d", "1"]).status.code(), Some(64));
    assert_eq!(run(&["eval", "--d", "1", "--alpha", "1", "--beta", "2", "--gamma", "2", "--r", "0:1"]).status.code(), Some(64));
}

#[test]
fn malformed_inputs_exit_65() {
    let o = run(&["check-multivar", "--model", &fixture("asymmetric.json")]);
    assert_eq!(o.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(0, 1)"));
    let o = run(&["gram", "--points", &fixture("ragged.txt"), "--alpha", "1", "--beta", "1.5", "--gamma", "2"]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn check_multivar_accepts_fixture() {
    let o = run(&["check-multivar", "--model", &multivar_fixture("c1_trivariate.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["satisfied"], true);
    assert_eq!(v["condition_set"], "C1");
}

#[test]
fn check_multivar_override_can_fail() {
    let o = run(&["check-multivar", "--model", &multivar_fixture("c1_trivariate.json"), "--condition-set", "C2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gram_summaries() {
    let o = run(&["gram", "--points", &fixture("points2d.txt"), "--alpha", "1.5", "--beta", "2.5", "--gamma", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 8);
    assert_eq!(v["psd"], true);
    let o = run(&["gram", "--points", &fixture("points2d.txt"), "--model", &multivar_fixture("c1_trivariate.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n,24"));
}

#[test]
fn converge_table_has_one_row_per_step() {
    let o = run(&["converge", "--family", "erfc", "--steps", "3", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("m,a,alpha,beta,gamma,sup_error"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn montee_and_smoothness() {
    let o = run(&["montee", "--d", "3", "--alpha", "2", "--beta", "2.5", "--gamma", "4", "--k", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 1);
    let o = run(&["descente", "--d", "3", "--alpha", "2", "--beta", "2.5", "--gamma", "4", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["smoothness", "--d", "3", "--alpha", "2", "--beta", "2.5", "--gamma", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["k_origin"], 0);
}

#[test]
fn bivariate_document_round_trips_through_check() {
    let o = run(&["make", "bivariate", "--variant", "II", "--d", "1", "--shape1", "1", "--shape2", "1.3", "--common", "2.2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rho_max = v["spec"]["rho_max"].as_f64().unwrap();
    assert!(rho_max > 0.0 && rho_max <= 1.0);
    assert_eq!(v["model"]["rho"][0][1].as_f64(), Some(rho_max));
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
