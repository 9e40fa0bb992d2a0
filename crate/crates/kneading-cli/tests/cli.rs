use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneading")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

fn plastic() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..100 {
        let m = 0.5 * (lo + hi);
        if m * m * m - m - 1.0 < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn code_full_shift() {
    let (code, v) = json(&["code", "--alpha", "0", "--beta", "2", "--len", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["u"]["string"], "(0)");
    assert_eq!(v["v"]["string"], "(1)");
    assert_eq!(v["u"]["status"], "exact");
    assert_eq!(v["v"]["prefix"], "11111111");
}

#[test]
fn code_golden() {
    let (_, v) = json(&["code", "--alpha", "0", "--beta", "golden", "--len", "8"]);
    assert_eq!(v["v"]["string"], "(10)");
    assert_eq!(v["v"]["status"], "exact");
}

#[test]
fn code_plastic_exact_and_decimal() {
    let (_, v) = json(&["code", "--alpha", "1/(1+plastic)", "--beta", "plastic", "--len", "12"]);
    assert_eq!((v["u"]["string"].as_str(), v["v"]["string"].as_str()), (Some("(01)"), Some("(110)")));
    assert_eq!(v["u"]["status"], "exact");

    let (_, v) = json(&["code", "--alpha", "0.43015970905", "--beta", "1.32471795724", "--len", "12"]);
    assert_eq!(v["u"]["prefix"], "010101010101");
    assert_eq!(v["v"]["prefix"], "110110110110");
}

#[test]
fn code_bad_params() {
    let o = run(&["code", "--alpha", "0.5", "--beta", "0.2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["code", "--alpha", "pi", "--beta", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pi"));
}

#[test]
fn entropy_plastic_pair() {
    let (code, v) = json(&["entropy", "--u", "(01)", "--v", "(110)"]);
    assert_eq!(code, 0);
    let b = plastic();
    assert!((v["beta_bar"].as_f64().unwrap() - b).abs() < 1e-9);
    assert!((v["alpha_bar"].as_f64().unwrap() - 1.0 / (1.0 + b)).abs() < 1e-9);
    assert!((v["entropy_log2"].as_f64().unwrap() - b.log2()).abs() < 1e-9);
    assert!(v["trace"].as_array().unwrap().len() > 1);
}

#[test]
fn entropy_full_shift_text() {
    let o = run(&["entropy", "--u", "(0)", "--v", "(1)"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("entropy_log2 = 1.000000000000"));
}

#[test]
fn entropy_reversed_pair_is_zero() {
    let (code, v) = json(&["entropy", "--u", "(01)", "--v", "(10)"]);
    assert_eq!(code, 0);
    assert_eq!(v["entropy_log2"], 0.0);
    assert_eq!(v["flags"]["k2_reversed"], true);
}

#[test]
fn entropy_condition_violation() {
    let o = run(&["entropy", "--u", "(10)", "--v", "(110)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("u₀ = 0 fails"));
}

#[test]
fn graph_dot_and_json() {
    let o = run(&["graph", "--u", "(0)", "--v", "(10)", "--mode", "collapse", "--format", "dot"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("label=\"[").count(), 2);

    let o = run(&["graph", "--u", "(0)", "--v", "(1)", "--mode", "truncate", "--K", "4"]);
    assert!(stdout(&o).contains("[4,0]"));
    assert!(!stdout(&o).contains("[5,0]"));

    let o = run(&["graph", "--u", "(01)", "--v", "(110)", "--mode", "collapse", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert!((v["entropy_log2"].as_f64().unwrap() - plastic().log2()).abs() < 1e-9);
}

#[test]
fn graph_to_file() {
    let dir = std::env::temp_dir().join(format!("kneading-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.dot");
    let o = run(&["graph", "--u", "(0)", "--v", "(10)", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("digraph"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn invert_verdicts_and_exit_codes() {
    let (code, v) = json(&["invert", "--u", "(01)", "--v", "(110)"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("matched")));
    assert!((v["beta_bar"].as_f64().unwrap() - plastic()).abs() < 1e-9);
    assert!((v["alpha_bar"].as_f64().unwrap() - 0.4301597090019468).abs() < 1e-9);

    let (code, v) = json(&["invert", "--u", "(0)", "--v", "(1)"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("matched")));
    assert_eq!(v["beta_bar"], 2.0);

    let (code, v) = json(&["invert", "--u", "(00110111)", "--v", "(11100110)"]);
    assert_eq!((code, v["verdict"].as_str()), (3, Some("not_representable")));
    assert_eq!(v["case"], "t41_case3");
}

#[test]
fn check_reports() {
    let o = run(&["check", "--u", "(01)", "--v", "(110)"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("strict inequalities hold"));

    let (code, v) = json(&["check", "--u", "(0)", "--v", "(1)"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["weak"], true);

    let (code, v) = json(&["check", "--u", "(01)", "--v", "(10)"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["strict"], false);

    let o = run(&["check", "--u", "(10)", "--v", "(110)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("u₀ = 0 fails"));
}

#[test]
fn config_validation() {
    let o = run(&["--precision", "32", "check", "--u", "(0)", "--v", "(1)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision_bits"));
    let o = run(&["--tol", "0", "entropy", "--u", "(0)", "--v", "(1)"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--max-iter", "0", "entropy", "--u", "(0)", "--v", "(1)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    let a = run(&["--json", "entropy", "--u", "(001)", "--v", "(1101)"]);
    let b = run(&["--json", "entropy", "--u", "(001)", "--v", "(1101)"]);
    assert_eq!(a.stdout, b.stdout);
}
