use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn chen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chen")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = chen(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

#[test]
fn sphere_reports() {
    let (code, v) = json(&["sphere", "--n", "2", "--len", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["ranks"], serde_json::json!([1, 1, 1, 1, 1]));
    let (_, v) = json(&["sphere", "--n", "3", "--len", "3"]);
    let powers = v["report"]["powers"].as_array().unwrap();
    assert!(powers.iter().any(|p| p["m"] == 3 && p["coefficient"] == "6"));
    let (_, v) = json(&["sphere", "--n", "2", "--len", "2"]);
    let products = v["report"]["products"].as_array().unwrap();
    assert!(products.iter().any(|p| p["a"] == 1 && p["b"] == 1 && p["coefficient"] == "0"));
}

#[test]
fn special_values() {
    let (code, v) = json(&["polylog", "--k", "2", "--x", "0.5", "--method", "both"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["values"].as_array().unwrap().len(), 2);
    assert!(v["report"]["difference"].as_f64().unwrap() < 1e-8);
    let (code, v) = json(&["mzv", "--k", "2"]);
    assert_eq!(code, 0);
    assert!((v["report"]["value"].as_f64().unwrap() - 1.6449340668482264).abs() < 1e-12);
    let (code, v) = json(&["mpl11", "--x", "0.3", "--y", "0.4"]);
    assert_eq!(code, 0);
    assert!(v["report"]["difference"].as_f64().unwrap() < 1e-6);
}

#[test]
fn cobar_dimensions() {
    for (name, s, dim) in [("torus", "3", 6), ("wedge2", "3", 7), ("circle", "4", 4)] {
        let (code, v) = json(&["cobar", "--fixture", name, "--s", s]);
        assert_eq!(code, 0);
        assert_eq!(v["report"]["h0"]["dimension"], dim);
        assert_eq!(v["report"]["oracle"]["dimension"], dim);
    }
    let dir = fixtures();
    let (code, _) = json(&["cobar", "--fixture", "torus", "--s", "2", "--fixture-dir", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn verify_suites() {
    let (code, v) = json(&["verify", "--suite", "hopf", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    let (code, v) = json(&["verify", "--suite", "currents", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["checks"][0]["cases"], 200);
    let (code, _) = json(&["verify", "--suite", "exactness"]);
    assert_eq!(code, 0);
}

#[test]
fn exact_arithmetic_is_seed_independent() {
    let a = chen(&["exact-seq", "--model", "s2xs2", "--seed", "1"]);
    let b = chen(&["exact-seq", "--model", "s2xs2", "--seed", "99"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = chen(&["verify", "--suite", "hopf", "--seed", "5"]);
    let b = chen(&["verify", "--suite", "hopf", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tsv_and_config() {
    let out = chen(&["bar", "--model", "torus:1", "--len", "2", "--deg", "2", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("s\tH^0\tH^1\tH^2\n"));
    assert!(text.trim_end().ends_with("pass\ttrue"));

    let cfg = std::env::temp_dir().join(format!("chen-config-{}.toml", std::process::id()));
    std::fs::write(&cfg, "format = \"tsv\"\nlen = 2\ndeg = 2\n").unwrap();
    let out = chen(&["bar", "--model", "torus:1", "--config", cfg.to_str().unwrap()]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("s\tH^0\tH^1\tH^2\n"));
    // flags win over the file
    let out = chen(&["bar", "--model", "torus:1", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["length_cap"], 2);
    std::fs::write(&cfg, "colour = 1\n").unwrap();
    assert_eq!(chen(&["mzv", "--k", "2", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(chen(&["cobar", "--fixture", "nope", "--s", "2"]).status.code(), Some(2));
    assert_eq!(chen(&["polylog", "--k", "2", "--x", "1.5"]).status.code(), Some(2));
    assert_eq!(chen(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(chen(&["mzv", "--k", "2", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(chen(&["sphere"]).status.code(), Some(2));
    // a remainder bound above the requested tolerance is an invariant failure
    assert_eq!(chen(&["mzv", "--k", "2", "--tol", "1e-30"]).status.code(), Some(1));
}
