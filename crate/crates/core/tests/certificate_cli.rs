//! Certificates through the library and through the installed binary.

use std::path::Path;
use std::process::{Command, Output};

use gapcert::certificate::{certify, certify_with, CertifyOptions, GammaMode, GapCertificate, SCHEMA};
use gapcert::mps::epsilon_bound;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapcert")).args(args).env_remove("GAPCERT_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gap_is_the_stated_combination() {
    for n in 3..=20 {
        let c = certify(n, GammaMode::Supplied(0.2966)).unwrap();
        let want = 0.5 * 0.2966 * (1.0 - 3.0 * c.eps_bound);
        assert!(c.valid, "n = {n}: {:?}", c.invalid_reason);
        assert!((c.gap_lower_bound - want).abs() < 1e-12);
        assert!((c.eps_bound - epsilon_bound(n).unwrap().eps).abs() < 1e-15);
    }
}

#[test]
fn numeric_and_closed_form_suites_agree() {
    // n = 12 uses transfer-operator numerics, n = 13 closed forms; both
    // should follow a(n) = 3^-n.
    for n in [12, 13] {
        let c = certify(n, GammaMode::Supplied(0.3)).unwrap();
        assert!((c.a_n - 3f64.powi(-(n as i32))).abs() < 1e-14, "n = {n}");
    }
}

#[test]
fn small_n_is_invalid_with_a_reason() {
    for n in [1, 2] {
        let c = certify(n, GammaMode::Compute).unwrap();
        assert!(!c.valid);
        assert!(!c.invalid_reason.as_deref().unwrap_or("").is_empty());
        assert_eq!(c.gap_lower_bound, 0.0);
        assert_eq!(c.gamma_y_kernel_dim, 8);
        assert!(c.gamma_y > 0.0);
    }
}

#[test]
fn certificate_round_trips_through_serde() {
    let c = certify(4, GammaMode::Supplied(0.2966)).unwrap();
    let back: GapCertificate = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(back.eps_bound.to_bits(), c.eps_bound.to_bits());
    assert_eq!(back.gap_lower_bound.to_bits(), c.gap_lower_bound.to_bits());
    assert_eq!(back.provenance, c.provenance);
    assert_eq!(back.to_json(), c.to_json());
}

#[test]
fn json_report_has_the_schema_keys() {
    let c = certify(3, GammaMode::Supplied(0.2966)).unwrap();
    let v: Value = serde_json::from_str(&c.to_json()).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    for key in ["n", "a_n", "b_n", "A_n", "eps_bound", "gamma_Y", "gamma_Y_source", "gap_lower_bound", "valid", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["gamma_Y_source"], "user-supplied");
    assert!((v["gap_lower_bound"].as_f64().unwrap() - 0.0289425386086).abs() < 1e-12);
}

#[test]
fn text_report_states_the_epsilon_condition() {
    let c = certify(3, GammaMode::Supplied(0.2966)).unwrap();
    let t = c.to_text();
    assert!(t.contains("epsilon < 1/3"));
    assert!(t.contains("status: VALID"));
    let bad = certify(1, GammaMode::Supplied(0.2966)).unwrap().to_text();
    assert!(bad.contains("status: INVALID"));
}

#[test]
fn exact_epsilon_is_attached_when_requested() {
    let opts = CertifyOptions { exact_epsilon: true, ..CertifyOptions::default() };
    let c = certify_with(1, GammaMode::Supplied(0.3), &opts).unwrap();
    assert!((c.eps_exact.unwrap() - 0.478).abs() < 2e-3);
    assert_eq!(c.eps_exact_method.as_deref(), Some("principal-angles/dense-svd"));
}

#[test]
fn bad_input_is_rejected() {
    assert!(certify(0, GammaMode::Supplied(0.3)).is_err());
    assert!(certify(3, GammaMode::Supplied(f64::NAN)).is_err());
    let c = certify(3, GammaMode::Supplied(-0.1)).unwrap();
    assert!(!c.valid);
}

#[test]
fn binary_exit_codes() {
    assert_eq!(bin(&["certify", "--n", "3", "--gamma", "0.2966"]).status.code(), Some(0));
    assert_eq!(bin(&["certify", "--n", "1", "--gamma", "0.2966"]).status.code(), Some(2));
    assert_eq!(bin(&["certify", "--n", "0", "--gamma", "0.2966"]).status.code(), Some(1));
    assert_eq!(bin(&["certify", "--bogus"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    assert_eq!(bin(&["epsilon", "--n", "3", "--exact"]).status.code(), Some(1));
}

#[test]
fn binary_output_is_deterministic() {
    let args = ["certify", "--n", "3..5", "--gamma", "0.2966", "--format", "json"];
    let (a, b) = (bin(&args), bin(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let ns: Vec<u64> = v.as_array().unwrap().iter().map(|c| c["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![3, 4, 5]);
}

#[test]
fn seed_flag_and_environment() {
    let json = |o: Output| -> Value { serde_json::from_slice(&o.stdout).unwrap() };
    let base = ["certify", "--n", "3", "--gamma", "0.3", "--format", "json"];
    let env = Command::new(env!("CARGO_BIN_EXE_gapcert")).args(base).env("GAPCERT_SEED", "99").output().unwrap();
    assert_eq!(json(env)["seed"], 99);
    let flag = Command::new(env!("CARGO_BIN_EXE_gapcert"))
        .args(["--seed", "5"])
        .args(base)
        .env("GAPCERT_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(flag)["seed"], 5);
    let junk = Command::new(env!("CARGO_BIN_EXE_gapcert")).args(base).env("GAPCERT_SEED", "nope").output().unwrap();
    assert_eq!(junk.status.code(), Some(1));
}

fn entries(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn out_file_is_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    let o = bin(&["certify", "--n", "3", "--gamma", "0.2966", "--format", "json", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(entries(dir.path()), vec!["cert.json".to_string()]);
    // A failed run leaves an existing file untouched.
    let before = std::fs::read(&path).unwrap();
    let o = bin(&["certify", "--n", "0", "--gamma", "0.2966", "--out", p]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(std::fs::read(&path).unwrap(), before);
}

#[test]
fn other_subcommands_run() {
    let t = bin(&["transfer-report", "--n", "2"]);
    assert_eq!(t.status.code(), Some(0));
    assert!(stdout(&t).contains("primitive"));
    let f = bin(&["fnw-check", "--dim", "4..6", "--trials", "40"]);
    assert_eq!(f.status.code(), Some(0));
    assert!(stdout(&f).contains("PASS"));
    let g = bin(&["gamma-y", "--n", "1"]);
    assert!(stdout(&g).contains("gamma_Y = 0.283484861"));
    let e = bin(&["epsilon", "--n", "1", "--exact"]);
    assert!(stdout(&e).contains("epsilon_exact = 0.4778328"));
}
