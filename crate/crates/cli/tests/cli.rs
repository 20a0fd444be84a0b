use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn skewlab(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewlab"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn setup(config: &str) -> (tempfile::TempDir, PathBuf, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("config.json");
    std::fs::write(&cfg, config).unwrap();
    let out = tmp.path().join("out");
    (tmp, cfg, out)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const T3: &str = r#"{
  "schema": 1, "alpha": "golden", "eps": 0.0625, "L": 2, "count": 50,
  "system": { "kind": "lemma31-T", "k": 3, "j": 1 },
  "verify": { "coboundary": true, "conjugacy": true }
}"#;

#[test]
fn fresh_build_verifies() {
    let (_t, cfg, out) = setup(T3);
    let b = skewlab(&["build"], &cfg, &out);
    assert!(b.status.success(), "{}", String::from_utf8_lossy(&b.stderr));
    let text = String::from_utf8_lossy(&b.stdout);
    assert!(text.contains("r0 257"));
    assert!(out.join("chain.json").exists() && out.join("spec.json").exists());
    let v = skewlab(&["verify"], &cfg, &out);
    assert!(v.status.success());
    let report = json(&out.join("report.json"));
    assert_eq!(report["schema"], 1);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks
        .iter()
        .all(|c| c["pass"] == true && c["value"].as_f64().unwrap() < 1e-9));
}

#[test]
fn tampered_chain_fails_verify() {
    let (_t, cfg, out) = setup(T3);
    assert!(skewlab(&["build"], &cfg, &out).status.success());
    let path = out.join("chain.json");
    let mut chain = json(&path);
    let original = chain.clone();
    // terms 2 and 3 are the pair -n, +n; shifting both real parts keeps the series real
    for i in [2, 3] {
        let coeff = &mut chain["chains"][0]["g"][0][i]["re"];
        *coeff = Value::from(coeff.as_f64().unwrap() + 1e-3);
    }
    std::fs::write(&path, serde_json::to_string(&chain).unwrap()).unwrap();
    let v = skewlab(&["verify"], &cfg, &out);
    assert_eq!(v.status.code(), Some(1));
    let report = json(&out.join("report.json"));
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["pass"] == false));

    let mut lopsided = original;
    let coeff = &mut lopsided["chains"][0]["g"][0][3]["re"];
    *coeff = Value::from(coeff.as_f64().unwrap() + 1e-3);
    std::fs::write(&path, serde_json::to_string(&lopsided).unwrap()).unwrap();
    let v = skewlab(&["verify"], &cfg, &out);
    assert_eq!(v.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&v.stderr).contains("conjugate symmetric"));
}

#[test]
fn missing_alpha_is_a_config_error() {
    let (_t, cfg, out) = setup(r#"{"schema": 1, "system": {"kind": "S", "k": 2}}"#);
    let b = skewlab(&["build"], &cfg, &out);
    assert_eq!(b.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&b.stderr).contains("missing alpha"));
    assert!(!out.exists());
}

#[test]
fn eps_advisory_is_only_a_warning() {
    let (_t, cfg, out) = setup(
        r#"{"schema": 1, "alpha": "golden", "eps": 0.2, "L": 3, "count": 20,
            "system": {"kind": "S", "k": 2}}"#,
    );
    let b = skewlab(&["build"], &cfg, &out);
    assert!(b.status.success());
    assert!(String::from_utf8_lossy(&b.stderr).contains("warning: eps = 0.2 exceeds"));
}

#[test]
fn empty_selection_gives_empty_report() {
    let (_t, cfg, out) = setup(r#"{"schema": 1, "alpha": "golden", "system": {"kind": "S", "k": 2}}"#);
    let v = skewlab(&["verify"], &cfg, &out);
    assert!(v.status.success());
    let report = json(&out.join("report.json"));
    assert_eq!(report["checks"].as_array().unwrap().len(), 0);
    assert!(report.get("ergodicity").is_none());
}

const S2_RPK: &str = r#"{
  "schema": 1, "alpha": "golden",
  "system": { "kind": "S", "k": 2 },
  "rpk": {
    "k": 1, "delta": 0.05, "n_bound": 30, "grid": 100,
    "pairs": [
      { "x": ["0", "0"], "y": ["0", "0"] },
      { "x": ["0", "0"], "y": ["0", "0.3"] },
      { "x": ["0", "0"], "y": ["0.3", "0"] }
    ],
    "finite": [{ "system": { "cyclic": { "n": 8, "shift": 1 } }, "k": 1, "delta": 0.05, "n_bound": 16 }]
  }
}"#;

#[test]
fn rpk_certificates() {
    let (_t, cfg, out) = setup(S2_RPK);
    assert!(skewlab(&["build"], &cfg, &out).status.success());
    let r = skewlab(&["rpk"], &cfg, &out);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let certs = json(&out.join("certificates.json"));
    let torus = certs["torus"].as_array().unwrap();
    assert_eq!(torus[0]["outcome"]["status"], "certified");
    assert_eq!(torus[0]["outcome"]["n"], serde_json::json!([0]));
    assert_eq!(torus[1]["outcome"]["status"], "certified");
    assert_eq!(torus[2]["outcome"]["status"], "no_witness_found");
    assert!(torus[2]["outcome"]["obstruction"].is_object());
    let finite = &certs["finite"][0]["pairs"];
    assert_eq!(finite.as_array().unwrap().len(), 8);
    let rep = skewlab(&["report"], &cfg, &out);
    assert!(rep.status.success());
    assert!(String::from_utf8_lossy(&rep.stdout).contains("3 torus pairs, 2 certified, 1 ruled out"));
}

#[test]
fn rpk_guard_exits_nonzero() {
    let (_t, cfg, out) = setup(&S2_RPK.replace(r#""k": 1, "delta""#, r#""k": 3, "delta""#));
    assert!(skewlab(&["build"], &cfg, &out).status.success());
    let r = skewlab(&["rpk"], &cfg, &out);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("complexity guard"));
}

#[test]
fn verify_without_build_is_an_error() {
    let (_t, cfg, out) = setup(T3);
    assert_eq!(skewlab(&["verify"], &cfg, &out).status.code(), Some(2));
}

#[test]
fn every_system_kind_verifies() {
    let systems = [
        (r#"{"kind": "S", "k": 3}"#, ""),
        (r#"{"kind": "R", "k": 2}"#, r#", "eigenfunction": [[1, 1], [0, 2]]"#),
        (r#"{"kind": "two-cob", "k": 3, "l": 1}"#, ""),
        (r#"{"kind": "two-cob", "k": 2, "l": 2}"#, ""),
        (r#"{"kind": "combined", "k": 3, "j": 1, "l": 2}"#, ""),
        (r#"{"kind": "combined", "k": 3, "j": 1, "l": 3}"#, ""),
        (
            r#"{"kind": "zd-family", "k": 2, "j": 1, "constants": ["0", "1/3", "0.7"]}"#,
            r#", "commutation": true"#,
        ),
    ];
    for (system, extra) in systems {
        let config = format!(
            r#"{{"schema": 1, "alpha": "golden", "beta": "sqrt2", "eps": 0.0625, "L": 2, "count": 30,
                "system": {system},
                "verify": {{"samples": 2000, "coboundary": true, "conjugacy": true{extra}}}}}"#
        );
        let (_t, cfg, out) = setup(&config);
        let b = skewlab(&["build"], &cfg, &out);
        assert!(b.status.success(), "{system}: {}", String::from_utf8_lossy(&b.stderr));
        let v = skewlab(&["verify"], &cfg, &out);
        assert!(v.status.success(), "{system}: {}", String::from_utf8_lossy(&v.stdout));
    }
}

#[test]
fn csv_outputs() {
    let (_t, cfg, out) = setup(
        r#"{"schema": 1, "alpha": "golden", "count": 20, "system": {"kind": "S", "k": 2},
            "verify": {"birkhoff": {"chars": [[0, 1]], "checkpoints": [10, 100]},
                       "sup_growth": [5, 10, 20], "cesaro": [10, 100]}}"#,
    );
    assert!(skewlab(&["build"], &cfg, &out).status.success());
    assert!(skewlab(&["verify"], &cfg, &out).status.success());
    let birkhoff = std::fs::read_to_string(out.join("birkhoff.csv")).unwrap();
    assert_eq!(birkhoff.lines().next(), Some("system-id,char,start,N,re,im,abs"));
    assert_eq!(birkhoff.lines().count(), 1 + 5 * 2);
    let sup = std::fs::read_to_string(out.join("sup_growth.csv")).unwrap();
    assert_eq!(sup.lines().collect::<Vec<_>>()[0], "M,value");
    assert_eq!(sup.lines().count(), 4);
    let ces = std::fs::read_to_string(out.join("cesaro.csv")).unwrap();
    assert!(ces.starts_with("N,value\n10,"));
}
