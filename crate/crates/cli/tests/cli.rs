use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qisim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qisim")).args(args).output().expect("spawn qisim")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qisim-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn experiment1_flips_every_shot() {
    let dir = scratch("exp1");
    let out = qisim(&["experiment1", "--shots", "10", "--seed", "1", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("Final state=1111111111"), "{stdout}");
    let transcript = fs::read_to_string(dir.join("experiment1.txt")).unwrap();
    assert!(transcript.contains("Final state=1111111111"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("experiment1.json")).unwrap()).unwrap();
    assert!(json.is_object());
}

#[test]
fn chsh_single_point_at_quarter_pi() {
    let dir = scratch("chsh");
    let out = qisim(&["chsh", "--alpha", "0.7853981633974483", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("chsh.json")).unwrap()).unwrap();
    let v = json["violation"].as_f64().unwrap();
    assert!((v - (2.0 * 2f64.sqrt() - 2.0)).abs() < 1e-9);
}

#[test]
fn chsh_curve_has_header_and_rows() {
    let dir = scratch("chshcurve");
    assert!(qisim(&["chsh", "--out", dir.to_str().unwrap()]).status.success());
    let csv = fs::read_to_string(dir.join("chsh.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("alpha,entropy,violation"));
    assert!(lines.count() > 10);
}

#[test]
fn sampled_runs_are_byte_deterministic() {
    let a = scratch("det-a");
    let b = scratch("det-b");
    for dir in [&a, &b] {
        let out = qisim(&["experiment4", "--shots", "20", "--seed", "7", "--out", dir.to_str().unwrap()]);
        assert!(out.status.success());
    }
    for f in ["experiment4.json", "experiment4.txt"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn json_format_serializes_rows() {
    let dir = scratch("coin");
    assert!(qisim(&["coinflip", "--format", "json", "--out", dir.to_str().unwrap()]).status.success());
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("coinflip.json")).unwrap()).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 101);
    assert!((rows[50]["entropy"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = qisim(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "usage");
}

#[test]
fn inapplicable_flags_are_rejected() {
    let dir = scratch("reject");
    let d = dir.to_str().unwrap();
    for args in [vec!["kraus", "--format", "csv", "--out", d], vec!["chsh", "--shots", "5", "--out", d]] {
        let out = qisim(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    assert!(!qisim(&["rabi", "--alpha", "0.3", "--out", d]).status.success());
}

#[test]
fn invalid_parameter_is_module_error() {
    let dir = scratch("theta");
    let out = qisim(&["tfd", "--theta", "3", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "module");
}

#[test]
fn small_arealaw_writes_curve_and_sidecar() {
    let dir = scratch("area");
    let out = qisim(&["arealaw", "--n", "12", "--lmax", "20", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.join("arealaw.csv")).unwrap();
    assert!(csv.starts_with("r,S\n"));
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("arealaw_fit.json")).unwrap()).unwrap();
    assert_eq!(side["N"], 12);
    assert_eq!(side["l_max"], 20);
    assert_eq!(side["entropy_units"], "nats");
    assert!(side["lambda"].as_f64().unwrap() > 0.0);
}

#[test]
fn schwinger_rows_conserve_probability() {
    let dir = scratch("schwinger");
    assert!(qisim(&["schwinger", "--t-max", "2", "--out", dir.to_str().unwrap()]).status.success());
    let csv = fs::read_to_string(dir.join("schwinger.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1..].iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn hermite_writes_three_reports() {
    let dir = scratch("hermite");
    assert!(qisim(&["hermite", "--nq", "3", "--out", dir.to_str().unwrap()]).status.success());
    for f in ["hermite.csv", "digitization.json", "sampling_fidelity.json"] {
        assert!(dir.join(f).exists(), "{f}");
    }
}
