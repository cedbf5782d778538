//! End-to-end runs of the `cyops` binary.

use std::process::Command;

fn cyops(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cyops"))
        .args(args)
        .env("CYOPS_ORDER", "20")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn catalog_lists_cases() {
    let (code, out, _) = cyops(&["catalog", "--case", "extra", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 16);
    assert_eq!(v[0]["aesz_id"], "(17)");
    let (code, out, _) = cyops(&["catalog", "--format", "markdown"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 62);
}

#[test]
fn verify_writes_report() {
    let path = std::env::temp_dir().join(format!("cyops-report-{}.json", std::process::id()));
    let (code, out, _) = cyops(&["verify", "--case", "even", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["config"]["order"], 20);
    assert_eq!(v["config"]["seed"], 3);
    assert_eq!(v["summary"]["passed"], 16);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["entries"][0]["case"], "even");
    assert_eq!(v["entries"][0]["checks"]["annihilation"], true);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&out).unwrap(), v);
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_rejects_low_order() {
    let (code, _, err) = cyops(&["verify", "--order", "10"]);
    assert_eq!(code, 2);
    assert!(err.contains("below 20"));
}

#[test]
fn twist_step_one_and_three() {
    let (code, out, _) = cyops(&["twist", "--surface", "X431", "--invariant", "2,1,1", "--step", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mu"], "1/3");
    assert_eq!(v["transformation_verified"], true);
    let (code, out, _) = cyops(&["twist", "--surface", "X141", "--invariant", "1,1,1", "--step", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reduced_period"], "4F3(1/2,1/2,1/2,1/2; 1,1,1 | t)");
    assert_eq!(v["calabi_yau_degrees"], true);
    let (code, _, _) = cyops(&["twist", "--surface", "X141", "--invariant", "3,3,1", "--step", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn fibers_from_model_file() {
    let path = std::env::temp_dir().join(format!("cyops-model-{}.json", std::process::id()));
    let model = cyops::weierstrass::surface_catalog("X321").unwrap();
    std::fs::write(&path, serde_json::to_string(&model).unwrap()).unwrap();
    let (code, out, _) = cyops(&["fibers", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["euler_sum"], 12);
    std::fs::remove_file(path).ok();
}

#[test]
fn identity_exit_codes() {
    let (code, out, _) = cyops(&["identity", "--name", "clausen", "--mu", "1/3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checks"][0]["order_checked"], 20);
    let (code, out, _) = cyops(&["identity", "--name", "monodromy"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(code as u64, v["failed"].as_u64().unwrap());
    let (code, _, _) = cyops(&["identity", "--name", "nope"]);
    assert_eq!(code, 2);
}
