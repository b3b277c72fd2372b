use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_descent-kit")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report(sub: &str, name: &str, extra: &[&str]) -> (i32, Value) {
    let path = fixture(name);
    let mut args = vec![sub, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let (code, stdout, _) = run(&args);
    (code, serde_json::from_str(&stdout).expect("report is JSON"))
}

fn images(r: &Value) -> Vec<(String, Vec<String>)> {
    r["presentation"]["images"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| {
            (
                x["variable"].as_str().unwrap().to_string(),
                serde_json::from_value(x["image"].clone()).unwrap(),
            )
        })
        .collect()
}

#[test]
fn validate_lists_certificates() {
    let (code, r) = report("validate", "differential.json", &[]);
    assert_eq!(code, 0);
    let certs = r["certificates"].as_array().unwrap();
    assert!(certs.len() >= 8);
    assert!(certs.iter().all(|c| c["passed"] == true));
    assert_eq!(r["status"], "ok");
}

#[test]
fn projection_descend_is_an_obstruction() {
    let (code, r) = report("descend", "projection.json", &[]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "NonInvertibleMatrix");
    assert_eq!(r["error"]["witness"], "M = [[1,0],[0,0]]");
}

#[test]
fn singular_matrix_is_not_an_error_for_matrix() {
    let (code, r) = report("matrix", "projection.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(r["matrix"]["invertible"], "no");
    assert_eq!(r["witness"], "M = [[1,0],[0,0]]");
}

#[test]
fn example_in_characteristic_two() {
    let (code, r) = report("descend", "square_map_f2.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(
        images(&r),
        vec![("t(1)".to_string(), vec!["t(1)^2".to_string()]), ("t(2)".to_string(), vec!["0".to_string()])]
    );
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"field\": \"Q\",\n  \"D\": {\"named\": \"trivial\"},,\n}").unwrap();
    let (code, stdout, stderr) = run(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["error"]["kind"], "ParseError");
    assert_eq!(r["error"]["line"], 3);
    assert!(stderr.contains("ParseError"));

    let text = std::fs::read_to_string(fixture("differential.json")).unwrap().replace("t^2", "t^^2");
    std::fs::write(&bad, text).unwrap();
    let (code, stdout, _) = run(&["descend", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["error"]["context"], "C.g.t[1]");

    let (code, _, _) = run(&["descend", "--input", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn ill_defined_structure_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // t ↦ t + 1 does not preserve t² = 0.
    let text = std::fs::read_to_string(fixture("adjunction_f2.json"))
        .unwrap()
        .replace("\"relations\": [\"t^2\"]", "\"relations\": [\"t^2\"], \"g\": {\"t\": [\"t + 1\"]}");
    std::fs::write(&bad, text).unwrap();
    let (code, stdout, _) = run(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["error"]["kind"], "NotWellDefined");
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("adjunction_f2.json");
    let mut texts = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("r{i}.json"));
        let (code, stdout, _) = run(&["adjoint-check", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(stdout.is_empty());
        texts.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let (_, a, _) = run(&["descend", "--input", fixture("differential.json").to_str().unwrap(), "--truncate", "2"]);
    let (_, b, _) = run(&["descend", "--input", fixture("differential.json").to_str().unwrap(), "--truncate", "2"]);
    assert_eq!(a, b);
}

#[test]
fn audit_rechecks_every_successful_descent() {
    for name in ["square_map_f2.json", "differential.json", "adjunction_f2.json", "compose_commuting.json", "jet_1_1.json"] {
        let (code, r) = report("descend", name, &["--audit"]);
        assert_eq!(code, 0, "{name}");
        let audit = r["audit"].as_array().unwrap();
        assert!(audit.len() >= 6, "{name}");
        assert!(audit.iter().all(|c| c["passed"] == true), "{name}: {audit:?}");
    }
}

#[test]
fn audit_catches_a_tampered_report() {
    let input = std::fs::read_to_string(fixture("differential.json")).unwrap();
    let (_, mut r) = report("descend", "differential.json", &[]);
    r["presentation"]["images"][1]["image"][1] = Value::String("2*t(1)*t(2)".into());
    let audit = descent_kit::cli::audit_descent(&input, &r).unwrap();
    let failed: Vec<&str> = audit.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert!(failed.contains(&"audit.unit_is_d_hom"), "{failed:?}");
    assert!(failed.contains(&"audit.structure_reproduced"));
}

#[test]
fn truncation_window() {
    let (code, r) = report("validate", "differential.json", &["--truncate", "3"]);
    assert_eq!(code, 0);
    // A = Q has no variables: 1 + 2 + 4 + 8 words over one generator.
    assert_eq!(r["truncated_variables"], 15);
    let (_, r) = report("descend", "differential.json", &["--truncate", "2"]);
    let words = r["words"].as_array().unwrap();
    let find = |v: &str, w: &str| words.iter().find(|x| x["variable"] == v && x["word"] == w).unwrap()["value"].clone();
    assert_eq!(find("t(1)", "2 2"), "2*t(1)^3");
    assert_eq!(find("t(1)", "1 2"), "t(1)^2");
}

#[test]
fn adjoint_check_paths() {
    let (code, r) = report("adjoint-check", "adjunction_f2.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(r["enumeration"]["d_homs"], serde_json::json!([8, 8]));

    let (code, r) = report("adjoint-check", "adjunction_f2.json", &["--budget", "3"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "CombinatorialBudgetExceeded");

    let (code, r) = report("adjoint-check", "projection.json", &[]);
    assert_eq!(code, 2);
    let systems: Vec<&str> = r["evidence"].as_array().unwrap().iter().map(|e| e["system"].as_str().unwrap()).collect();
    assert!(systems.contains(&"[0,1]ᵀ = M·x̄ with M = [[1,0],[0,0]]"));

    let (code, r) = report("adjoint-check", "differential.json", &[]);
    assert_eq!(code, 1);
    assert_eq!(r["error"]["kind"], "InputError");
}

#[test]
fn compose_check_fixtures() {
    for name in ["compose_difference.json", "compose_commuting.json", "jet_1_1.json", "jet_2_0.json"] {
        let (code, r) = report("compose-check", name, &[]);
        assert_eq!(code, 0, "{name}: {r}");
    }
    let (_, r) = report("compose-check", "jet_2_0.json", &[]);
    assert_eq!(r["compose"]["commutes_before"], true);
    assert_eq!(r["compose"]["commutes_after"], true);
    let (code, _) = report("compose-check", "differential.json", &[]);
    assert_eq!(code, 1);
}

#[test]
fn non_commuting_pair_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nc.json");
    let text = std::fs::read_to_string(fixture("compose_commuting.json")).unwrap().replace("x + 1", "x^2");
    std::fs::write(&path, text).unwrap();
    let (code, stdout, _) = run(&["compose-check", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["compose"]["commutes_before"], false);
    assert_eq!(r["operators_commute"], false);
}
