use std::path::PathBuf;

use centre_core::cli::{exit_code, run, EXIT_CAP, EXIT_INCONCLUSIVE, EXIT_INVALID};
use centre_core::Error;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn json_output_is_deterministic() {
    for name in ["ex1.json", "ex2.json", "ex3.json", "ex4.json"] {
        let a = run(["centre", "centre", &data(name), "--json"]);
        let b = run(["centre", "centre", &data(name), "--json"]);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
        let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(
            serde_json::from_str::<serde_json::Value>(&b.stdout).unwrap(),
            v
        );
        assert!(v["oracle_disagreements"].as_array().unwrap().is_empty());
    }
}

#[test]
fn centre_json_modes() {
    let v: serde_json::Value =
        serde_json::from_str(&run(["centre", "centre", &data("ex4.json"), "--json"]).stdout)
            .unwrap();
    assert_eq!(v["mode"], "subspace");
    assert_eq!(v["basis"], serde_json::json!([[0, 1, 0], [0, 0, 1]]));
    let v: serde_json::Value =
        serde_json::from_str(&run(["centre", "centre", &data("ex1.json"), "--json"]).stdout)
            .unwrap();
    assert_eq!(v["mode"], "trivial_only");
    assert_eq!(v["per_level"][0]["level"], 1);
    assert_eq!(v["per_level"][0]["basis"], serde_json::json!([[1, 0]]));
}

#[test]
fn empty_layers_give_everything() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("free.json");
    std::fs::write(
        &path,
        r#"{"base": {"dim": 2, "group_generators": []}, "layers": []}"#,
    )
    .unwrap();
    let out = run(["centre", "centre", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(
        out.stdout.lines().last().unwrap(),
        "C(K): Im ψ ⊆ U (all of 𝒮(K))"
    );
}

#[test]
fn oracle_reports_two_lifts() {
    let out = run([
        "centre",
        "oracle",
        &data("ex1.json"),
        "--pair",
        "dim=1;psi=[[1],[0]]",
        "--max-degree",
        "4",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("lifts=2"));
    assert!(out.stdout.trim_end().ends_with("not central"));
    let json = run([
        "centre",
        "oracle",
        &data("ex1.json"),
        "--pair",
        "dim=1;psi=[[1],[0]]",
        "--max-degree",
        "4",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["lifts"], 2);
    assert_eq!(v["central"], false);
    assert_eq!(v["witness"], serde_json::Value::Null);
    assert_eq!(
        v["per_degree"][0],
        serde_json::json!({"d": 0, "lhs": 1, "rhs": 1, "ok": true})
    );
}

#[test]
fn comodule_reports_u_cubed() {
    let out = run([
        "centre",
        "comodule",
        &data("ex4.json"),
        &data("coactions/x.json"),
        "--max-degree",
        "3",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(
        out.stdout
            .contains("witness u^3 ↦ u^3⊗1 + u^2⊗t + u⊗t^2 + 1⊗t^3"),
        "{}",
        out.stdout
    );
    let json = run([
        "centre",
        "comodule",
        &data("ex4.json"),
        &data("coactions/x.json"),
        "--max-degree",
        "3",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["restriction"]["witnesses"][0]["element"], "u^3");
    assert_eq!(v["axioms"]["failures"], serde_json::json!([]));
}

#[test]
fn invalid_presentation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"base": {"dim": 2, "group_generators": [[[1,1],[1,1]]]}, "layers": []}"#,
    )
    .unwrap();
    for cmd in ["centre", "validate"] {
        let out = run(["centre", cmd, path.to_str().unwrap()]);
        assert_eq!(out.code, EXIT_INVALID, "{cmd}");
        assert!(out.stdout.contains("NotInvertible") || out.stderr.contains("NotInvertible"));
    }
    let out = run(["centre", "centre", "/nonexistent.json"]);
    assert_eq!(out.code, EXIT_INVALID);
}

#[test]
fn cap_exits_three() {
    let out = run(["centre", "centre", &data("ex4.json"), "--cap-hom-bits", "4"]);
    assert_eq!(out.code, EXIT_CAP, "{}", out.stderr);
}

#[test]
fn exit_code_mapping() {
    assert_eq!(
        exit_code(&Error::Inconclusive { accepted: vec![] }),
        EXIT_INCONCLUSIVE
    );
    assert_eq!(exit_code(&Error::ClosureCapExceeded { cap: 1 }), EXIT_CAP);
    assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_INVALID);
}

#[test]
fn validate_examples() {
    for name in ["ex1.json", "ex2.json", "ex3.json", "ex4.json"] {
        let out = run(["centre", "validate", &data(name)]);
        assert_eq!(out.code, 0, "{name}: {}", out.stdout);
    }
}

#[test]
fn invariants_table() {
    let out = run([
        "centre",
        "invariants",
        "--dim",
        "2",
        "--group",
        "B2",
        "--max-degree",
        "4",
    ]);
    let dims: Vec<&str> = out
        .stdout
        .lines()
        .filter_map(|l| l.split(": dim ").nth(1))
        .map(|r| r.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(dims, ["1", "1", "2", "2", "3"]);
    let gens = run([
        "centre",
        "invariants",
        "--dim",
        "2",
        "--generator",
        "[[1,1],[0,1]]",
        "--max-degree",
        "4",
    ]);
    assert_eq!(gens.stdout, out.stdout);
}
