use std::path::PathBuf;

use reglab::cli::run;
use reglab::report::parse_rational;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("reglab").chain(args.iter().copied()).collect();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("not JSON ({e}): {s}"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("reglab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn regulator_of_trivial_module() {
    for method in ["pairing", "qindex", "both"] {
        let (code, out, _) = exec(&[
            "regulator",
            "--module",
            &data("trivial_Z.json"),
            "--relation",
            &data("thetaD3.json"),
            "--method",
            method,
        ]);
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!(v["value"], "1/3");
        assert_eq!(v["factorization"]["3"], -1);
    }
}

#[test]
fn regulator_defaults_to_dihedral_relation() {
    let (code, out, _) = exec(&["regulator", "--module", &data("trivial_Z.json")]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["value"], "1/3");
}

#[test]
fn malformed_module_reports_witness() {
    let path = scratch("bad.json");
    std::fs::write(
        &path,
        r#"{"group":{"kind":"dihedral","q":3},"rank":1,"relations":[],"action_on_generators":{"1":[[2]],"3":[[1]]}}"#,
    )
    .unwrap();
    let (code, out, err) = exec(&["validate", "--module", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("invalid module"), "{err}");
    assert_eq!(json(&out)["error"]["code"], 2);

    std::fs::write(&path, "{\"rank\": ").unwrap();
    assert_eq!(exec(&["validate", "--module", path.to_str().unwrap()]).0, 2);
    assert_eq!(exec(&["validate", "--module", "/nonexistent/module.json"]).0, 2);
}

#[test]
fn validate_accepts_good_module() {
    let (code, out, _) = exec(&["validate", "--module", &data("trivial_Z.json")]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["free_rank"], 1);
    assert_eq!(v["module_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn cohomology_of_trivial_module() {
    let (code, out, _) =
        exec(&["cohomology", "--module", &data("trivial_Z.json"), "--subgroup", "0,1,2", "--degrees", "-2..2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let orders: Vec<i64> = v["groups"].as_array().unwrap().iter().map(|g| g["order"].as_i64().unwrap()).collect();
    // Z over C3: Ĥ even = Z/3, Ĥ odd = 0
    assert_eq!(orders, [3, 1, 3, 1, 3]);

    let (code, out, _) = exec(&["cohomology", "--module", &data("trivial_Z.json"), "--subgroup", "0,1,2,3,4,5", "--degrees", "-1,0,1,2"]);
    assert_eq!(code, 0);
    let orders: Vec<i64> = json(&out)["groups"].as_array().unwrap().iter().map(|g| g["order"].as_i64().unwrap()).collect();
    assert_eq!(orders, [1, 6, 1, 2]);
}

#[test]
fn cohomology_rejects_bad_input() {
    let m = data("trivial_Z.json");
    assert_eq!(exec(&["cohomology", "--module", &m, "--subgroup", "0,1", "--degrees", "0"]).0, 2);
    assert_eq!(exec(&["cohomology", "--module", &m, "--subgroup", "0,9", "--degrees", "0"]).0, 2);
    assert_eq!(exec(&["cohomology", "--module", &m, "--subgroup", "0,3", "--degrees", "x..1"]).0, 2);
}

#[test]
fn relations_of_klein_four() {
    let (code, out, _) = exec(&["relations", "--group", "C2xC2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["rank"], 1);
    let coeffs: Vec<i64> = v["basis"][0].as_array().unwrap().iter().map(|t| t["coeff"].as_i64().unwrap()).collect();
    let mut sorted = coeffs.clone();
    sorted.sort_unstable();
    assert!(sorted == [-1, -1, -1, 1, 2] || sorted == [-2, -1, 1, 1, 1], "{coeffs:?}");

    let (code, out, _) = exec(&["relations", "--group", r#"{"kind":"cyclic","n":5}"#]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["rank"], 0);
    assert_eq!(exec(&["relations", "--group", "D4"]).0, 2);
}

#[test]
fn random_module_then_check() {
    let path = scratch("m.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = exec(&["random-module", "--group", "D5", "--profile", "torsion_free", "--seed", "11", "--out", p]);
    assert_eq!(code, 0);
    let digest = json(&out)["module_digest"].clone();
    let (_, again, _) = exec(&["random-module", "--group", "D5", "--profile", "torsion_free", "--seed", "11"]);
    let (_, valid, _) = exec(&["validate", "--module", p]);
    assert_eq!(json(&valid)["module_digest"], digest);
    assert_eq!(json(&again), json(&std::fs::read_to_string(&path).unwrap()));

    for id in ["DUAL1", "DIHEDRAL_MAIN", "DCF", "BOUNDS", "RCZ"] {
        let (code, out, err) = exec(&["check", "--identity", id, "--module", p, "--seed", "3"]);
        assert_eq!(code, 0, "{id}: {out}{err}");
        let v = json(&out);
        assert_eq!(v["status"], "pass");
        assert_eq!(v["check"], id);
        assert!(parse_rational(v["lhs"].as_str().unwrap()).is_some());
    }
    assert_eq!(exec(&["check", "--identity", "FINITE_DIHEDRAL", "--module", p]).0, 2);
    let fin = scratch("f.json");
    let f = fin.to_str().unwrap();
    assert_eq!(exec(&["random-module", "--group", "D3", "--profile", "finite", "--seed", "5", "--out", f]).0, 0);
    for id in ["FINITE_DIHEDRAL", "FINITE_DUAL"] {
        let (code, out, _) = exec(&["check", "--identity", id, "--module", f]);
        assert_eq!(code, 0, "{id}: {out}");
    }
    let (code, out, _) = exec(&["check", "--identity", "RCZS", "--module", p, "--family", "0;0,5;0,1,2,3,4"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["status"], "pass");
    assert_eq!(exec(&["check", "--identity", "NOPE", "--module", p]).0, 2);
    assert_eq!(exec(&["random-module", "--group", "D5", "--profile", "weird"]).0, 2);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "dihedral", "--q", "3", "--trials", "5", "--seed", "1"];
    let (c1, a, e1) = exec(&args);
    let (c2, b, _) = exec(&args);
    assert_eq!(c1, 0, "{e1}");
    assert_eq!(c2, 0);
    assert_eq!(a, b);
    let v = json(&a);
    assert_eq!(v["summary"]["fail"], 0);
    assert!(e1.contains("pass"), "{e1}");
    let checks: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["check"].as_str().unwrap()).collect();
    for c in ["DIHEDRAL_MAIN", "DCF", "BOUNDS", "FINITE_DIHEDRAL"] {
        assert_eq!(checks.iter().filter(|&&x| x == c).count(), 5, "{c}");
    }
    let (_, other, _) = exec(&["verify", "--suite", "dihedral", "--q", "3", "--trials", "5", "--seed", "2"]);
    assert_ne!(a, other);
}

#[test]
fn qindex_and_brauer_suites() {
    let (code, out, _) = exec(&["verify", "--suite", "qindex", "--seed", "4"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["trials"], 200);
    assert_eq!(v["summary"]["pass"], 600);

    let (code, out, _) = exec(&["verify", "--suite", "brauer", "--q", "3"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!(v["reports"].as_array().unwrap().iter().any(|r| r["check"] == "V4_GENERATOR" && r["status"] == "pass"));
}

#[test]
fn verify_rejects_unknown_suite() {
    assert_eq!(exec(&["verify", "--suite", "nonsense"]).0, 2);
    assert_eq!(exec(&["verify", "--suite", "dihedral", "--q", "4"]).0, 2);
}

#[test]
fn help_and_usage_errors() {
    let (code, out, _) = exec(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
    assert_eq!(exec(&[]).0, 2);
    assert_eq!(exec(&["regulator"]).0, 2);
}
