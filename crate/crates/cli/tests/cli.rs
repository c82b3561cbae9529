//! End-to-end runs of the `spherical` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use spherical_core::document::SkeletonDocument;
use spherical_core::symmetric_catalog::{mark, FamilySpec};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spherical"));
    c.current_dir(env!("CARGO_MANIFEST_DIR"));
    c.env_remove("SKELETON_SCHEMA_PATH");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spherical-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/spherical.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Validates against one definition of the bundled schema.
fn assert_matches_schema(def: &str, instance: &Value) {
    let mut root = schema();
    root["$ref"] = json!(format!("#/$defs/{def}"));
    root.as_object_mut().unwrap().remove("oneOf");
    let v = jsonschema::validator_for(&root).unwrap();
    let errors: Vec<String> = v.iter_errors(instance).map(|e| format!("{}: {e}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{def}: {errors:?}");
    let whole = jsonschema::validator_for(&schema()).unwrap();
    assert!(whole.is_valid(instance), "{def}: fails the top-level schema");
}

fn json_of(args: &[&str]) -> (Output, Value) {
    let o = run(args);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&o)));
    (o, v)
}

#[test]
fn group_embedding_g2() {
    let o = run(&["compute-p", "--family", "2:G2", "--mark", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("p = 2, bound = 12"), "{}", stdout(&o));
    assert!(stdout(&o).contains("certificate: verified"));
}

#[test]
fn worked_skeleton_attains_the_bound() {
    let o = run(&["compute-p", "examples/ex35.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("p = 1, bound = 1, equality"), "{}", stdout(&o));
}

#[test]
fn exceptional_f4_row() {
    let o = run(&["compute-p", "--family", "29:F4", "--mark", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("p = 3/2"), "{}", stdout(&o));
}

#[test]
fn compute_p_json_and_csv() {
    let (o, v) = json_of(&["compute-p", "examples/ex35.json", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_matches_schema("compute_p_report", &v);
    assert_eq!(v["report"]["p_value"], "1");
    assert_eq!(v["certificate_verified"], true);
    assert!(v.get("meta").is_none());

    let (_, v) = json_of(&["compute-p", "--family", "29:F4", "--mark", "4", "--json", "--meta"]);
    assert_matches_schema("compute_p_report", &v);
    assert_eq!(v["report"]["p_value"], "3/2");
    assert_eq!(v["marking"], json!([4]));
    assert!(v["meta"]["version"].is_string());

    let o = run(&["compute-p", "--family", "29:F4", "--mark", "4", "--csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("source,p_num,p_den,bound,gap,equality,theta,dual"));
    assert!(lines.next().unwrap().starts_with("29:F4 mark 4,3,2,24,45/2,false"));
}

#[test]
fn unmarked_family_has_infinite_p() {
    let (o, v) = json_of(&["compute-p", "--family", "2:A2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_matches_schema("compute_p_report", &v);
    assert_eq!(v["report"]["p_value"], "inf");
    assert_eq!(v["certificate_verified"], Value::Null);
}

#[test]
fn invalid_inputs_exit_two() {
    let o = run(&["compute-p", "--family", "9:l=1,m=0", "--mark", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error (family)"));

    let o = run(&["compute-p", "--family", "2:G2", "--mark", "3"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["compute-p", "examples/missing.json"]);
    assert_eq!(o.status.code(), Some(2));

    let bad = scratch("not-json.json");
    std::fs::write(&bad, "{").unwrap();
    let o = run(&["compute-p", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn axiom_violations_are_listed() {
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/ex35.json"),
    )
    .unwrap())
    .unwrap();
    doc["gamma"][1]["pairings"] = json!([1]);
    let path = scratch("positive-gamma.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let (o, v) = json_of(&["compute-p", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_matches_schema("error_report", &v);
    assert_eq!(v["error"]["kind"], "invalid_skeleton");
    let violations = v["error"]["violations"].as_array().unwrap();
    assert!(violations.iter().any(|x| x["detail"]["axiom"] == "gamma_sign"), "{violations:?}");
}

#[test]
fn unknown_fields_fail_the_schema() {
    let mut doc: Value = serde_json::from_str(include_str!("../examples/ex35.json")).unwrap();
    doc["comment"] = json!("extra");
    let path = scratch("extra-field.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let (o, v) = json_of(&["compute-p", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(v["error"]["kind"], "schema");
}

#[test]
fn schema_path_override() {
    let strict = scratch("reject-all.schema.json");
    std::fs::write(&strict, r#"{"$defs": {"skeleton_document": false}}"#).unwrap();
    let o = bin()
        .args(["compute-p", "examples/ex35.json"])
        .env("SKELETON_SCHEMA_PATH", &strict)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    let o = bin()
        .args(["compute-p", "examples/ex35.json"])
        .env("SKELETON_SCHEMA_PATH", scratch("does-not-exist.json"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    let o = bin()
        .args(["compute-p", "examples/ex35.json"])
        .env("SKELETON_SCHEMA_PATH", Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/spherical.schema.json"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn worked_fano_example() {
    let o = run(&["fano", "examples/ex32_fano.json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("supported vertices (2): (-1, 1), (2, 1)"), "{text}");
    assert!(text.contains("iota = 2"));
    assert!(text.contains("holds"));

    let (_, v) = json_of(&["fano", "examples/ex32_fano.json", "--json"]);
    assert_matches_schema("fano_report", &v);
    assert_eq!(v["curves"]["iota"], "2");
    assert_eq!(v["mukai"]["holds"], true);
    assert_eq!(v["mukai"]["p_cross_check"], true);
    assert_eq!(v["color_vertex_check"], true);
}

#[test]
fn torsion_fano_example() {
    let (o, v) = json_of(&["fano", "examples/ex61_fano.json", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_matches_schema("fano_report", &v);
    assert_eq!(v["reflexive"], true);
    assert_eq!(v["curves"]["supported"], json!([["0", "1"], ["1", "0"]]));
}

#[test]
fn origin_on_boundary_exits_two() {
    let (o, v) = json_of(&["fano", "examples/origin_on_boundary.json", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_matches_schema("error_report", &v);
    let messages: Vec<&str> =
        v["error"]["violations"].as_array().unwrap().iter().map(|x| x["message"].as_str().unwrap()).collect();
    assert!(messages.iter().any(|m| m.starts_with("(2)")), "{messages:?}");
    let o = run(&["fano", "examples/origin_on_boundary.json"]);
    assert!(stderr(&o).contains("(2)"));
}

#[test]
fn projective_spaces() {
    for (file, iota) in [("examples/p1_fano.json", "2"), ("examples/p2_fano.json", "3")] {
        let (o, v) = json_of(&["fano", file, "--json"]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert_matches_schema("fano_report", &v);
        assert_eq!(v["curves"]["iota"], iota);
        assert_eq!(v["mukai"]["holds"], true);
    }
}

#[test]
fn smoothness_verdicts() {
    let o = run(&["smoothness", "examples/ex35.json", "--divisors", "D1,D2,D4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "smooth"), "{}", stdout(&o));

    let o = run(&["smoothness", "examples/ex35.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "smooth"));

    let (o, v) = json_of(&["smoothness", "examples/ex35.json", "--divisors", "D1,D2,D4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_matches_schema("smoothness_report", &v);
    assert_eq!(v["report"]["smooth"], true);

    let (o, v) = json_of(&["smoothness", "examples/ex35.json", "--divisors", "D1,X", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(v["error"]["kind"], "unknown_divisor");
}

#[test]
fn strict_gap_marking_is_not_smooth() {
    let spec: FamilySpec = "2:G2".parse().unwrap();
    let sk = mark(&spec, &[0]).unwrap();
    let path = scratch("g2-marked.json");
    std::fs::write(&path, SkeletonDocument::from_skeleton(&sk).to_json()).unwrap();
    let all: Vec<&str> = sk.delta().iter().map(|d| d.id).collect();
    let ids = all.join(",");
    let o = run(&["smoothness", path.to_str().unwrap(), "--divisors", &ids]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "not smooth"), "{}", stdout(&o));
}

#[test]
fn verify_small_ranks_pass() {
    let o = run(&["verify", "all", "--max-rank", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verify: passed"));

    let o = run(&["verify", "tables", "--max-rank", "3", "--csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("family,params,marking,p_num,p_den,bound,match"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn verify_reports_mismatches_with_exit_one() {
    let o = run(&["verify", "tables", "--max-rank", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("MISMATCH 10/11:l=1,m=1"), "{text}");
    assert!(text.contains("program: maximize"));
}

#[test]
fn verify_equality_passes() {
    let o = run(&["verify", "equality", "--max-rank", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_all_writes_a_json_file() {
    let out = scratch("verify.json");
    let o = run(&["verify", "all", "--max-rank", "5", "--json", out.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0) | Some(1)));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_matches_schema("verify_report", &v);
    assert_eq!(v["suite"], "all");
    assert!(v["tables"]["checks"].as_array().unwrap().len() > 100);
    assert!(!v["equality"]["listed"].as_array().unwrap().is_empty());
    assert!(stdout(&o).contains("tables:"));
}

#[test]
fn catalog_list_outputs() {
    let (o, v) = json_of(&["catalog-list", "--max-rank", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_matches_schema("catalog_list_report", &v);
    let families = v["families"].as_array().unwrap();
    assert!(families.iter().any(|f| f["spec"] == "2:G2" && f["bound"] == 12));
    let o = run(&["catalog-list", "--max-rank", "2", "--csv"]);
    assert_eq!(stdout(&o).lines().next(), Some("spec,family,params,group,table,rank,bound"));
}

#[test]
fn documents_match_the_schema() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let def = if v.get("skeleton").is_some() { "augmented_document" } else { "skeleton_document" };
        assert_matches_schema(def, &v);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["compute-p", "--family", "29:F4", "--mark", "4", "--json"],
        vec!["fano", "examples/ex32_fano.json", "--json"],
        vec!["verify", "tables", "--max-rank", "3", "--json"],
        vec!["catalog-list", "--max-rank", "3", "--csv"],
    ] {
        let a = run(&args);
        let b = bin().args(&args).arg("--jobs").arg("2").output().unwrap();
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
