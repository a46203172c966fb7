use std::path::PathBuf;
use std::process::{Command, Output};

use divitopos::presheaf::{Presheaf, PresheafFile};
use divitopos::topology::{AxiomWitness, TopologyFile};
use divitopos::{Lattice, Topology, TopologyKind};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divitopos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lattice_json_matches_divisors() {
    let out = run(&["lattice", "--modulus", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["elements"], serde_json::json!([1, 2, 3, 4, 6, 12]));
    assert_eq!(v["hasse"].as_array().unwrap().len(), 7);
}

#[test]
fn lattice_text_and_dot() {
    let dot = run(&["lattice", "--modulus", "12", "--format", "dot"]);
    let s = String::from_utf8(dot.stdout).unwrap();
    assert!(s.starts_with("digraph"));
    assert_eq!(s.matches("->").count(), 7);
    let text = run(&["lattice", "--modulus", "12", "--format", "text"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(!text.stdout.is_empty());
}

#[test]
fn heyting_laws_report() {
    let v = json(&run(&["heyting", "--modulus", "360", "--op", "laws"]));
    for law in [
        "adjunction",
        "dnn_intro",
        "antitone",
        "triple_neg",
        "dnn_meet",
    ] {
        assert_eq!(v[law]["pass"], true, "{law}");
    }
    let b = json(&run(&["heyting", "--modulus", "12", "--op", "boolean"]));
    assert_eq!(b["boolean"], false);
    assert_eq!(b["witness"]["n"], 2);
}

#[test]
fn topology_bogus_name_exits_2() {
    let out = run(&["topology", "--modulus", "12", "--name", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn topology_dump_round_trips() {
    let out = run(&["topology", "--modulus", "12", "--name", "dense", "--dump"]);
    let file: TopologyFile = serde_json::from_slice(&out.stdout).unwrap();
    let l = Lattice::new(12).unwrap();
    let t = Topology::from_file(&file).unwrap();
    assert_eq!(
        t.cover_map(),
        Topology::build(&l, TopologyKind::Atomic).cover_map()
    );
}

#[test]
fn invalid_topology_witness_reconfirms() {
    let path = data("not_transitive.json");
    let out = run(&["topology", "--file", &path, "--check"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["transitivity_ok"], false);

    let file: TopologyFile =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let l = Lattice::new(file.modulus).unwrap();
    let t = Topology::from_file(&file).unwrap();
    let report = t.check_axioms(&l);
    assert!(matches!(
        report.counterexamples[0],
        AxiomWitness::Transitivity { .. }
    ));
    assert!(report
        .counterexamples
        .iter()
        .all(|w| w.confirms(&l, t.cover_map())));
    assert_eq!(
        v["counterexamples"],
        serde_json::to_value(&report.counterexamples).unwrap()
    );
}

#[test]
fn sheaf_verdicts_and_witness() {
    let path = data("constant_two.json");
    assert_eq!(
        run(&["sheaf", "--presheaf", &path, "--topology", "trivial"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["sheaf", "--presheaf", &path, "--topology", "atomic"])
            .status
            .code(),
        Some(0)
    );
    let out = run(&["sheaf", "--presheaf", &path, "--topology", "discrete"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["witness"]["amalgamations"], 2);
    assert_eq!(v["witness"]["cover"]["members"], serde_json::json!([]));

    let file: PresheafFile =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let f = Presheaf::from_file(&file).unwrap();
    let l = Lattice::new(4).unwrap();
    let verdict = f
        .is_sheaf(&Topology::build(&l, TopologyKind::Discrete))
        .unwrap();
    assert!(verdict.witness.unwrap().confirms(&f));
}

#[test]
fn sheaf_accepts_topology_file() {
    let out = run(&[
        "sheaf",
        "--presheaf",
        &data("constant_two.json"),
        "--topology",
        &data("not_transitive.json"),
    ]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    json(&out);
}

#[test]
fn non_functor_rejected() {
    let out = run(&[
        "sheaf",
        "--presheaf",
        &data("not_functor.json"),
        "--topology",
        "trivial",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("composition"));
}

#[test]
fn malformed_json_reports_location() {
    let out = run(&[
        "sheaf",
        "--presheaf",
        &data("malformed.json"),
        "--topology",
        "trivial",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("malformed.json:3:"), "{err}");
}

#[test]
fn missing_file_exits_2() {
    let out = run(&[
        "sheaf",
        "--presheaf",
        "/nonexistent/p.json",
        "--topology",
        "trivial",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn omega_dump_shapes() {
    let v = json(&run(&[
        "omega",
        "--modulus",
        "12",
        "--topology",
        "trivial",
        "--dump",
    ]));
    assert_eq!(v["12"].as_array().unwrap().len(), 10);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["1", "2", "3", "4", "6", "12"]);
    let v = json(&run(&[
        "omega",
        "--modulus",
        "12",
        "--topology",
        "discrete",
        "--dump",
    ]));
    assert_eq!(v["12"], serde_json::json!([[1, 2, 3, 4, 6, 12]]));
    let p = json(&run(&[
        "omega",
        "--modulus",
        "12",
        "--topology",
        "trivial",
        "--principal",
        "--dump",
    ]));
    assert_eq!(p["12"].as_array().unwrap().len(), 6);
}

#[test]
fn classify_subobject() {
    let out = run(&[
        "classify",
        "--presheaf",
        &data("constant_two.json"),
        "--sub",
        &data("sub_a.json"),
        "--topology",
        "trivial",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["check"]["classifying_maps"], 1);
    assert_eq!(v["chi"]["4"]["a"], serde_json::json!([1, 2, 4]));
    assert_eq!(v["chi"]["4"]["b"], serde_json::json!([]));
}

#[test]
fn classify_against_non_sheaf_fails() {
    let out = run(&[
        "classify",
        "--presheaf",
        &data("constant_two.json"),
        "--sub",
        &data("sub_a.json"),
        "--topology",
        "discrete",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["presheaf_sheaf"]["is_sheaf"], false);
}

#[test]
fn equiv_kinds() {
    for kind in ["periodic", "roots", "solutions"] {
        let out = run(&[
            "equiv",
            "--modulus",
            "12",
            "--kind",
            kind,
            "--check-iso",
            "--transport",
            "dense",
        ]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        let v = json(&out);
        assert_eq!(v["iso"]["meet_match"], true);
        assert_eq!(v["transport"]["report"]["transitivity_ok"], true);
    }
    let v = json(&run(&[
        "equiv",
        "--modulus",
        "4",
        "--kind",
        "roots",
        "--dump",
    ]));
    assert_eq!(
        v["family"]["carriers"]["4"],
        serde_json::json!(["0/1", "1/4", "1/2", "3/4"])
    );
    let v = json(&run(&["equiv", "--modulus", "4", "--kind", "periodic"]));
    assert_eq!(v["family"]["carriers"]["4"].as_array().unwrap().len(), 7);
}

#[test]
fn verify_all_is_byte_identical() {
    let a = run(&["verify-all", "--modulus", "30", "--seed", "5"]);
    let b = run(&["verify-all", "--modulus", "30", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = run(&["verify-all", "--modulus", "12", "--format", "text"]);
    let s = String::from_utf8(text.stdout).unwrap();
    assert_eq!(s.lines().filter(|l| l.starts_with("criterion ")).count(), 9);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["lattice"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify-all", "--modulus", "12", "--format", "dot"])
            .status
            .code(),
        Some(2)
    );
}
