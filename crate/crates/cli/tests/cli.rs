use std::io::Write;

use algres::golden::{self, parse_order};
use assert_cmd::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::cargo_bin("algres").unwrap().args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn csv_rows(s: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(s.as_bytes()).records().map(|r| r.unwrap()).collect()
}

fn jsonl_rows(s: &str) -> Vec<serde_json::Map<String, serde_json::Value>> {
    s.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn basis_degrees() {
    let (code, out) = run(&["basis", "--germ", "W8", "--format", "csv"]);
    assert_eq!(code, 0);
    let d: Vec<String> = csv_rows(&out).iter().map(|r| r[2].to_string()).collect();
    assert_eq!(d, ["9", "10", "11", "13", "14", "15", "17", "19"]);
    let (_, out) = run(&["basis", "--germ", "W8", "--all-forms", "--format", "csv"]);
    let labels: Vec<String> = csv_rows(&out).iter().map(|r| r[0].to_string()).collect();
    assert_eq!(labels.len(), 9);
    assert!(labels.contains(&"sigma1".to_string()) && labels.contains(&"sigma2".to_string()));
    let (_, out) = run(&["basis", "--germ", "W9", "--format", "csv"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 9);
    assert_eq!(&rows[8][1], "x3^3*dx2^dx3");
    assert_eq!(&rows[8][2], "16");
}

#[test]
fn basis_text_reports_stabilization() {
    let (_, out) = run(&["basis", "--germ", "W9"]);
    assert!(out.contains("stable: pieces"), "{out}");
}

#[test]
fn classification_tables_reproduce_reference() {
    for (name, want) in [("W8", golden::W8_CLASSIFICATION), ("W9", golden::W9_CLASSIFICATION)] {
        let (code, out) = run(&["classify", "--germ", name, "--table", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(csv_rows(&out), csv_rows(want), "{name}");
    }
}

#[test]
fn classify_examples() {
    let (_, out) = run(&["classify", "--germ", "W8", "--form", "dx2^dx3 + 2*dx1^dx3", "--format", "jsonl"]);
    let r = &jsonl_rows(&out)[0];
    assert_eq!(r["class"], "W8^0");
    assert_eq!(r["moduli"], "(2, 0)");
    let (_, out) = run(&["classify", "--germ", "W9", "--coords", "0,0,0,0,0,0,0,0,1", "--format", "jsonl"]);
    let r = &jsonl_rows(&out)[0];
    assert_eq!(r["class"], "W9^8");
    assert_eq!(r["sign"], "+");
    let (_, out) = run(&["classify", "--germ", "W9", "--coords", "0,0,0,0,0,0,0,0,-3", "--format", "jsonl"]);
    assert_eq!(jsonl_rows(&out)[0]["sign"], "-");
}

#[test]
fn invariant_columns_and_roundtrip() {
    for (name, want) in [("W8", golden::W8_INVARIANTS), ("W9", golden::W9_INVARIANTS)] {
        let gold = golden::parse_invariants(want).unwrap();
        let (code, csv_out) = run(&["invariants", "--germ", name, "--format", "csv"]);
        assert_eq!(code, 0);
        let (_, json_out) = run(&["invariants", "--germ", name, "--format", "jsonl"]);
        let rows = csv_rows(&csv_out);
        let objs = jsonl_rows(&json_out);
        assert_eq!(rows.len(), gold.len());
        for ((r, o), g) in rows.iter().zip(&objs).zip(&gold) {
            assert_eq!(&r[0], g.class);
            assert_eq!(parse_order(&r[2]).unwrap(), g.ln, "{} L_N", g.class);
            if let Some(l2) = g.l2 {
                assert_eq!(parse_order(&r[3]).unwrap(), l2, "{} L2", g.class);
            }
            for (k, h) in ["class", "ind", "L_N"].iter().enumerate() {
                assert_eq!(o[*h], r[k], "{h}");
            }
        }
    }
    let (_, out) = run(&["invariants", "--germ", "W9", "--class", "3", "--format", "csv"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][2], "7");
}

#[test]
fn text_renders_infinity_symbol() {
    let (_, out) = run(&["invariants", "--germ", "W8"]);
    assert!(out.lines().last().unwrap().contains('∞'));
    let (_, out) = run(&["invariants", "--germ", "W8", "--format", "csv"]);
    assert!(out.contains("inf") && !out.contains('∞'));
}

#[test]
fn geometry_tables() {
    for (name, want) in [("W8", golden::W8_GEOMETRY), ("W9", golden::W9_GEOMETRY)] {
        let (code, out) = run(&["geometry", "--germ", name, "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(csv_rows(&out), csv_rows(want), "{name}");
    }
}

#[test]
fn actions_against_reference() {
    for name in ["W8", "W9"] {
        let (code, out) = run(&["actions", "--germ", name, "--verify-paper"]);
        assert_eq!(code, 0, "{out}");
    }
    let (_, out) = run(&["actions", "--germ", "W8", "--field", "x1*x3*E", "--format", "csv"]);
    let rows = csv_rows(&out);
    assert_eq!(&rows[0][2], "-19 theta8");
    assert!(rows[0].iter().skip(3).all(|c| c == "0"));
    let (_, out) = run(&["actions", "--germ", "W8", "--format", "csv"]);
    assert_eq!(csv_rows(&out), csv_rows(golden::W8_ACTIONS));
}

#[test]
fn verify_builtins_pass() {
    for name in ["W8", "W9"] {
        let (code, out) = run(&["verify", "--germ", name, "--instances", "20"]);
        assert_eq!(code, 0, "{out}");
        assert!(!out.contains("FAIL"));
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["verify", "--germ", "W8", "--seed", "7", "--instances", "10", "--format", "csv"]);
    let b = run(&["verify", "--germ", "W8", "--seed", "7", "--instances", "10", "--format", "csv"]);
    assert_eq!(a, b);
}

fn germ_file(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

#[test]
fn wrong_generator_fails_dimension_certificate() {
    let f = germ_file(
        "germ W8\nvariables x1 x2 x3\nweights 6 5 4\ngenerator x1^2\ngenerator x2^2 + x1*x3\nbranch C (0, 0, t)\n",
    );
    let (code, out) = run(&["verify", "--germ", f.path().to_str().unwrap(), "--instances", "5", "--format", "csv"]);
    assert_eq!(code, 3);
    let first_fail = csv_rows(&out).into_iter().find(|r| &r[2] == "FAIL").unwrap();
    assert_eq!(&first_fail[0], "basis");
    assert!(first_fail[1].starts_with("dimension certificate"));
}

#[test]
fn exit_codes() {
    let f = germ_file("germ X\nvariables x1 x2\nweights 1\n");
    let (code, _) = run(&["basis", "--germ", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _) = run(&["classify", "--germ", "W8", "--form", "dx2^^dx3"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["basis", "--germ", "W8", "--cutoff", "15"]);
    assert_eq!(code, 4);
    let user = germ_file("germ U\nvariables x1 x2 x3\nweights 6 5 4\ngenerator x1^2 + x3^3\ngenerator x2^2 + x1*x3\nbranch C (t^6, t^5, -t^4)\n");
    let (code, _) = run(&["actions", "--germ", user.path().to_str().unwrap(), "--verify-paper"]);
    assert_eq!(code, 3);
}

#[test]
fn user_germ_gets_unverified_ruleset() {
    let user = germ_file("germ U\nvariables x1 x2 x3\nweights 6 5 4\ngenerator x1^2 + x3^3\ngenerator x2^2 + x1*x3\nbranch C (t^6, t^5, -t^4)\n");
    let (code, out) =
        run(&["classify", "--germ", user.path().to_str().unwrap(), "--coords", "0,0,0,0,0,0,0,1", "--format", "jsonl"]);
    assert_eq!(code, 0);
    assert_eq!(jsonl_rows(&out)[0]["ruleset"], "unverified");
}
