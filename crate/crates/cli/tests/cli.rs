//! End-to-end command tests against the built binary: exit codes, output
//! shape, JSON determinism and document round-trips.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rigidity"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn trace_field_modular() {
    let out = run(&["trace-field", "modular"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("trace field: Q"));
}

#[test]
fn arithmetic_takeuchi_a_is_true() {
    let out = run(&["arithmetic", "takeuchi-A"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("arithmetic: true"));
}

#[test]
fn arithmetic_demo_group_is_false_with_exit_1() {
    let out = run(&["arithmetic", "conj-sqrt2-demo"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("arithmetic: false"));
}

#[test]
fn mod_embed_check_finds_violation() {
    let out = run(&["mod-embed-check", "conj-sqrt2-demo"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violation"));
    assert!(stdout(&out).contains("no modular embedding exists"));
}

#[test]
fn mod_embed_check_vacuous_for_modular() {
    let out = run(&["mod-embed-check", "modular"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn reduce_modular_mod_5() {
    let out = run(&["reduce", "modular", "-p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("image order 60 of 60"));
    assert!(text.contains("surjective: true"));
}

#[test]
fn reduce_bad_prime_exits_2() {
    let out = run(&["reduce", "takeuchi-A", "-p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("bad set S"));
}

#[test]
fn rigidity_witness_word() {
    let out = run(&[
        "rigidity",
        "takeuchi-A",
        "takeuchi-B",
        "--maxlen",
        "2",
        "--pmax",
        "31",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("x - 9 vs x - 36"));
    assert!(text.contains("congruence preservation contradicted"));
}

#[test]
fn rigidity_self_comparison_agrees() {
    let out = run(&["rigidity", "modular", "modular", "--maxlen", "2", "--pmax", "13"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("agree"));
}

#[test]
fn local_commands() {
    let out = run(&["local", "ram", "-q", "3", "-r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("order 4, cyclic: true"));

    let out = run(&["local", "unram", "-q", "5", "-r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("15000"));

    let out = run(&["crt", "--field", "Q", "--ideals", "3,5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("order 2880"));
    assert!(text.contains("(Z/2)^1"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let a = run(&["--json", "trace-field", "takeuchi-A"]);
    let b = run(&["--json", "trace-field", "takeuchi-A"]);
    assert_eq!(out_bytes(&a), out_bytes(&b));
    let a = run(&["--json", "local", "ram", "-q", "5", "-r", "1"]);
    let b = run(&["--json", "local", "ram", "-q", "5", "-r", "1"]);
    assert_eq!(out_bytes(&a), out_bytes(&b));
}

fn out_bytes(o: &Output) -> &[u8] {
    assert!(o.status.success(), "command failed: {}", String::from_utf8_lossy(&o.stderr));
    &o.stdout
}

const SAMPLE_DOC: &str = r#"{
  "label": "sample",
  "field": { "minpoly": ["-2", "0", "1"], "root_selector": ["1", "2"] },
  "generators": [
    [["0", "1"], ["1", "0"], ["1", "0"], ["0", "1"]],
    [["0", "1"], ["1", "1"], ["-1", "1"], ["0", "1"]]
  ],
  "labels": ["a", "b"]
}"#;

#[test]
fn document_from_file_and_stdin() {
    let dir = std::env::temp_dir().join("rigidity-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sample.json");
    std::fs::write(&path, SAMPLE_DOC).unwrap();
    let out = run(&["trace-field", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("degree 2"));

    // same document over standard input
    let mut child = bin()
        .args(["trace-field", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(SAMPLE_DOC.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn document_rejects_floats_and_bad_determinant() {
    let float_doc = SAMPLE_DOC.replace("\"0\", \"1\"", "\"0.0\", \"1\"");
    let dir = std::env::temp_dir().join("rigidity-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("float.json");
    std::fs::write(&path, float_doc).unwrap();
    let out = run(&["trace-field", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let bad_det = r#"{
      "field": { "minpoly": ["-1", "1"], "root_selector": ["0", "2"] },
      "generators": [[["1"], ["1"], ["0"], ["2"]]]
    }"#;
    let path = dir.join("baddet.json");
    std::fs::write(&path, bad_det).unwrap();
    let out = run(&["trace-field", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identify_roundtrip_via_files() {
    // build a reduction of the modular group mod 5 by hand: images of t, s
    let hom = r#"{ "p": 5, "f": 1, "images": [
        [[1], [1], [0], [1]],
        [[0], [1], [4], [0]]
    ] }"#;
    let dir = std::env::temp_dir().join("rigidity-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hom.json");
    std::fs::write(&path, hom).unwrap();
    let out = run(&["identify", "modular", "--hom", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("(5)"));
}

#[test]
fn spectrum_modular_small() {
    let out = run(&["spectrum", "modular", "--pmax", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("field degree: 1"));
    for p in ["5", "7", "11", "13"] {
        assert!(text.contains(&format!("p = {:>3}", p)), "{}", text);
    }
}

#[test]
fn document_roundtrip_is_canonical() {
    use rigidity_cli::document::GroupDocument;
    let doc = GroupDocument::parse(SAMPLE_DOC).unwrap();
    let rep = doc.build().unwrap();
    let canon1 = GroupDocument::from_rep(&rep, doc.label.clone()).to_canonical_json();
    // parse the canonical form, rebuild, re-serialise: byte identical
    let doc2 = GroupDocument::parse(&canon1).unwrap();
    let rep2 = doc2.build().unwrap();
    let canon2 = GroupDocument::from_rep(&rep2, doc2.label.clone()).to_canonical_json();
    assert_eq!(canon1, canon2);
    // built-ins serialise deterministically too
    let m = rigidity_core::corpus::modular().unwrap();
    let c1 = GroupDocument::from_rep(&m, Some("modular".into())).to_canonical_json();
    let c2 = GroupDocument::from_rep(&m, Some("modular".into())).to_canonical_json();
    assert_eq!(c1, c2);
}

#[test]
fn rigidity_conjugate_pair_prints_conjugator() {
    use rigidity_cli::document::GroupDocument;
    use rigidity_core::fuchsian::{FuchsianRep, Mat2};
    let g = rigidity_core::corpus::modular().unwrap();
    let q = g.field.clone();
    let c = Mat2::new(q.from_i64(1), q.from_i64(1), q.from_i64(0), q.from_i64(1));
    let c_inv = c.inv_det1();
    let gens2: Vec<Mat2> = g.gens.iter().map(|m| c.mul(m).mul(&c_inv)).collect();
    let rep2 = FuchsianRep {
        field: q,
        gens: gens2,
        labels: g.labels.clone(),
        relators: g.relators.clone(),
        tfc_by_construction: false,
    };
    let doc = GroupDocument::from_rep(&rep2, Some("conjugated".into()));
    let dir = std::env::temp_dir().join("rigidity-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("conjugated.json");
    std::fs::write(&path, doc.to_canonical_json()).unwrap();
    let out = run(&[
        "rigidity",
        "modular",
        path.to_str().unwrap(),
        "--maxlen",
        "2",
        "--pmax",
        "13",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("agree"));
    assert!(text.contains("conjugator"));
}
