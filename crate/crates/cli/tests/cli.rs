use std::fs;
use std::path::Path;
use std::process::Command;

use lofs_cli::{run, Outcome};

const FIXTURES: &[(&str, &str)] = &[
    (
        "two.json",
        r#"{"name": "two", "quantale": "boolean", "monad": "identity", "carrier": ["0", "1"],
            "structure": [["0", "0", "1"], ["0", "1", "1"], ["1", "1", "1"]], "default": "bot"}"#,
    ),
    (
        "one.json",
        r#"{"name": "one", "quantale": "boolean", "monad": "identity", "carrier": ["p"],
            "structure": [["p", "p", "1"]], "default": "bot"}"#,
    ),
    ("top.json", r#"{"name": "top", "source": "one", "target": "two", "map": {"p": "1"}}"#),
    ("collapse.json", r#"{"name": "collapse", "source": "two", "target": "one", "map": {"0": "p", "1": "p"}}"#),
    ("id1.json", r#"{"name": "id1", "source": "one", "target": "one", "map": {"p": "p"}}"#),
    ("sq.json", r#"{"name": "sq", "f": "collapse", "g": "id1", "u": "collapse", "v": "id1"}"#),
    ("sq2.json", r#"{"name": "sq2", "f": "top", "g": "collapse", "u": "top", "v": "collapse"}"#),
];

fn corpus() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in FIXTURES {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

fn tvcat(dir: &Path, args: &[&str]) -> Outcome {
    let seed = dir.to_str().unwrap();
    run(["tvcat", "--seed-corpus", seed].iter().chain(args))
}

#[test]
fn classify_order_embedding() {
    let dir = corpus();
    let out = tvcat(dir.path(), &["classify", "top"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "L: yes (fully faithful, dense); R: no\n");
    let out = tvcat(dir.path(), &["classify", "collapse"]);
    assert_eq!(out.stdout, "L: no (not fully faithful, dense); R: yes\n");
}

#[test]
fn classify_json() {
    let dir = corpus();
    let out = tvcat(dir.path(), &["--output", "json", "classify", "top"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["L"], true);
    assert_eq!(v["R"], false);
}

#[test]
fn lift_outside_l_exits_1_with_reason() {
    let dir = corpus();
    let out = tvcat(dir.path(), &["lift", "sq"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("is not in L (not fully faithful)"), "{}", out.stderr);
}

#[test]
fn lift_solves_square() {
    let dir = corpus();
    let out = tvcat(dir.path(), &["lift", "sq2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "canonical filler: 0 ↦ 0, 1 ↦ 1\n");
}

#[test]
fn factor_output_passes_check() {
    let dir = corpus();
    let out_dir = dir.path().join("out");
    let out = tvcat(dir.path(), &["factor", "top", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("K = {([0],0), ([0],1), ([1],1)}"), "{}", out.stdout);
    for f in ["one", "two", "Phione", "K", "L", "R", "q"] {
        assert!(out_dir.join(format!("{f}.json")).exists(), "{f}");
    }
    let out = run(["tvcat", "check", out_dir.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn presheaves_of_chain() {
    let dir = corpus();
    let out = tvcat(dir.path(), &["presheaves", "two"]);
    assert_eq!(out.stdout, "[0|0]\n[1|0]\n[1|1]\n");
    let out = tvcat(dir.path(), &["presheaves", "two", "--class", "representable"]);
    assert_eq!(out.stdout.lines().count(), 2);
}

#[test]
fn malformed_input_exits_2() {
    let dir = corpus();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, FIXTURES[0].1.replace(r#"["0", "1", "1"]"#, r#"["0", "7", "1"]"#)).unwrap();
    let out = run(["tvcat", "check", bad.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unknown carrier element `7`"), "{}", out.stderr);
    let out = run(["tvcat", "check", "/nonexistent/x.json"]);
    assert_eq!(out.code, 2);
}

#[test]
fn law_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("nt.json");
    fs::write(
        &p,
        r#"{"quantale": "boolean", "monad": "identity", "carrier": ["0", "1", "2"],
            "structure": [["0","0","1"],["1","1","1"],["2","2","1"],["0","1","1"],["1","2","1"]], "default": "bot"}"#,
    )
    .unwrap();
    let out = run(["tvcat", "check", p.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("witness: (0, 1, 2)"), "{}", out.stdout);
}

#[test]
fn size_cap_exits_3() {
    let dir = corpus();
    let out = tvcat(dir.path(), &["--max-space", "2", "presheaves", "two"]);
    assert_eq!(out.code, 3, "{}", out.stderr);
}

#[test]
fn size_cap_from_env() {
    let dir = corpus();
    let out = Command::new(env!("CARGO_BIN_EXE_tvcat"))
        .args(["--seed-corpus", dir.path().to_str().unwrap(), "presheaves", "two"])
        .env("TVCAT_MAX_SPACE", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_class_is_input_error() {
    let dir = corpus();
    assert_eq!(tvcat(dir.path(), &["presheaves", "two", "--class", "nope"]).code, 2);
}

#[test]
fn verify_paper_at_size_one() {
    let out = run(["tvcat", "verify-paper", "--max-size", "1"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("summary: 14 rows, 14 pass, 0 fail"), "{}", out.stdout);
}

#[test]
fn shipped_models_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models");
    let out = run(["tvcat", "check", dir.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    let out = tvcat(&dir, &["lift", "not_in_l"]);
    assert_eq!(out.code, 1);
}
