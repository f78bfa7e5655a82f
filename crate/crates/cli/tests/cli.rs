use std::fs;
use std::path::{Path, PathBuf};

use hedonic::{fixtures, GameSpec};
use hedonic_cli::{run, GameFile};
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn hedonic(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("hedonic").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn write_example(dir: &TempDir, name: &str) -> PathBuf {
    let path = dir.path().join(format!("{name}.json"));
    let r = hedonic(&["examples", "--name", name, "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn examples_round_trip_and_are_idempotent() {
    let dir = TempDir::new().unwrap();
    for name in fixtures::NAMES {
        let path = write_example(&dir, name);
        let first = fs::read_to_string(&path).unwrap();
        let loaded = GameFile::load(&path).unwrap();
        assert_eq!(loaded.game, GameSpec::Explicit(fixtures::by_name(name).unwrap()));
        write_example(&dir, name);
        assert_eq!(fs::read_to_string(&path).unwrap(), first);
        assert_eq!(hedonic(&["examples", "--name", name]).out, first);
    }
    assert_eq!(hedonic(&["examples", "--name", "nope"]).code, 2);
}

#[test]
fn prop3_file_keeps_tail_marker() {
    let text = hedonic(&["examples", "--name", "prop3"]).out;
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["tail"], "bottom");
    assert_eq!(v["preferences"][0][0], serde_json::json!([[1, 2], [1, 3], [1, 4]]));
    let e2: serde_json::Value = serde_json::from_str(&hedonic(&["examples", "--name", "example2"]).out).unwrap();
    assert_eq!(
        e2["preferences"][0],
        serde_json::json!([[[1, 3]], [[1]], [[1, 2, 3]], [[1, 2]]])
    );
    assert!(e2.get("tail").is_none());
}

#[test]
fn check_reports_restrictions() {
    let dir = TempDir::new().unwrap();
    let r = hedonic(&["check", s(&write_example(&dir, "example1"))]);
    assert_eq!(r.code, 0);
    assert!(
        r.out.contains("top responsiveness: holds\nmutuality (top): holds\n"),
        "{}",
        r.out
    );
    let r = hedonic(&["check", s(&write_example(&dir, "example2"))]);
    assert!(
        r.out
            .contains("strong bottom responsiveness: holds\nmutuality (bottom): holds\n"),
        "{}",
        r.out
    );

    let enemies = dir.path().join("enemies.json");
    fs::write(
        &enemies,
        r#"{"version":1,"kind":"enemies","n":3,"adjacency":[[2],[],[]]}"#,
    )
    .unwrap();
    let r = hedonic(&["check", s(&enemies)]);
    assert!(r.out.contains("bottom responsiveness: holds"), "{}", r.out);
    assert!(
        r.out
            .contains("mutuality (bottom): fails: mutuality (bottom) condition 1"),
        "{}",
        r.out
    );
    let r = hedonic(&["--json", "check", s(&enemies)]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["restrictions"][4]["holds"], false);
}

#[test]
fn solve_examples() {
    let dir = TempDir::new().unwrap();
    let e1 = write_example(&dir, "example1");
    let e2 = write_example(&dir, "example2");
    let r = hedonic(&["solve", "--algorithm", "tca", s(&e1)]);
    assert_eq!((r.code, r.out.lines().next()), (0, Some("1,2,3")));
    let r = hedonic(&["solve", "--algorithm", "dynamics-is", s(&e2)]);
    assert_eq!(r.out, "1,3|2\nstep 1 H=1 1|2|3 -> 1,3|2 sizes=[2,1]\n");
    let r = hedonic(&["solve", "--algorithm", "maximal-ir", s(&e2)]);
    assert_eq!(r.out, "1,3|2\n");
    let r = hedonic(&["solve", "--algorithm", "dynamics-is", s(&e1)]);
    assert_eq!(r.code, 2);
    assert!(
        r.err.starts_with("refused: precondition failed: bottom responsiveness"),
        "{}",
        r.err
    );
    let r = hedonic(&["--json", "solve", "--algorithm", "tca", s(&e1)]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["partition"], "1,2,3");
    assert_eq!(v["trace"]["rounds"][0]["component"], serde_json::json!([1, 2, 3]));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let p2 = write_example(&dir, "prop2");
    let p3 = write_example(&dir, "prop3");
    let r = hedonic(&["verify", "--concept", "sns", "--partition", "1,2|3,4", s(&p2)]);
    assert_eq!((r.code, r.out.as_str()), (1, "SNS false H=2,4 -> 1,4|2,3\n"));
    let r = hedonic(&["verify", "--concept", "sns", "--partition", "1,2|3,4", s(&p3)]);
    assert_eq!((r.code, r.out.as_str()), (0, "SNS true\n"));
    let r = hedonic(&["verify", "--concept", "po", "--partition", "1,2|3,4", s(&p3)]);
    assert_eq!(r.code, 1);
    assert!(r.out.ends_with("-> 1,4|2,3\n"), "{}", r.out);
    assert_eq!(
        hedonic(&["verify", "--concept", "xx", "--partition", "1,2|3,4", s(&p3)]).code,
        2
    );
    assert_eq!(
        hedonic(&["verify", "--concept", "ns", "--partition", "1,2|3", s(&p3)]).code,
        2
    );
    assert_eq!(
        hedonic(&["verify", "--concept", "ns", "--partition", "1,2|3,x", s(&p3)]).code,
        2
    );
    assert_eq!(
        hedonic(&["verify", "--concept", "ns", "--partition", "1|2", "missing.json"]).code,
        2
    );
}

#[test]
fn survey_reports_counts() {
    let dir = TempDir::new().unwrap();
    let r = hedonic(&["--json", "survey", s(&write_example(&dir, "prop2"))]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    let count = |tag: &str| {
        v["concepts"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["concept"] == tag)
            .unwrap()["count"]
            .as_u64()
            .unwrap()
    };
    assert_eq!((count("SNS"), count("SC")), (0, 2));
    let r = hedonic(&["survey", s(&write_example(&dir, "example1"))]);
    assert!(r.out.contains("\nPERFECT       0"), "{}", r.out);
    assert!(r.out.contains("hierarchy violations: none"));
    let r = hedonic(&["survey", s(&write_example(&dir, "example2"))]);
    assert!(!r.out.contains("\nSNS           0"), "{}", r.out);
}

#[test]
fn survey_caps_and_override() {
    let dir = TempDir::new().unwrap();
    let big = dir.path().join("big.json");
    let file = GameFile::new(hedonic::classes::random_game(hedonic::GameKind::Ashg, 8, 1).unwrap());
    fs::write(&big, file.to_json()).unwrap();
    let r = hedonic(&["survey", s(&big)]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("--max-n-override"), "{}", r.err);
}

#[test]
fn malformed_files_are_rejected() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"version":1,"kind":"explicit","n":2,"preferences":[[[[2]]],[[[2]]]],"tail":"bottom"}"#,
    )
    .unwrap();
    let r = hedonic(&["check", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("preferences[0][0][0]"), "{}", r.err);
}
