use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const CANONICAL: &str = r#"{ "generators": { "a": [["t", "0"], ["0", "1/t"]], "b": [["1", "1"], ["1", "2"]] }, "words": ["abAB"] }"#;
const CONSTANT: &str =
    r#"{ "generators": { "a": [["2", "1"], ["1", "1"]], "b": [["1", "1"], ["0", "1"]] } }"#;
const SQUARE: &str = "w x 1\nx y 1\ny z 1\nz w 1\nw y 2\nx z 2\n";

fn file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_treelimits"));
    cmd.args(args).env_remove("TREELIMITS_CONFIG");
    if let Some(c) = config {
        cmd.env("TREELIMITS_CONFIG", c);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn limitlen_canonical_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = file(dir.path(), "c.json", CANONICAL);
    let out = dir.path().join("r.json");
    let o = run(
        &[
            "limitlen",
            spec.to_str().unwrap(),
            "--radius",
            "2",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("abAB"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["radius"], 2);
}

#[test]
fn limitlen_constant_has_no_blow_up() {
    let dir = tempfile::tempdir().unwrap();
    let spec = file(dir.path(), "k.json", CONSTANT);
    let o = run(&["limitlen", spec.to_str().unwrap(), "--radius", "2"], None);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("failed check"));
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let spec = file(dir.path(), "c.json", CANONICAL);
    let broken = file(dir.path(), "b.json", "{ \"generators\": ");
    for args in [
        vec!["limitlen", "/nonexistent/spec.json"],
        vec!["limitlen", broken.to_str().unwrap()],
        vec!["limitlen", spec.to_str().unwrap(), "--end", "t0=3"],
        vec!["newton", "y^2 +* z"],
    ] {
        let o = run(&args, None);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(stderr(&o).starts_with("error:"), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn treecheck_square_is_not_a_tree() {
    let dir = tempfile::tempdir().unwrap();
    let m = file(dir.path(), "sq.txt", SQUARE);
    let o = run(&["treecheck", "--metric", m.to_str().unwrap()], None);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("w x y z"));
}

#[test]
fn treecheck_canonical_writes_tree() {
    let dir = tempfile::tempdir().unwrap();
    let spec = file(dir.path(), "c.json", CANONICAL);
    let tree = dir.path().join("t.txt");
    let o = run(
        &[
            "treecheck",
            spec.to_str().unwrap(),
            "--radius",
            "2",
            "--tree-out",
            tree.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(!fs::read_to_string(tree).unwrap().is_empty());
}

#[test]
fn center_and_newton_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let spec = file(dir.path(), "c.json", CANONICAL);
    let o = run(&["center", spec.to_str().unwrap(), "--t", "100"], None);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["newton", "(y - z^2)*(y - z^5)", "--numeric"], None);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(
        stdout(&o).contains("exponents: 2 (x1), 5 (x1)"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn compare_reports_disagreement() {
    let dir = tempfile::tempdir().unwrap();
    let spec = file(dir.path(), "c.json", CANONICAL);
    let o = run(&["compare", spec.to_str().unwrap(), "--t", "1e6"], None);
    assert_eq!(code(&o), 3);
}

#[test]
fn config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let spec = file(dir.path(), "c.json", CANONICAL);
    let out = dir.path().join("r.json");
    let cfg = file(dir.path(), "c.toml", "radius = 1\n");
    let o = run(
        &[
            "limitlen",
            spec.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        Some(&cfg),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["radius"], 1);

    let bad = file(dir.path(), "bad.toml", "radius = \"three\"\n");
    let o = run(&["limitlen", spec.to_str().unwrap()], Some(&bad));
    assert_eq!(code(&o), 1);
}
