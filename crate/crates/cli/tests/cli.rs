use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn planesat(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planesat")).args(args).current_dir(dir).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = planesat(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

const PIGEONHOLE: &str = "p cnf 6 9\n1 2 0\n3 4 0\n5 6 0\n-1 -3 0\n-1 -5 0\n-3 -5 0\n-2 -4 0\n-2 -6 0\n-4 -6 0\n";

#[test]
fn encode_writes_dimacs_and_map() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["encode", "--order", "2", "--out", "o2.cnf"]);
    let cnf = std::fs::read_to_string(dir.path().join("o2.cnf")).unwrap();
    assert!(cnf.starts_with("p cnf "));
    let map = std::fs::read_to_string(dir.path().join("o2.map")).unwrap();
    assert!(map.lines().next().unwrap().starts_with("v 1 = "));
}

#[test]
fn group_sizes_of_synthetic_cases() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ok(dir.path(), &["group", "--case", &data("pg3.case")]).contains("group size 24"));
    ok(dir.path(), &["group", "--case", &data("pg5.case"), "--out", "g.txt"]);
    let text = std::fs::read_to_string(dir.path().join("g.txt")).unwrap();
    assert_eq!(text.lines().count(), 120);
}

#[test]
fn enumerate_and_label_first_block() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["enumerate", "--case", &data("pg5.case"), "--workdir", "w", "--out", "reps.txt"]);
    assert!(out.contains("8 solutions, 4 up to isomorphism"));
    assert_eq!(std::fs::read_to_string(dir.path().join("reps.txt")).unwrap().lines().count(), 4);

    ok(dir.path(), &["label", "--case", &data("pg5.case"), "--workdir", "lw", "--max-instances", "2"]);
    assert!(dir.path().join("lw/label0002.cnf").is_file());
    assert!(!dir.path().join("lw/label0003.cnf").exists());
    assert!(dir.path().join("lw/labels.manifest").is_file());
}

#[test]
fn cube_conquer_check_on_pigeonhole() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("php.cnf"), PIGEONHOLE).unwrap();
    ok(dir.path(), &["cube", "--cnf", "php.cnf", "--cutoff", "2", "--workdir", "w"]);
    let cubes = "w/cubes.icnf";
    assert!(ok(dir.path(), &["conquer", "--cnf", "php.cnf", "--cubes", cubes, "--workdir", "w"])
        .contains("aggregate UNSAT"));
    let out = ok(dir.path(), &["check", "--cnf", "php.cnf", "--cubes", cubes, "--workdir", "w"]);
    assert!(out.contains("cube split VERIFIED"));
    assert!(!out.contains("REJECTED"));
}

#[test]
fn pipeline_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["pipeline", "--order", "3", "--workdir", "p", "--timings", "omit"]);
    assert!(out.contains("result SAT"));
    let csv = std::fs::read_to_string(dir.path().join("p/results.csv")).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap().split(',').next(), Some("order3"));
    assert!(dir.path().join("p/order3/model.txt").is_file());
    let table = ok(dir.path(), &["report", "p/results.csv"]);
    assert!(table.lines().last().unwrap().starts_with("total"));
}

#[test]
fn pipeline_on_a_case_with_the_block_method() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["pipeline", "--case", &data("pg5.case"), "--method", "block", "--workdir", "p"]);
    assert!(out.contains("result SAT"));
    assert!(dir.path().join("p/labels.manifest").is_file());
}

#[test]
fn rejects_conflicting_targets() {
    let dir = tempfile::tempdir().unwrap();
    let out = planesat(dir.path(), &["pipeline", "--order", "3", "--case", "x.case"]);
    assert!(!out.status.success());
    let out = planesat(dir.path(), &["pipeline", "--order", "3", "--no-check", "--checker-cmd", "x"]);
    assert!(!out.status.success());
}
