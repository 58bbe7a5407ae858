use std::process::{Command, Output};

use slicekit::funcspec::slice_from_spec;
use slicekit::io::{read_cube, read_slice};
use slicekit::{make_domain, CubeFunction};

fn slice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slice")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = slice(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn shift_prints_the_expansion_tree() {
    let text = stdout(&["shift", "--n", "8", "--tuple", "(2,8)(6,7)"]);
    assert!(text.starts_with("D(2,8)(6,7) f(x^id)  m = 1 + 4 + 28 = 33"));
    assert_eq!(text.matches("[leaf]").count(), 10);
}

#[test]
fn spectrum_reports_exact_level_weights() {
    let text = stdout(&["spectrum", "--n", "6", "--ell", "3", "--f", "and:1,2"]);
    assert!(text.contains("level 0: 1/25 (0.04)"));
    assert!(text.contains("total: 1/5 (0.2)"));
}

#[test]
fn spectrum_without_ell_uses_the_cube() {
    let text = stdout(&["spectrum", "--n", "4", "--f", "parity:1,2"]);
    assert!(text.contains("level 2: 1/4 (0.25)"));
}

#[test]
fn approximate_keeps_a_dictator() {
    let text = stdout(&["approximate", "--n", "9", "--ell", "3", "--k", "1", "--f", "dictator:1"]);
    assert!(text.contains("distance: 0/1 (0)"));
    assert!(text.contains("g equals input: true"));
}

#[test]
fn tail_is_exact() {
    let text = stdout(&["tail", "--n", "10", "--ell", "4", "--s", "5", "--t", "1"]);
    assert!(text.starts_with("tail: 1/42 "));
}

#[test]
fn verify_passes_on_a_small_slice() {
    let text = stdout(&["verify", "--suite", "constructor", "--n", "6", "--ell", "3"]);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn errors_use_exit_code_two() {
    let out = slice(&["derive", "--n", "6", "--ell", "3", "--f", "dictator:9", "--tuple", "(1,2)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coordinate 9"));
    assert_eq!(slice(&["spectrum", "--n", "6", "--ell", "3", "--f", "bogus:1"]).status.code(), Some(2));
    assert_eq!(slice(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn written_files_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let f_path = dir.path().join("f.json");
    let f_arg = f_path.to_str().unwrap();
    stdout(&["approximate", "--n", "6", "--ell", "3", "--k", "1", "--f", "random-bool:2", "--out", f_arg]);
    let g = read_slice(&f_path).unwrap();
    let d = make_domain(6, 3).unwrap();
    let f = slice_from_spec("random-bool:2", &d).unwrap();
    assert_eq!(g, slicekit::approximate(&f, 1).unwrap().g);

    // A written file is usable as input again.
    let spec = format!("file:{f_arg}");
    let again = stdout(&["approximate", "--n", "6", "--ell", "3", "--k", "1", "--f", &spec]);
    assert!(again.contains("g equals input: true"));

    let e_path = dir.path().join("e.json");
    let c_path = dir.path().join("c.json");
    stdout(&["embed", "--n", "3", "--m", "8", "--k", "1", "--f", "maj", "--out", e_path.to_str().unwrap()]);
    stdout(&["pullback", "--n", "3", "--f", e_path.to_str().unwrap(), "--out", c_path.to_str().unwrap()]);
    assert_eq!(read_cube(&c_path).unwrap(), CubeFunction::majority(3).unwrap());
}
