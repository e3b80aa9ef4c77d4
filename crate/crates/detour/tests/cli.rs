//! End-to-end tests of the `detour` binary: exit codes, file round trips,
//! determinism, and tamper detection.

use std::path::Path;
use std::process::{Command, Output};

fn detour(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detour"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn demo_writes_every_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = detour(&["demo"], dir.path());
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    for stem in ["single", "multi", "lattice", "corollary", "chebyshev"] {
        assert!(dir.path().join(format!("{stem}.problem.json")).exists(), "{stem} problem");
        assert!(dir.path().join(format!("{stem}.result.json")).exists(), "{stem} result");
        assert!(dir.path().join(format!("{stem}.svg")).exists(), "{stem} svg");
    }
    // The 1D counterexample is written but deliberately not repairable.
    assert!(dir.path().join("line-negative.problem.json").exists());
    assert!(!dir.path().join("line-negative.result.json").exists());
}

#[test]
fn repair_then_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&detour(&["demo", "multi"], dir.path())), 0);
    let out = detour(
        &["repair", "multi.problem.json", "-o", "out.json", "--svg", "out.svg"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("out.svg").exists());
    let check = detour(&["check", "multi.problem.json", "out.json"], dir.path());
    assert_eq!(code(&check), 0, "stderr: {}", String::from_utf8_lossy(&check.stderr));
    assert!(String::from_utf8_lossy(&check.stdout).contains("check: pass"));
}

#[test]
fn repair_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&detour(&["demo", "multi"], dir.path())), 0);
    let first = detour(&["repair", "multi.problem.json", "-o", "a.json"], dir.path());
    let second = detour(&["repair", "multi.problem.json", "-o", "b.json"], dir.path());
    assert_eq!(code(&first), 0);
    assert_eq!(code(&second), 0);
    assert_eq!(first.stdout_line_set(), second.stdout_line_set());
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b, "result files must be byte-identical");
}

trait StdoutLines {
    fn stdout_line_set(&self) -> Vec<String>;
}

impl StdoutLines for Output {
    /// Stdout lines with the output path (the one varying argument) blanked.
    fn stdout_line_set(&self) -> Vec<String> {
        String::from_utf8_lossy(&self.stdout)
            .lines()
            .filter(|l| !l.starts_with("wrote:"))
            .map(|l| l.to_string())
            .collect()
    }
}

#[test]
fn rejected_hypotheses_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&detour(&["demo", "line-negative"], dir.path())), 0);
    let out = detour(
        &["repair", "line-negative.problem.json", "-o", "out.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(!dir.path().join("out.json").exists());
}

#[test]
fn parse_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    assert_eq!(code(&detour(&["repair", "bad.json", "-o", "out.json"], dir.path())), 1);
    assert_eq!(code(&detour(&["repair", "missing.json", "-o", "o.json"], dir.path())), 1);
    assert_eq!(code(&detour(&["repair", "--no-such-flag"], dir.path())), 1);
    assert_eq!(code(&detour(&["--help"], dir.path())), 0);
    assert_eq!(code(&detour(&["repair", "--help"], dir.path())), 0);
}

#[test]
fn tampered_radii_fail_the_check() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&detour(&["demo", "multi"], dir.path())), 0);
    let result_path = dir.path().join("multi.result.json");
    let text = std::fs::read_to_string(&result_path).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();

    // Nudge the stored working radius: the check recomputes it and refuses.
    value["radii"][0]["working"] = serde_json::json!(0.6);
    std::fs::write(&result_path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    let out = detour(&["check", "multi.problem.json", "multi.result.json"], dir.path());
    assert_eq!(code(&out), 3, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("working radius"));

    // A working radius at or above the strict bound is refused outright.
    value["radii"][0]["working"] = serde_json::json!(1.0);
    std::fs::write(&result_path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    let out = detour(&["check", "multi.problem.json", "multi.result.json"], dir.path());
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("strict bound"));
}

#[test]
fn tampered_pieces_fail_the_check() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&detour(&["demo", "multi"], dir.path())), 0);
    let result_path = dir.path().join("multi.result.json");
    let text = std::fs::read_to_string(&result_path).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();

    // Drag one interior joint off the curve: the stored pieces no longer
    // line up, so reassembly fails.
    value["pieces"][0]["to"][1] = serde_json::json!(0.25);
    std::fs::write(&result_path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    let out = detour(&["check", "multi.problem.json", "multi.result.json"], dir.path());
    assert_eq!(code(&out), 3);
}

#[test]
fn check_against_the_wrong_problem_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&detour(&["demo", "multi"], dir.path())), 0);
    assert_eq!(code(&detour(&["demo", "single"], dir.path())), 0);
    let out = detour(
        &["check", "single.problem.json", "multi.result.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 3, "a result for another instance must not pass");
}

#[test]
fn iterative_mode_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&detour(&["demo", "multi"], dir.path())), 0);
    let out = detour(
        &["repair", "multi.problem.json", "-o", "iter.json", "--mode", "iterative"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let check = detour(&["check", "multi.problem.json", "iter.json"], dir.path());
    assert_eq!(code(&check), 0, "stderr: {}", String::from_utf8_lossy(&check.stderr));
}

#[test]
fn widest_extent_replaces_more_of_the_path() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&detour(&["demo", "single"], dir.path())), 0);
    assert_eq!(
        code(&detour(
            &["repair", "single.problem.json", "-o", "wide.json", "--splice-extent", "widest"],
            dir.path(),
        )),
        0
    );
    let tight: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("single.result.json")).unwrap(),
    )
    .unwrap();
    let wide: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("wide.json")).unwrap())
            .unwrap();
    let entry = |v: &serde_json::Value| v["schedule"][0]["entry"].as_f64().unwrap();
    let exit = |v: &serde_json::Value| v["schedule"][0]["exit"].as_f64().unwrap();
    // One obstacle, one crossing on each side: the windows coincide here,
    // but the wide window can never be narrower.
    assert!(entry(&wide) <= entry(&tight));
    assert!(exit(&wide) >= exit(&tight));
}
