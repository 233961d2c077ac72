//! End-to-end checks of the zipbench binary: output formats, flag
//! validation with exit codes, on-disk determinism, and CSV plumbing.

use std::path::Path;
use std::process::{Command, Output};
use std::str::FromStr;

use zipbench::bench::{parse_csv, Task, Variant};
use zipbench::typecalc::{differentiate, normalize, TypeExpr};
use zipbench::workload::Scenario;

fn zipbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zipbench"))
        .args(args)
        .output()
        .expect("run the zipbench binary")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_validation_error(out: &Output, flag: &str) {
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(out));
    assert!(
        stderr_of(out).contains(flag),
        "stderr does not name {flag}: {}",
        stderr_of(out)
    );
}

fn gen_uniform(dir: &Path, count: u64) -> (std::path::PathBuf, std::path::PathBuf) {
    let prefix = dir.join("work");
    let out = zipbench(&[
        "gen",
        "--depth",
        "4",
        "--count",
        &count.to_string(),
        "--scenario",
        "uniform",
        "--out-prefix",
        prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "gen failed: {}", stderr_of(&out));
    (dir.join("work.cursor.cmds"), dir.join("work.root.cmds"))
}

// ---------------------------------------------------------------------------
// derive
// ---------------------------------------------------------------------------

#[test]
fn derive_prints_a_parseable_derivative() {
    let expr = "(+ (* x x) (* a x))";
    let out = zipbench(&["derive", "--expr", expr, "--var", "x"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let printed = TypeExpr::from_str(stdout_of(&out).trim()).expect("output parses back");
    let expected = differentiate(&TypeExpr::from_str(expr).unwrap(), "x").unwrap();
    assert_eq!(normalize(&printed), normalize(&expected));
}

#[test]
fn derive_normalize_flag_prints_the_normal_form() {
    let expr = "(+ (* x x) (* a x))";
    let out = zipbench(&["derive", "--expr", expr, "--var", "x", "--normalize"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let printed = TypeExpr::from_str(stdout_of(&out).trim()).expect("output parses back");
    let expected =
        normalize(&differentiate(&TypeExpr::from_str(expr).unwrap(), "x").unwrap()).into_expr();
    assert_eq!(printed, expected);
}

#[test]
fn derive_rejects_malformed_expressions() {
    let out = zipbench(&["derive", "--expr", "(+ 1", "--var", "x"]);
    assert_validation_error(&out, "--expr");
}

#[test]
fn quiet_suppresses_all_non_error_output() {
    let out = zipbench(&["derive", "--expr", "(* a x)", "--var", "x", "--quiet"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "");
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = zipbench(&[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!stderr_of(&out).is_empty());
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

#[test]
fn gen_writes_the_same_bytes_for_the_same_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = |prefix: &str, seed: &str| {
        let prefix = dir.path().join(prefix);
        let out = zipbench(&[
            "gen",
            "--depth",
            "5",
            "--count",
            "200",
            "--scenario",
            "bottom",
            "--seed",
            seed,
            "--out-prefix",
            prefix.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "gen failed: {}", stderr_of(&out));
        (
            std::fs::read(prefix.with_extension("cursor.cmds")).unwrap(),
            std::fs::read(prefix.with_extension("root.cmds")).unwrap(),
        )
    };
    let (cursor_a, root_a) = args("a", "7");
    let (cursor_b, root_b) = args("b", "7");
    let (cursor_c, _) = args("c", "8");
    assert_eq!(cursor_a, cursor_b);
    assert_eq!(root_a, root_b);
    assert_ne!(cursor_a, cursor_c);
}

#[test]
fn gen_rejects_an_unknown_scenario() {
    let out = zipbench(&[
        "gen",
        "--depth",
        "4",
        "--count",
        "10",
        "--scenario",
        "sideways",
        "--out-prefix",
        "unused",
    ]);
    assert_validation_error(&out, "--scenario");
}

#[test]
fn gen_rejects_depth_zero() {
    let out = zipbench(&[
        "gen",
        "--depth",
        "0",
        "--count",
        "10",
        "--scenario",
        "uniform",
        "--out-prefix",
        "unused",
    ]);
    assert_validation_error(&out, "--depth");
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

#[test]
fn bench_measures_a_stream_and_appends_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (cursor_file, _) = gen_uniform(dir.path(), 50);
    let csv = dir.path().join("runs.csv");
    for _ in 0..2 {
        let out = zipbench(&[
            "bench",
            "--task",
            "traversal",
            "--variant",
            "persistent-cursor",
            "--input",
            cursor_file.to_str().unwrap(),
            "--scenario",
            "uniform",
            "--depth",
            "4",
            "--time-limit",
            "0.001",
            "--min-iters",
            "2",
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "bench failed: {}", stderr_of(&out));
        assert!(stdout_of(&out).contains("mean"), "stdout: {}", stdout_of(&out));
    }

    let records = parse_csv(&std::fs::read_to_string(&csv).unwrap()).expect("csv parses");
    assert_eq!(records.len(), 2);
    for record in &records {
        assert_eq!(record.task, Task::Traversal);
        assert_eq!(record.variant, Variant::PersistentCursor);
        assert_eq!(record.scenario, Some(Scenario::Uniform));
        assert_eq!(record.size, 4, "traversal records carry the tree depth");
        assert!(record.iterations >= 2);
        assert!(record.mean_ns > 0.0);
    }
}

#[test]
fn bench_times_insertion_without_an_input_file() {
    let out = zipbench(&[
        "bench",
        "--task",
        "insertion",
        "--variant",
        "mutable-cursor",
        "--count",
        "100",
        "--time-limit",
        "0.001",
        "--min-iters",
        "2",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("mean"));
}

#[test]
fn bench_requires_count_for_insertion() {
    let out = zipbench(&["bench", "--task", "insertion", "--variant", "mutable-root"]);
    assert_validation_error(&out, "--count");
}

#[test]
fn bench_rejects_a_stream_in_the_other_encoding() {
    let dir = tempfile::tempdir().unwrap();
    let (cursor_file, _) = gen_uniform(dir.path(), 50);
    let out = zipbench(&[
        "bench",
        "--task",
        "traversal",
        "--variant",
        "persistent-root",
        "--input",
        cursor_file.to_str().unwrap(),
    ]);
    assert_validation_error(&out, "--input");
}

#[test]
fn bench_cross_checks_the_scenario_flag_against_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let (cursor_file, _) = gen_uniform(dir.path(), 50);
    let out = zipbench(&[
        "bench",
        "--task",
        "traversal",
        "--variant",
        "persistent-cursor",
        "--input",
        cursor_file.to_str().unwrap(),
        "--scenario",
        "bottom",
    ]);
    assert_validation_error(&out, "--scenario");
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[test]
fn verify_runs_a_named_suite() {
    let out = zipbench(&["verify", "--suite", "typecalc"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("typecalc"), "stdout: {}", stdout_of(&out));
}

#[test]
fn verify_rejects_an_unknown_suite() {
    let out = zipbench(&["verify", "--suite", "nonsense"]);
    assert_validation_error(&out, "--suite");
}
