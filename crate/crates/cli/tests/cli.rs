//! End-to-end tests of the `oresharp` binary: spec'd output lines, exit
//! codes, format switches and byte-for-byte determinism.

use std::path::Path;
use std::process::{Command, Output};

fn oresharp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oresharp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_temp(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn commute_on_the_sharp_module_prints_n_2() {
    let out = oresharp(&[
        "commute",
        "--module",
        "remark_sharp",
        "--psi",
        "g*T^0",
        "--nmax",
        "8",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("n = 2\n"), "got: {text}");
    // the witness identity is printed with equal sides
    assert!(text.contains("lhs = g*T^2 + (g*t + g*t^3)*T^4 + g*t^28*T^6\n"));
    assert!(text.contains("rhs = g*T^2 + (g*t + g*t^3)*T^4 + g*t^28*T^6\n"));
}

#[test]
fn torsion_of_the_frobenius_module_is_trivial() {
    let out = oresharp(&["torsion", "--module", "trivial_tau", "--a", "t", "--N", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("size = 1\n"));
}

#[test]
fn eval_echoes_canonical_forms_and_applies_phi() {
    let out = oresharp(&[
        "eval",
        "--module",
        "remark_sharp",
        "(t^2 + 1)/(t + 1)",
        "--apply",
        "t",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("value = (1 + t^2)/(1 + t)\n"));
    assert!(text.contains("a = t\n"));
    assert!(text.contains("phi_a = T + t*T^3\n"));
}

#[test]
fn ore_product_expands_the_twist() {
    let out = oresharp(&[
        "ore",
        "--module",
        "remark_sharp",
        "--f",
        "t*T + T^3",
        "--g",
        "t*T + T^3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("product = t^4*T^2 + (t + t^27)*T^4 + T^6\n"));
}

#[test]
fn lambda_clearance_of_the_square_is_two() {
    let out = oresharp(&[
        "lambda",
        "--module",
        "remark_sharp",
        "L0 L0",
        "--clearance",
        "4",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("clearance = 2\n"));
}

#[test]
fn intersect_report_carries_all_sections() {
    let out = oresharp(&["intersect", "--experiment", "remark_sharp"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in [
        "[ENUMERATION]",
        "points: 2187",
        "[INTERSECTION]",
        "points: 81",
        "[INVARIANCE]",
        "exponent: 2",
        "[DECOMPOSITION]",
        "ok: true",
    ] {
        assert!(text.contains(line), "missing `{line}` in: {text}");
    }
}

#[test]
fn failing_decomposition_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let exp = write_temp(
        dir.path(),
        "exp.cfg",
        "module = remark_sharp\ngamma = [(1, g)]\nX = [\"y - g*x\"]\nB = 4\nnmax = 4\ndecomposition = [\"(0, 0) | (1, g) | 1\"]\n",
    );
    let out = oresharp(&["intersect", "--experiment", &exp]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("ok: false"));
    assert!(text.contains("outside_witness: ("));
}

#[test]
fn reduce_scan_counts_are_stable() {
    let first = oresharp(&["reduce", "--experiment", "reduction_scan"]);
    assert!(first.status.success());
    let text = stdout(&first);
    for line in [
        "points: 81",
        "places: 24",
        "injective: 15",
        "non_injective: 8",
        "skipped: 1",
    ] {
        assert!(text.contains(line), "missing `{line}` in: {text}");
    }
    let second = oresharp(&["reduce", "--experiment", "reduction_scan"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn intersect_output_is_deterministic_across_worker_counts() {
    let a = oresharp(&["--jobs", "1", "intersect", "--experiment", "remark_important"]);
    let b = oresharp(&["--jobs", "3", "intersect", "--experiment", "remark_important"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bundles_list_and_pass() {
    let out = oresharp(&["bundle", "--list"]);
    assert!(out.status.success());
    let names = stdout(&out);
    for b in [
        "example_lambda",
        "example_lambda_p2",
        "remark_important",
        "remark_sharp",
    ] {
        assert!(names.contains(b));
        let run = oresharp(&["bundle", b]);
        assert!(run.status.success(), "bundle {b} failed");
        let text = stdout(&run);
        assert!(text.ends_with("status: PASS\n"), "bundle {b}: {text}");
        assert!(text.contains("failed: 0"));
    }
}

#[test]
fn json_lines_mode_emits_parseable_records() {
    let out = oresharp(&[
        "--format",
        "json-lines",
        "commute",
        "--module",
        "remark_sharp",
        "--psi",
        "g*T^0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("{\"key\":\"n\",\"value\":\"2\"}\n"));
    for line in text.trim_end().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("key").is_some());
    }
}

#[test]
fn input_errors_exit_two() {
    // expression syntax, with position
    let out = oresharp(&["eval", "--module", "remark_sharp", "t + + 1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1, column 5"));
    // missing file
    let out = oresharp(&["eval", "--module", "no_such.cfg", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // wrong mode for a search-field operation
    let out = oresharp(&["torsion", "--module", "remark_sharp", "--a", "t", "--N", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("finite-mode"));
    // bundle without a name
    let out = oresharp(&["bundle"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn module_paths_resolve_relative_to_the_experiment_file() {
    let dir = tempfile::tempdir().unwrap();
    write_temp(
        dir.path(),
        "host.cfg",
        "p = 3\ne = 1\nm = 2\nmode = ratfunc\nphi_t = T + t*T^3\n",
    );
    let exp = write_temp(
        dir.path(),
        "exp.cfg",
        "module = host.cfg\ngamma = [(1, g)]\nX = [\"y - g*x\"]\nB = 2\nnmax = 2\n",
    );
    let out = oresharp(&["intersect", "--experiment", &exp]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("points: 27"));
}
