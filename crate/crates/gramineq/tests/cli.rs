//! Integration tests for the `gramineq` binary: exit codes, determinism,
//! the fixture ladder against the naive oracle, and counterexample replay.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::naive::Naive;
use gramineq::exponents::{BranchSelector, ConjugatePair, HolderParams};
use gramineq::report::{EvalReport, InstanceFile};
use gramineq::verify::audit::AuditReport;
use gramineq::verify::FuzzSummary;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gramineq"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/sample_instance.json")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

#[test]
fn eval_fixture_matches_naive_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "eval",
            "--instance",
            fixture().to_str().unwrap(),
            "--p",
            "2.5",
            "--printed",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: EvalReport = serde_json::from_str(&stdout(&out)).unwrap();

    let text = std::fs::read_to_string(fixture()).unwrap();
    let file: InstanceFile = serde_json::from_str(&text).unwrap();
    let instance = file.into_instance().unwrap();
    let naive = Naive::from_instance(&instance);
    let abs_c = naive.abs_c();
    let (p, q) = (2.5, conjugate_of(2.5));
    let pq = ConjugatePair::new(p, q).unwrap();
    let two = ConjugatePair::from_p(2.0).unwrap();
    let params = HolderParams::new(pq).with_ab(two).with_gd(two);

    let expect = |name: &str| -> f64 {
        match name {
            "combination_double_sum" => naive.double_sum(instance.c().unwrap()),
            "combination_holder" => naive.holder(&abs_c, p, q),
            "pecaric_row_sum" => naive.pecaric_bounds().0,
            "pecaric_max_row" => naive.pecaric_bounds().1,
            "pecaric_self_row_sum" => naive.pecaric_self().1,
            "pecaric_self_max_row" => naive.pecaric_self().2,
            "bombieri" => naive.bombieri().1,
            "pecaric_holder" => naive.norm_x_sq * naive.holder(&abs_c, p, q),
            "bombieri_middle" => naive.rooted_middle(p, q),
            "ratio_bound" => naive.ratio(p, q).1,
            _ => {
                let branch_ix: u8 = name
                    .trim_end_matches("_printed")
                    .rsplit('_')
                    .next()
                    .unwrap()
                    .parse()
                    .unwrap();
                let branch = BranchSelector::from_index(branch_ix).unwrap();
                let sub = params.for_branch(branch).unwrap();
                let printed = name.ends_with("_printed");
                if name.starts_with("combination_branch") {
                    if printed {
                        naive.printed_squared(&abs_c, &sub, branch, true)
                    } else {
                        naive.branch(&abs_c, &sub, branch)
                    }
                } else if name.starts_with("pecaric_branch") {
                    if printed {
                        naive.norm_x_sq * naive.printed_squared(&abs_c, &sub, branch, false)
                    } else {
                        naive.norm_x_sq * naive.branch(&abs_c, &sub, branch)
                    }
                } else if name.starts_with("bombieri_branch") {
                    if printed {
                        naive.printed_rooted(&sub, branch)
                    } else {
                        (naive.norm_x_sq * naive.branch(&naive.abs_proj(), &sub, branch)).sqrt()
                    }
                } else {
                    panic!("unexpected row {name}");
                }
            }
        }
    };

    assert!(
        report.rows.len() > 60,
        "full ladder expected, got {}",
        report.rows.len()
    );
    for row in &report.rows {
        let want = expect(&row.name);
        assert!(
            rel_close(row.value, want, 1e-9),
            "{}: report {} vs oracle {}",
            row.name,
            row.value,
            want
        );
    }
}

fn conjugate_of(p: f64) -> f64 {
    p / (p - 1.0)
}

#[test]
fn eval_is_deterministic_and_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(
        &["eval", "--instance", fixture().to_str().unwrap()],
        dir.path(),
    );
    let b = run(
        &["eval", "--instance", fixture().to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(a.stdout, b.stdout);

    let out_path = dir.path().join("report.json");
    let c = run(
        &[
            "eval",
            "--instance",
            fixture().to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(c.status.success());
    let written = std::fs::read_to_string(&out_path).unwrap();
    let report: EvalReport = serde_json::from_str(&written).unwrap();
    // report round-trip: parse(emit(r)) == r
    let again: EvalReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, again);
}

#[test]
fn eval_tabular_has_fixed_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "eval",
            "--instance",
            fixture().to_str().unwrap(),
            "--format",
            "tabular",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "name,branch,form,p,q,alpha,beta,gamma,delta,value,lhs,slack,tightness"
    );
}

#[test]
fn eval_missing_c_exits_2_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("noc.json");
    std::fs::write(&path, r#"{"x": [[1,0]], "ys": [[[1,0]]]}"#).unwrap();
    let out = run(&["eval", "--instance", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("c"),
        "stderr should name the missing field: {err}"
    );
}

#[test]
fn eval_parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["eval", "--instance", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = run(
        &["eval", "--instance", "/nonexistent/nothing.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    // dimension mismatch is named
    let path = dir.path().join("dims.json");
    std::fs::write(
        &path,
        r#"{"x": [[1,0]], "ys": [[[1,0],[0,0]]], "c": [[1,0]]}"#,
    )
    .unwrap();
    let out = run(&["eval", "--instance", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["eval", "--no-such-flag"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fuzz_zero_instances_exits_0_with_empty_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fuzz", "--seed", "1", "--instances", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("fuzz_summary.json")).unwrap();
    let summary: FuzzSummary = serde_json::from_str(&text).unwrap();
    assert_eq!(summary.total_checks, 0);
    assert_eq!(summary.derived_violations, 0);
}

#[test]
fn fuzz_clean_run_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fuzz", "--seed", "5", "--instances", "150"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn fuzz_fault_injection_exits_1_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "fuzz",
            "--seed",
            "5",
            "--instances",
            "10",
            "--self-test-corrupt-bounds",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("counterexample"), "stderr: {err}");
    let ce_path = dir.path().join("fuzz_summary_violation.json");
    assert!(ce_path.exists(), "counterexample file written");
    // the counterexample is a loadable instance
    let text = std::fs::read_to_string(&ce_path).unwrap();
    let file: InstanceFile = serde_json::from_str(&text).unwrap();
    assert!(file.into_instance().is_ok());
}

#[test]
fn audit_is_byte_deterministic_and_counterexamples_replay_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "audit",
        "--seed",
        "11",
        "--instances",
        "300",
        "--out",
        "audit.json",
    ];
    let a = run(&args, dir.path());
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let bytes_a = std::fs::read(dir.path().join("audit.json")).unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let b = run(&args, dir_b.path());
    assert_eq!(b.status.code(), Some(0));
    let bytes_b = std::fs::read(dir_b.path().join("audit.json")).unwrap();
    assert_eq!(
        bytes_a, bytes_b,
        "audit reports must be byte-identical across runs"
    );

    let report: AuditReport = serde_json::from_slice(&bytes_a).unwrap();
    let row = report
        .rows
        .iter()
        .find(|r| {
            r.source == gramineq::bounds::BoundSource::Combination
                && r.branch == 4
                && r.worst.is_some()
        })
        .expect("seed 11 x 300 instances produces a combination branch-4 counterexample");
    let worst = row.worst.as_ref().unwrap();

    // the counterexample file written next to the report replays through
    // eval: the printed branch-4 value falls below the holder middle
    let ce_path = dir.path().join("audit_ce_combination_branch4.json");
    assert!(ce_path.exists());
    let p = format!("{:.17e}", worst.params.pq().p());
    let alpha = format!("{:.17e}", worst.params.ab().unwrap().p());
    let out = run(
        &[
            "eval",
            "--instance",
            ce_path.to_str().unwrap(),
            "--p",
            &p,
            "--alpha",
            &alpha,
            "--branch",
            "4",
            "--printed",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let eval_report: EvalReport = serde_json::from_str(&stdout(&out)).unwrap();
    let printed_row = eval_report
        .rows
        .iter()
        .find(|r| r.name == "combination_branch_4_printed")
        .unwrap();
    let holder_row = eval_report
        .rows
        .iter()
        .find(|r| r.name == "combination_holder")
        .unwrap();
    assert!(
        rel_close(printed_row.value, worst.printed_value, 1e-12),
        "replayed printed {} vs recorded {}",
        printed_row.value,
        worst.printed_value
    );
    assert!(
        rel_close(holder_row.value, worst.middle_value, 1e-12),
        "replayed middle {} vs recorded {}",
        holder_row.value,
        worst.middle_value
    );
    assert!(
        printed_row.value < holder_row.value,
        "the violation reproduces: printed {} < middle {}",
        printed_row.value,
        holder_row.value
    );
}

#[test]
fn optimize_single_vector_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.json");
    // n = 1: y = (2, 0), x = (1, 0), c = (3, 0)
    std::fs::write(
        &path,
        r#"{"x": [[1,0],[0,0]], "ys": [[[2,0],[0,0]]], "c": [[3,0]]}"#,
    )
    .unwrap();
    let out = run(
        &[
            "optimize",
            "--instance",
            path.to_str().unwrap(),
            "--target",
            "pecaric",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // best value = |c|^2 r ||x||^2 = 9 * 4 * 1 = 36 at any p; tie-break p = 2
    let best = report["result"]["best_value"].as_f64().unwrap();
    assert!((best - 36.0).abs() <= 1e-9 * 36.0, "best {best}");
    assert_eq!(
        report["result"]["best_params"]["pq"]["p"].as_f64().unwrap(),
        2.0
    );
}

#[test]
fn optimize_dense_grid_cross_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "optimize",
            "--instance",
            fixture().to_str().unwrap(),
            "--target",
            "holder",
            "--dense-grid",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let gap = report["dense"]["relative_gap"].as_f64().unwrap();
    assert!(gap <= 1e-6, "dense-grid relative gap {gap}");
}

#[test]
fn instance_round_trips_through_parse_and_reserialize() {
    let text = std::fs::read_to_string(fixture()).unwrap();
    let file: InstanceFile = serde_json::from_str(&text).unwrap();
    let instance = file.clone().into_instance().unwrap();
    assert_eq!(InstanceFile::from_instance(&instance), file);
}
