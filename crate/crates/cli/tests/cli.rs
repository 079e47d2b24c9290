use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cofix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cofix")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_exit_codes() {
    let ok = cofix(&["verify", "--fixture", "example_1_10", "--kind", "generalized_b", "--delta", "1/2", "--L", "0"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("holds"));

    let json = scratch("verify.json");
    let bad = cofix(&[
        "verify", "--fixture", "example_1_10", "--kind", "condition_b", "--delta", "9/10", "--L", "5", "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("(1/2, 1)"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["witness"], serde_json::json!(["1/2", "1"]));
    assert_eq!(report["holds"], false);

    let almost = cofix(&["verify", "--fixture", "example_3_4", "--kind", "almost_wrt_f", "--delta", "1/2", "--L", "0"]);
    assert_eq!(code(&almost), 0, "{}", stdout(&almost));
}

#[test]
fn verify_uses_stored_condition() {
    let o = cofix(&["verify", "--fixture", "example_1_10"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("generalized_b"));
}

#[test]
fn input_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["verify", "--fixture", "example_1_10", "--kind", "condition_b", "--delta", "0.9", "--L", "5"],
        &["verify", "--fixture", "example_1_10", "--kind", "nonsense", "--delta", "1/2", "--L", "0"],
        &["verify", "--fixture", "example_1_10", "--kind", "generalized_b", "--delta", "3/2", "--L", "0"],
        &["verify", "--fixture", "example_9_9"],
        &["classify"],
        &["solve", "--fixture", "example_1_10", "--x0", "7"],
        &["search", "--seeds", "5..1"],
        &["search", "--n-max", "1"],
    ];
    for args in cases {
        let o = cofix(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn malformed_problem_file_reports_position() {
    let path = scratch("broken.json");
    std::fs::write(&path, "{\n  \"space\": {\"type\": \"interval\"},\n  \"T\": \"identity\",\n  \"colour\": 3\n}\n").unwrap();
    let o = cofix(&["classify", "--problem", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("colour") && err.contains("line 4"), "{err}");
}

#[test]
fn classify_fixtures() {
    let o = cofix(&["classify", "--fixture", "example_1_10"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let line = |k: &str| text.lines().find(|l| l.starts_with(k)).unwrap().split_whitespace().map(String::from).collect::<Vec<_>>();
    assert_eq!(line("generalized_b")[1..5], ["yes", "1/2", "1/2", "0"]);
    assert_eq!(line("condition_b")[1], "no");

    let path = scratch("identity.json");
    std::fs::write(&path, r#"{"space": {"type": "finite", "dist": [["0"]]}, "T": "identity"}"#).unwrap();
    let o = cofix(&["classify", "--problem", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().skip(1).filter(|l| !l.starts_with("pairs")).all(|l| l.split_whitespace().nth(1) == Some("yes")));
}

#[test]
fn solve_step_maps() {
    let json = scratch("solve24.json");
    let o = cofix(&["solve", "--fixture", "example_2_4", "--x0", "0", "--grid-step", "1/60", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("Tx = fx = 2/3 (exact)"));
    assert!(text.contains("weakly compatible   yes"));
    assert!(text.contains("common fixed point  2/3"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["trace"]["terminated_by"], "gap_zero");
    assert_eq!(report["common_fixed_points"], serde_json::json!(["2/3"]));
}

#[test]
fn solve_affine_pair_without_common_fixed_point() {
    let o = cofix(&["solve", "--fixture", "example_3_4", "--x0", "0", "--epsilon", "1/1000000", "--grid-step", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("tolerance_met"));
    assert!(text.contains("coincidence points  1 -> 1/2"));
    assert!(text.contains("at x = 1, fTx = 1/4 but Tfx = 3/8"));
    assert!(text.contains("common fixed points none"));
}

#[test]
fn solve_hypothesis_and_budget_failures() {
    let path = scratch("no_range.json");
    std::fs::write(
        &path,
        r#"{"space": {"type": "finite", "dist": [["0", "1"], ["1", "0"]]},
            "T": {"type": "table", "image": [1, 1]}, "f": {"type": "table", "image": [0, 0]}}"#,
    )
    .unwrap();
    let o = cofix(&["solve", "--problem", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("range containment   FAILED"));

    let swap = scratch("swap.json");
    std::fs::write(&swap, r#"{"space": {"type": "finite", "dist": [["0", "1"], ["1", "0"]]}, "T": {"type": "table", "image": [1, 0]}}"#).unwrap();
    let o = cofix(&["solve", "--problem", swap.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("generalized_b infeasible"));

    let o = cofix(&["solve", "--fixture", "example_3_4", "--x0", "0", "--epsilon", "0", "--max-iter", "5", "--grid-step", "1"]);
    assert_eq!(code(&o), 4, "{}", stdout(&o));
}

#[test]
fn search_is_reproducible_and_rechecks() {
    let a = scratch("search_a.json");
    let b = scratch("search_b.json");
    let oa = cofix(&["search", "--seeds", "0..1000", "--n-max", "4", "--json", a.to_str().unwrap()]);
    let ob = cofix(&["search", "--seeds", "0..1000", "--n-max", "4", "--json", b.to_str().unwrap()]);
    assert_eq!(code(&oa), 0);
    assert_eq!(stdout(&oa), stdout(&ob));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let r = cofix(&["recheck", a.to_str().unwrap()]);
    assert_eq!(code(&r), 0, "{}", stdout(&r));

    let empty = cofix(&["search", "--seeds", "0..0"]);
    assert_eq!(code(&empty), 0);
    let text = stdout(&empty);
    for key in ["examined", "applicable", "pass", "candidates"] {
        assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == [key, "0"]), "{text}");
    }
}

#[test]
fn recheck_catches_edits() {
    let path = scratch("search_edit.json");
    let o = cofix(&["search", "--seeds", "0..10000", "--n-max", "5", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let Some(first) = report["candidates"].as_array().and_then(|c| c.first()).cloned() else {
        return;
    };

    let edited = scratch("candidate_edited.json");
    let mut c = first.clone();
    c["defect"] = "multiple_points_of_coincidence".into();
    std::fs::write(&edited, c.to_string()).unwrap();
    assert_eq!(code(&cofix(&["recheck", edited.to_str().unwrap()])), 1);

    let tampered = scratch("candidate_tampered.json");
    let mut c = first;
    c["dist"][0][1] = "1000".into();
    std::fs::write(&tampered, c.to_string()).unwrap();
    assert_eq!(code(&cofix(&["recheck", tampered.to_str().unwrap()])), 2);

    report["candidates"] = Value::Array(vec![]);
    std::fs::write(&path, report.to_string()).unwrap();
    assert_eq!(code(&cofix(&["recheck", path.to_str().unwrap()])), 0);
}

#[test]
fn fixtures_listing_and_dump() {
    let o = cofix(&["fixtures"]);
    assert_eq!(code(&o), 0);
    for name in ["example_1_10", "example_2_4", "example_3_4"] {
        assert!(stdout(&o).contains(name));
    }
    let dump = cofix(&["fixtures", "example_2_4"]);
    let path = scratch("dumped.json");
    std::fs::write(&path, stdout(&dump)).unwrap();
    let o = cofix(&["verify", "--problem", path.to_str().unwrap(), "--grid-step", "1/30"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}
