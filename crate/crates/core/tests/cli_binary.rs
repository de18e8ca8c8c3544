use std::process::Command;

use monokit::cli::{parse_machine, parse_polygons};
use monokit::exact_la::Vector;
use monokit::theorems::Status;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn monokit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_monokit"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verified_fixture() {
    let (code, out, _) = monokit(&[&fixture("verified.scn"), "--format", "machine"]);
    assert_eq!(code, 0);
    let doc = parse_machine(&out).unwrap();
    assert_eq!(doc.seed, 7);
    let statuses: Vec<Status> = doc.reports.iter().map(|r| r.status).collect();
    assert_eq!(
        statuses,
        [Status::Verified, Status::HypothesisFailed, Status::Verified, Status::Verified]
    );
    assert!(doc.reports[1].expected_failure);
}

#[test]
fn seed_flag_overrides_file_option() {
    let (_, out, _) = monokit(&[&fixture("verified.scn"), "--format", "machine", "--seed", "12"]);
    assert_eq!(parse_machine(&out).unwrap().seed, 12);
}

#[test]
fn hypothesis_failed_fixture() {
    let (code, out, _) = monokit(&[&fixture("hypothesis_failed.scn")]);
    assert_eq!(code, 2);
    assert!(out.contains("status=HYPOTHESIS-FAILED"));
    assert!(out.contains("kind        check"));
}

#[test]
fn syntax_error_fixture() {
    let (code, out, err) = monokit(&[&fixture("syntax_error.scn")]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("line 1, column 29: expected `,` or `]`"), "{err}");
}

#[test]
fn piece_cap_is_an_inconclusive_run() {
    let (code, _, err) = monokit(&["--builtin", "composite_two_boxes", "--max-pieces", "2"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("cap"));
}

#[test]
fn dimension_cap_rejects_scenario_input() {
    let (code, _, err) = monokit(&[&fixture("verified.scn"), "--max-dim", "1"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("line 5, column 9") && err.contains("exceeds cap 1"), "{err}");
}

#[test]
fn polygons_through_binary() {
    let dir = std::env::temp_dir().join(format!("monokit-bin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("poly.txt");
    let (code, _, _) = monokit(&[
        "--builtin",
        "example3_plain_sum_formula",
        "--emit-polygons",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let recs = parse_polygons(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rhs: Vec<_> = recs.iter().filter(|r| r.name.ends_with(".rhs")).collect();
    assert_eq!(rhs.len(), 1);
    assert_eq!(rhs[0].lines.len(), 2);
    assert_eq!(
        rhs[0].clipped.as_deref(),
        Some(
            &[
                Vector::from_ints(&[-10, -10]),
                Vector::from_ints(&[10, -10]),
                Vector::from_ints(&[10, 10]),
                Vector::from_ints(&[-10, 10])
            ][..]
        )
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
