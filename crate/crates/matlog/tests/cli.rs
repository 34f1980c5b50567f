//! End-to-end checks of the batch interface: CLI output is byte-identical to
//! the corresponding library serialization, file formats load back, and
//! seeded runs reproduce.

use std::process::Command;

use matlog::algebra::{algebra_to_text, make_named_algebra, AlgebraName};
use matlog::calculus::{builtin_ruleset, or_transform, RuleSetName};
use matlog::matrix::{builtin_matrix, matrix_nabla_lift, matrix_to_text, reduce};
use matlog::Budget;

fn matlog(args: &[&str]) -> (String, String, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_matlog"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code(),
    )
}

#[test]
fn algebra_show_matches_library_serialization() {
    let (stdout, _, code) = matlog(&["algebra", "show", "--algebra", "builtin:IS6"]);
    assert_eq!(code, Some(0));
    assert_eq!(
        stdout,
        algebra_to_text(&make_named_algebra(AlgebraName::Is6))
    );
}

#[test]
fn matrix_commands_match_library_serialization() {
    let budget = Budget::default();
    let top = builtin_matrix("builtin:IS6:top").unwrap();
    let (stdout, _, code) = matlog(&["matrix", "reduce", "--matrix", "builtin:IS6:top"]);
    assert_eq!(code, Some(0));
    assert_eq!(stdout, matrix_to_text(&reduce(&top, &budget).unwrap()));

    let dm4 = builtin_matrix("builtin:DM4:up_a").unwrap();
    let (stdout, _, _) = matlog(&["matrix", "lift", "--matrix", "builtin:DM4:up_a"]);
    assert_eq!(stdout, matrix_to_text(&matrix_nabla_lift(&dm4).unwrap()));
}

#[test]
fn transform_or_matches_library_text() {
    let (stdout, _, code) = matlog(&["transform-or", "--calculus", "R_NABLA"]);
    assert_eq!(code, Some(0));
    let expected = or_transform(&builtin_ruleset(RuleSetName::RNabla)).to_text();
    assert_eq!(stdout, expected);
}

#[test]
fn entail_reports_the_documented_countermodel() {
    let (stdout, _, code) = matlog(&[
        "entail",
        "--matrix",
        "builtin:DM4:up_a",
        "--sequent",
        "|- p | ~p",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(
        stdout,
        "NO . |- p | ~p countermodel: <DM4, {a,1}> with p=b leaves undesignated: p | ~p\n"
    );
}

#[test]
fn prove_reports_underivable_with_theory() {
    let (stdout, _, code) = matlog(&[
        "prove",
        "--calculus",
        "RB_MC+RNABLA",
        "--schema",
        "SNABLA",
        "--sequent",
        "p & ~p |- q",
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.starts_with("UNDERIVABLE p & ~p |- q theory: {"));
    assert!(stdout.contains("p & ~p"));
}

#[test]
fn soundness_failures_set_the_exit_code() {
    let (stdout, _, code) = matlog(&[
        "soundness",
        "--calculus",
        "DS",
        "--matrix",
        "builtin:IS6:up_a",
    ]);
    assert_eq!(code, Some(1));
    assert!(stdout.starts_with("UNSOUND DS"));
    let (_, _, code) = matlog(&[
        "soundness",
        "--calculus",
        "DS",
        "--matrix",
        "builtin:IS6:up_1",
    ]);
    assert_eq!(code, Some(0));
}

#[test]
fn paper_check_records_are_reproducible() {
    let args = [
        "paper-check",
        "--seed",
        "99",
        "--profile",
        "smoke",
        "--format",
        "records",
        "--select",
        "identities-IS6,leibniz-IS6-top,separation-DS",
    ];
    let (a, _, code_a) = matlog(&args);
    let (b, _, code_b) = matlog(&args);
    assert_eq!(code_a, Some(0));
    assert_eq!(code_b, Some(0));
    assert_eq!(a, b);
    assert!(a.contains("CHECK identities-IS6 PASS"));
    assert!(a.contains("CHECK leibniz-IS6-top PASS"));
    assert!(a.contains("CHECK separation-DS PASS"));
}

#[test]
fn crosscheck_runs_clean_on_a_builtin_pairing() {
    let (stdout, _, code) = matlog(&[
        "crosscheck",
        "--calculus",
        "RB_MC",
        "--schema",
        "S",
        "--matrix",
        "builtin:DM4:up_a",
        "--count",
        "50",
        "--vars",
        "2",
        "--depth",
        "1",
        "--seed",
        "11",
    ]);
    assert_eq!(code, Some(0), "{stdout}");
    assert!(stdout.contains("CHECK crosscheck PASS 50 sequents, 0 disagreements"));
}

#[test]
fn files_round_trip_through_the_cli() {
    let dir = std::env::temp_dir().join(format!("matlog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let algebra_path = dir.join("is6.alg");
    std::fs::write(
        &algebra_path,
        algebra_to_text(&make_named_algebra(AlgebraName::Is6)),
    )
    .unwrap();
    let (stdout, _, code) = matlog(&[
        "algebra",
        "show",
        "--algebra",
        algebra_path.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(
        stdout,
        algebra_to_text(&make_named_algebra(AlgebraName::Is6))
    );

    let matrix_path = dir.join("is6_top.mat");
    std::fs::write(
        &matrix_path,
        matrix_to_text(&builtin_matrix("builtin:IS6:top").unwrap()),
    )
    .unwrap();
    let (stdout, _, code) = matlog(&["matrix", "leibniz", "--matrix", matrix_path.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    assert_eq!(stdout, "{B} {0,a,b,1} {T}\n");

    let sequents_path = dir.join("suite.seq");
    std::fs::write(
        &sequents_path,
        "# two queries on the four-element matrix\np & ~p |- q\np, ~p | q |- q\n",
    )
    .unwrap();
    let (stdout, _, code) = matlog(&[
        "entail",
        "--matrix",
        "builtin:DM4:up_1",
        "--sequents",
        sequents_path.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("YES p & ~p |- q"));
    assert!(lines[1].starts_with("YES p, ~p | q |- q"));

    let rules_path = dir.join("ds.rules");
    std::fs::write(&rules_path, "DS : ?p & (~?p | ?q) / ?q\n").unwrap();
    let (stdout, _, code) = matlog(&[
        "soundness",
        "--calculus",
        rules_path.to_str().unwrap(),
        "--matrix",
        "builtin:IS6:up_1",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(stdout, "SOUND DS\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_addresses_exit_with_usage_error() {
    let (_, stderr, code) = matlog(&["matrix", "leibniz", "--matrix", "builtin:IS6:middle"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("bad builtin matrix address"));
}
