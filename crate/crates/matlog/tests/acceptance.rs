//! Acceptance suite: every shipped claim of the verification harness, run at
//! the full bounds profile with a fixed seed. One pass/fail line prints per
//! criterion; a failure carries the counterexample reported by the harness.

use matlog::harness::{check_names, run_checks, Profile, Report};
use matlog::Budget;

const ACCEPTANCE_SEED: u64 = 0xACCE5;

fn run_selected(prefixes: &[&str]) -> Report {
    let selection: Vec<String> = check_names()
        .into_iter()
        .filter(|n| prefixes.iter().any(|p| n.starts_with(p)))
        .map(|n| n.to_string())
        .collect();
    assert!(
        !selection.is_empty(),
        "no checks match prefixes {prefixes:?}"
    );
    run_checks(
        Some(&selection),
        ACCEPTANCE_SEED,
        &Profile::full(),
        &Budget::default(),
    )
}

fn criterion(number: u8, title: &str, prefixes: &[&str]) {
    let start = std::time::Instant::now();
    let report = run_selected(prefixes);
    let verdict = if report.all_pass() { "PASS" } else { "FAIL" };
    println!(
        "criterion {number:2} ({title}): {verdict} [{} checks, {} ms]",
        report.entries.len(),
        start.elapsed().as_millis()
    );
    assert!(report.all_pass(), "criterion {number} failed:\n{}", report.render_text());
}

#[test]
fn criterion_01_identity_suite() {
    criterion(1, "identity suite on all built-in algebras", &["identities-"]);
}

#[test]
fn criterion_02_construction_fidelity() {
    criterion(2, "top/bottom adjunction reproduces the named algebras", &["lift-"]);
}

#[test]
fn criterion_03_leibniz_congruences() {
    criterion(
        3,
        "Leibniz congruences with independent enumeration oracle",
        &["leibniz-"],
    );
}

#[test]
fn criterion_04_reductions() {
    criterion(4, "reductions collapse to the three-element chain", &["reduce-"]);
}

#[test]
fn criterion_05_hat_then_reduce() {
    criterion(
        5,
        "reducing the hatted matrix recovers the original",
        &["hat-star-"],
    );
}

#[test]
fn criterion_06_rule_soundness() {
    criterion(6, "rule sets sound on their intended matrices", &["sound-"]);
}

#[test]
fn criterion_07_separation_table() {
    criterion(
        7,
        "separating rules sound/unsound exactly where expected",
        &["separation-"],
    );
}

#[test]
fn criterion_08_bounded_logic_equalities() {
    criterion(
        8,
        "bounded logic equalities across the matrix family",
        &["logeq-"],
    );
}

#[test]
fn criterion_09_calculus_semantics_agreement() {
    criterion(
        9,
        "proof search agrees with matrix semantics on all pairings",
        &["agree-"],
    );
}

#[test]
fn criterion_10_analyticity_stability() {
    criterion(
        10,
        "universe padding never flips a verdict",
        &["stability-"],
    );
}

#[test]
fn criterion_11_or_transform_and_hilbert_companion() {
    criterion(
        11,
        "∨-transform text and Hilbert-engine agreement",
        &["or-transform-text", "hilbert-agreement"],
    );
}

#[test]
fn criterion_12_subalgebra_census() {
    criterion(12, "subuniverse census of the six-element algebra", &["subalgebra-census"]);
}
