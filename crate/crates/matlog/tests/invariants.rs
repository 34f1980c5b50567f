//! Cross-module invariants: reduction preserves the defined logic, verdicts
//! are stable across the deterministic parallel paths, and the calculus
//! oracle machinery composes with the matrix one.

use std::collections::BTreeSet;

use matlog::calculus::{bounded_logic_equality, derives_analytic, MatrixOracle, SchemaName};
use matlog::calculus::{builtin_ruleset, RuleSetName};
use matlog::formula::{enumerate_formulas, parse_sequent, Sequent};
use matlog::matrix::{builtin_matrix, leibniz_congruence, mc_semantic_consequence, reduce};
use matlog::Budget;

#[test]
fn reduction_preserves_the_defined_logic_on_a_bounded_suite() {
    let budget = Budget::default();
    for addr in ["builtin:IS6:top", "builtin:IS6:up_0", "builtin:IS6:up_a"] {
        let m = builtin_matrix(addr).unwrap();
        let star = reduce(&m, &budget).unwrap();
        assert!(leibniz_congruence(&star, &budget).unwrap().is_identity());
        let pool = enumerate_formulas(&["p", "q"], 1, 1000).unwrap();
        let left = MatrixOracle::new(vec![&m], &budget);
        let right = MatrixOracle::new(vec![&star], &budget);
        let report = bounded_logic_equality(&left, &right, &pool, 2, 1, &budget).unwrap();
        assert!(
            report.agree(),
            "{addr} and its reduction disagree: {:?}",
            report.disagreements.first()
        );
    }
}

#[test]
fn parallel_comparison_is_deterministic() {
    let sequential = Budget::default();
    let parallel = Budget {
        jobs: 4,
        ..Budget::default()
    };
    let upa = builtin_matrix("builtin:IS6:up_a").unwrap();
    let upb = builtin_matrix("builtin:IS6:up_b").unwrap();
    let pool = enumerate_formulas(&["p", "q"], 1, 1000).unwrap();
    for budget in [&sequential, &parallel] {
        let left = MatrixOracle::new(vec![&upa], budget);
        let right = MatrixOracle::new(vec![&upb], budget);
        let report = bounded_logic_equality(&left, &right, &pool, 1, 1, budget).unwrap();
        assert!(report.agree());
        assert_eq!(report.total, 45 * 45);
    }
}

#[test]
fn documented_example_sequents_agree_between_calculus_and_matrices() {
    let budget = Budget::default();
    let calculus = builtin_ruleset(RuleSetName::RBMc)
        .union(&builtin_ruleset(RuleSetName::RNabla))
        .unwrap();
    let matrix = builtin_matrix("builtin:IS6:up_a").unwrap();
    let suite: Vec<Sequent> = [
        "p & ~p |- q",
        "p |- #p",
        "~#~p |- p",
        "p & (~p | q) |- q",
        ". |- #p, ~#p",
        "#p, ~#p |- .",
        "p | q |- p, q",
        "p, q |- p & q",
        ". |- cons(p), incons(p)",
    ]
    .iter()
    .map(|s| parse_sequent(s).unwrap())
    .collect();
    for s in suite {
        let search = derives_analytic(
            &calculus,
            &SchemaName::SNabla.formulas(),
            &s.premises,
            &s.conclusions,
            &budget,
        )
        .unwrap();
        let semantic =
            mc_semantic_consequence(&[&matrix], &s.premises, &s.conclusions, &budget).unwrap();
        assert_eq!(
            search.derivable(),
            semantic.holds(),
            "calculus and semantics disagree on {s}"
        );
    }
}

#[test]
fn underivability_theories_avoid_conclusions_by_construction() {
    let budget = Budget::default();
    let calculus = builtin_ruleset(RuleSetName::S21);
    let schema = SchemaName::SNabla.formulas();
    let premises: BTreeSet<_> = [parse_sequent("~p |- .").unwrap()]
        .into_iter()
        .flat_map(|s| s.premises)
        .collect();
    let conclusions = parse_sequent(". |- p").unwrap().conclusions;
    let report = derives_analytic(&calculus, &schema, &premises, &conclusions, &budget).unwrap();
    if let Some(theory) = report.theory() {
        assert!(theory.is_superset(&premises));
        assert!(theory.intersection(&conclusions).next().is_none());
    }
}
