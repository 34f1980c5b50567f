//! Analytic multiple-conclusion proof search: derivations are certified by
//! exhausting the partition search, underivability by a separating theory
//! that can be re-validated independently.

use matlog::calculus::{
    builtin_ruleset, derives_analytic, validate_separating_theory, RuleSetName, SchemaName,
};
use matlog::formula::parse_sequent;
use matlog::matrix::{builtin_matrix, mc_semantic_consequence};
use matlog::Budget;

fn main() {
    let budget = Budget::default();
    let calculus = builtin_ruleset(RuleSetName::RBMc)
        .union(&builtin_ruleset(RuleSetName::RNabla))
        .unwrap();
    let schema = SchemaName::SNabla.formulas();
    let matrix = builtin_matrix("builtin:IS6:up_a").unwrap();

    for text in [
        "p & ~p |- q",
        "p |- #p",
        "#p, ~#p |- .",
        ". |- #p, ~#p",
        "p | q |- p, q",
        "~#~p |- p",
        "p |- ~#~p",
    ] {
        let s = parse_sequent(text).unwrap();
        let report = derives_analytic(&calculus, &schema, &s.premises, &s.conclusions, &budget)
            .unwrap();
        let semantic = mc_semantic_consequence(&[&matrix], &s.premises, &s.conclusions, &budget)
            .unwrap();
        println!(
            "{s}\n  search:    {}\n  semantics: {}",
            if report.derivable() { "derivable" } else { "underivable" },
            if semantic.holds() { "valid" } else { "invalid" },
        );
        if let Some(theory) = report.theory() {
            let universe: std::collections::BTreeSet<_> =
                report.universe.iter().cloned().collect();
            let valid = validate_separating_theory(
                &calculus,
                &s.premises,
                &s.conclusions,
                &universe,
                theory,
                &budget,
            )
            .unwrap();
            let fs: Vec<String> = theory.iter().map(|f| f.to_string()).collect();
            println!(
                "  separating theory ({} formulas, re-validated: {valid}): {{{}}}",
                theory.len(),
                fs.join(", ")
            );
        }
        println!();
    }
}
