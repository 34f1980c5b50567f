//! From multiple-conclusion rules to a Hilbert calculus: the ∨-transform
//! disjoins a fresh context variable, and the forward-chaining engine
//! replays derivations step by step.

use matlog::calculus::{
    builtin_ruleset, or_transform, single_conclusion_derives, RuleSetName, SearchOutcome,
    UniversePolicy,
};
use matlog::formula::parse_formula;
use matlog::Budget;
use std::collections::BTreeSet;

fn main() {
    let nabla = builtin_ruleset(RuleSetName::RNabla);
    let transformed = or_transform(&nabla);
    println!("{}", transformed.to_text());

    // The single-conclusion companion of the four-valued base calculus plus
    // the transformed nabla rules derives the lifted tautologies.
    let hilbert = builtin_ruleset(RuleSetName::RBHilbert)
        .union(&builtin_ruleset(RuleSetName::RNablaOr))
        .unwrap();
    let budget = Budget::default();
    for (premises, goal) in [
        (vec!["p & q"], "q & p"),
        (vec![], "#p | ~#p"),
        (vec!["p"], "#p"),
        (vec![], "~#0"),
    ] {
        let premise_set: BTreeSet<_> =
            premises.iter().map(|s| parse_formula(s).unwrap()).collect();
        let goal_formula = parse_formula(goal).unwrap();
        let report = single_conclusion_derives(
            &hilbert,
            &premise_set,
            &goal_formula,
            &UniversePolicy::default(),
            &budget,
        )
        .unwrap();
        let ps: Vec<&str> = premises.to_vec();
        println!(
            "{} |- {goal}: {}",
            if ps.is_empty() { ".".into() } else { ps.join(", ") },
            if report.derivable() { "derivable" } else { "underivable" }
        );
        if let SearchOutcome::Derivable { trace } = &report.outcome {
            for line in trace.iter().take(12) {
                println!("    {line}");
            }
            if trace.len() > 12 {
                println!("    ... {} more steps", trace.len() - 12);
            }
        }
    }
}
