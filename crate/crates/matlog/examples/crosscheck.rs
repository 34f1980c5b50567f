//! Seeded cross-validation of a calculus against its matrices: sample
//! sequents uniformly from a bounded pool and compare proof search with
//! valuation semantics.

use matlog::harness::{builtin_pairings, random_sequent_crosscheck};
use matlog::Budget;

fn main() {
    let budget = Budget::default();
    for pairing in builtin_pairings() {
        let report =
            random_sequent_crosscheck(&pairing, 200, &["p", "q"], 2, 2, 2, 0xFEED, &budget)
                .unwrap();
        println!(
            "{}: {} sequents, {} disagreements, {} witnesses re-validated",
            report.pairing,
            report.checked,
            report.disagreements.len(),
            report.witnesses_validated
        );
        for d in report.disagreements.iter().take(5) {
            println!(
                "  {} derivable={} semantic={}",
                d.sequent, d.derivable, d.semantically_valid
            );
        }
    }
}
