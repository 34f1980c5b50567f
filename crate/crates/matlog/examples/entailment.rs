//! Semantic consequence on the four- and six-element matrices: the
//! paraconsistency and paracompleteness countermodels, and how the `∇`
//! operator changes the picture.

use matlog::formula::parse_sequent;
use matlog::matrix::{builtin_matrix, mc_semantic_consequence};
use matlog::Budget;

fn main() {
    let budget = Budget::default();
    let dm4 = builtin_matrix("builtin:DM4:up_a").unwrap();
    let is6 = builtin_matrix("builtin:IS6:up_a").unwrap();

    let queries = [
        "p & ~p |- q",       // explosion fails: both matrices are paraconsistent
        "|- p | ~p",         // excluded middle fails: both are paracomplete
        "p & (~p | q) |- q", // disjunctive syllogism fails on the order matrices
        "p |- #p",           // designated values have designated nabla
        "p |- ~#~p",         // but the 1-assertional direction fails at p = a
        "|- #p, ~#p",        // nabla is two-valued, multiple-conclusion style
        "p, ~p |- .",        // an anti-theory query: some valuation designates both
    ];
    for text in queries {
        let s = parse_sequent(text).unwrap();
        for m in [&dm4, &is6] {
            if s.premises.iter().chain(s.conclusions.iter()).any(|f| f.contains_nabla())
                && m.algebra().signature() == matlog::algebra::Signature::DeMorgan
            {
                continue;
            }
            let verdict = mc_semantic_consequence(&[m], &s.premises, &s.conclusions, &budget);
            match verdict.unwrap().witness() {
                None => println!("{m}  |=  {s}"),
                Some(w) => println!("{m}  |/=  {s}   [{w}]"),
            }
        }
    }
}
