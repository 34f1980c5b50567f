//! Tour of the built-in algebras: operation tables, identity suites, and
//! the subuniverse census of the six-element generator.

use matlog::algebra::{
    algebra_to_text, all_subuniverses, check_identity, identity_suite_for, make_named_algebra,
    subuniverse_generated, AlgebraName,
};
use std::collections::BTreeSet;

fn main() {
    let is6 = make_named_algebra(AlgebraName::Is6);
    println!("{}", algebra_to_text(&is6));

    println!("identity suite on IS6:");
    for (name, lhs, rhs) in identity_suite_for(&is6) {
        let outcome = check_identity(&is6, &lhs, &rhs).unwrap();
        println!("  {name:12} {lhs} = {rhs}  ->  {}", outcome.holds);
    }

    // The suite rejects non-theorems with a witness.
    let lhs = matlog::formula::parse_formula("x | ~x").unwrap();
    let rhs = matlog::formula::parse_formula("1").unwrap();
    let outcome = check_identity(&is6, &lhs, &rhs).unwrap();
    println!("\nexcluded middle as an identity: {:?}", outcome.witness);

    // Subuniverses of IS6: one copy of IS2, IS4 and IS6, two of IS3 and IS5.
    let subs = all_subuniverses(&is6).unwrap();
    println!("\nsubuniverses of IS6 ({}):", subs.len());
    for universe in &subs {
        let names: Vec<&str> = universe.iter().map(|&i| is6.element_name(i)).collect();
        println!("  {{{}}}", names.join(","));
    }

    let a = is6.element_index("a").unwrap();
    let generated = subuniverse_generated(&is6, &BTreeSet::from([a]));
    let names: Vec<&str> = generated.iter().map(|&i| is6.element_name(i)).collect();
    println!("\nsubuniverse generated by a: {{{}}}", names.join(","));
}
