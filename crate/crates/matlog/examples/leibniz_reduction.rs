//! Leibniz congruences and matrix reduction: which designated sets make the
//! six-element matrix reduced, and where the reductions land.

use matlog::matrix::{
    builtin_matrix, filter_matrices, lattice_filters, leibniz_by_enumeration, leibniz_congruence,
    matrix_isomorphism, reduce,
};
use matlog::Budget;

fn main() {
    let budget = Budget::default();
    let is6 = matlog::algebra::make_named_algebra(matlog::algebra::AlgebraName::Is6);

    println!("lattice filters of IS6:");
    for f in lattice_filters(&is6) {
        let names: Vec<&str> = f.elements.iter().map(|&i| is6.element_name(i)).collect();
        println!(
            "  up({}) = {{{}}}{}",
            is6.element_name(f.generator),
            names.join(","),
            if f.improper { "  (improper)" } else { "" }
        );
    }

    println!("\nLeibniz congruence per filter matrix:");
    for m in filter_matrices(&is6, false).unwrap() {
        let partition = leibniz_congruence(&m, &budget).unwrap();
        let oracle = leibniz_by_enumeration(&m).unwrap();
        assert_eq!(partition, oracle, "polynomial and enumeration routes agree");
        println!(
            "  {m}: {}{}",
            partition.render(m.algebra()),
            if partition.is_identity() { "  (reduced)" } else { "" }
        );
    }

    // The two non-reduced cases collapse onto the three-element chain.
    for (from, to) in [
        ("builtin:IS6:top", "builtin:IS3:top"),
        ("builtin:IS6:up_0", "builtin:IS3:up_0"),
    ] {
        let m = builtin_matrix(from).unwrap();
        let reduced = reduce(&m, &budget).unwrap();
        let target = builtin_matrix(to).unwrap();
        let iso = matrix_isomorphism(&reduced, &target, &budget).unwrap();
        println!("\nreduce({m}) = {reduced}, isomorphic to {target}: {}", iso.is_some());
    }
}
