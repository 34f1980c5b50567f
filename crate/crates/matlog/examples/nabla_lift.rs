//! The top/bottom adjunction: lifting the De Morgan algebras yields the
//! involutive Stone family, and reducing a hatted matrix recovers the
//! original.

use matlog::algebra::{make_named_algebra, nabla_lift, AlgebraName};
use matlog::matrix::{
    algebra_isomorphism, builtin_matrix, matrix_hat, matrix_isomorphism, matrix_nabla_lift, reduce,
};
use matlog::Budget;

fn main() {
    let budget = Budget::default();

    for (base, target) in [
        (AlgebraName::Dm4, AlgebraName::Is6),
        (AlgebraName::K3, AlgebraName::Is5),
        (AlgebraName::B2, AlgebraName::Is4),
    ] {
        let lifted = nabla_lift(&make_named_algebra(base)).unwrap();
        let named = make_named_algebra(target);
        let iso = algebra_isomorphism(&lifted, &named, &budget).unwrap();
        println!(
            "{}^nabla has {} elements, isomorphic to {}: {}",
            base.token(),
            lifted.size(),
            target.token(),
            iso.is_some()
        );
    }

    // Matrix-level lift: designate the fresh top alongside the old filter.
    let dm4_up_a = builtin_matrix("builtin:DM4:up_a").unwrap();
    let lifted = matrix_nabla_lift(&dm4_up_a).unwrap();
    println!("\n{dm4_up_a} lifts to {lifted}");
    let is6_up_a = builtin_matrix("builtin:IS6:up_a").unwrap();
    println!(
        "matching the built-in {is6_up_a}: {}",
        matrix_isomorphism(&lifted, &is6_up_a, &budget)
            .unwrap()
            .is_some()
    );

    // Hat and reduce: the nabla-free lift has a redundant fresh layer that
    // Leibniz reduction removes again.
    for addr in [
        "builtin:DM4:up_a",
        "builtin:DM4:up_1",
        "builtin:K3:up_a",
        "builtin:K3:up_1",
        "builtin:B2:up_1",
    ] {
        let m = builtin_matrix(addr).unwrap();
        let hat = matrix_hat(&m).unwrap();
        let star = reduce(&hat, &budget).unwrap();
        let back = matrix_isomorphism(&star, &m, &budget).unwrap();
        println!("reduce(hat({m})) = {star}, isomorphic to the original: {}", back.is_some());
    }
}
