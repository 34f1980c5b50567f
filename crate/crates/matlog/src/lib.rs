//! Workbench for logics given by finite logical matrices.
//!
//! The crate revolves around a handful of concrete objects:
//!
//! - [`algebra`]: finite algebras over the De Morgan signature `{∧, ∨, ¬, ⊥, ⊤}`
//!   and its expansion by the unary operator `∇`, including the named
//!   subdirectly irreducible De Morgan algebras (`DM4`, `K3`, `B2`) and
//!   involutive Stone algebras (`IS6` … `IS2`), identity and quasi-identity
//!   checking, products, subalgebras and the top/bottom adjunction `A ↦ A^∇`.
//! - [`matrix`]: logical matrices (algebra + designated set), single- and
//!   multiple-conclusion semantic consequence by valuation enumeration,
//!   Leibniz congruences and matrix reduction, the matrix-level lifts
//!   `M ↦ M^∇` and `M ↦ M̂`, and lattice-filter enumeration.
//! - [`formula`]: formula ASTs over the `∇`-signature, a strict ASCII grammar
//!   (`~` for ¬, `#` for ∇, `&`, `|`, `0`, `1`), substitution, generalized
//!   subformulas and bounded formula/sequent enumeration.
//! - [`calculus`]: multiple-conclusion rule sets (with the built-in calculi
//!   for the Belnap–Dunn family and their `∇`-expansions), the ∨-transform to
//!   single-conclusion Hilbert calculi, soundness checking, and decision of
//!   bounded-universe derivability by boolean constraint search, with
//!   separating theories as countermodel witnesses.
//! - [`harness`]: named, scripted verification of the desk-scale claims the
//!   built-ins are expected to satisfy, with reproducible seeded crosschecks
//!   between calculi and matrix semantics.
//!
//! Everything is immutable after construction and safe to use from multiple
//! threads. See the crate examples for end-to-end usage; the `matlog` binary
//! exposes the same operations for batch use.

pub mod algebra;
pub mod calculus;
pub mod formula;
pub mod harness;
pub mod matrix;
mod rng;

/// Resource caps for the search-like operations.
///
/// Every cap has a conservative default suited to desk-scale algebras; the
/// operations report an explicit error when a cap would be exceeded instead
/// of silently truncating (the one documented exception is the Hilbert
/// forward-chaining universe, which truncates and flags).
#[derive(Debug, Clone)]
pub struct Budget {
    /// Maximum number of valuations enumerated per semantic query.
    pub valuations: u64,
    /// Maximum total table entries across the unary-polynomial closure.
    pub polynomial_entries: u64,
    /// Maximum carrier size of a product algebra.
    pub product_elements: usize,
    /// Maximum carrier size for isomorphism search.
    pub isomorphism_elements: usize,
    /// Maximum number of formulas in a proof-search universe.
    pub universe_formulas: usize,
    /// Maximum number of rule instances over a universe.
    pub rule_instances: u64,
    /// Maximum size of an enumerated formula pool.
    pub pool_formulas: usize,
    /// Maximum size of an enumerated sequent pool.
    pub pool_sequents: u64,
    /// Maximum number of premise pairs in a quasi-identity.
    pub quasi_premises: usize,
    /// Worker threads for the operations that support deterministic
    /// parallelism (sequent-pool comparisons). Results are identical for any
    /// value.
    pub jobs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            valuations: 10_000_000,
            polynomial_entries: 1_000_000,
            product_elements: 4096,
            isomorphism_elements: 12,
            universe_formulas: 2000,
            rule_instances: 1_000_000,
            pool_formulas: 100_000,
            pool_sequents: 10_000_000,
            quasi_premises: 4,
            jobs: 1,
        }
    }
}
