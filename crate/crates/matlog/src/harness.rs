//! Named, scripted verification of the desk-scale claims the built-in
//! algebras, matrices and calculi are expected to satisfy.
//!
//! Each check is a pure function of (seed, bounds profile); a run executes a
//! selection of checks in declared order and renders the verdicts as human
//! text or as machine-readable line records (`CHECK <name> PASS|FAIL ...`).
//! The records format carries no timing and is reproducible bit for bit.
//! Failures never abort a run: a failing check contributes a report entry
//! with a counterexample or bound marker and the run continues.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::algebra::{check_identity, identity_suite_for, make_named_algebra, AlgebraName};
use crate::calculus::{
    bounded_logic_equality, builtin_ruleset, derives, derives_analytic, is_sound, or_transform,
    single_conclusion_derives, soundness_suite, validate_separating_theory, CalculusError,
    MatrixOracle, RuleSet, RuleSetName, SchemaName, UniversePolicy,
};
use crate::formula::{enumerate_formulas_with, enumerate_sequents, Alphabet, Formula, Sequent};
use crate::matrix::{
    algebra_isomorphism, builtin_matrix, filter_matrices, leibniz_by_enumeration,
    leibniz_congruence, matrix_hat, matrix_isomorphism, reduce, semantic_consequence,
    LogicalMatrix, PolynomialClosure,
};
use crate::rng::SplitMix64;
use crate::Budget;

/// Verdict of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Counterexample or bound marker on failure; a short summary note on
    /// pass (sequent counts, recorded separation witnesses).
    pub detail: Option<String>,
    pub millis: u128,
}

/// Ordered collection of check results.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub entries: Vec<CheckResult>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    /// Machine-readable line records, reproducible bit for bit for a fixed
    /// (selection, seed, bounds).
    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let verdict = if e.pass { "PASS" } else { "FAIL" };
            match &e.detail {
                Some(d) => {
                    let flat = d.replace('\n', "; ");
                    writeln!(out, "CHECK {} {} {}", e.name, verdict, flat).unwrap();
                }
                None => writeln!(out, "CHECK {} {}", e.name, verdict).unwrap(),
            }
        }
        out
    }

    /// Human-readable text with wall-clock timings (not reproducible).
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let width = self
            .entries
            .iter()
            .map(|e| e.name.len())
            .max()
            .unwrap_or(0);
        for e in &self.entries {
            let verdict = if e.pass { "pass" } else { "FAIL" };
            writeln!(
                out,
                "{:width$}  {}  {:>6} ms",
                e.name,
                verdict,
                e.millis,
                width = width
            )
            .unwrap();
            if let Some(d) = &e.detail {
                for line in d.lines() {
                    writeln!(out, "{:width$}    {}", "", line, width = width).unwrap();
                }
            }
        }
        let failed = self.entries.iter().filter(|e| !e.pass).count();
        writeln!(
            out,
            "{} checks, {} failed",
            self.entries.len(),
            failed
        )
        .unwrap();
        out
    }
}

/// Bounds profile for the randomized and exhaustive suites.
#[derive(Debug, Clone)]
pub struct Profile {
    pub name: &'static str,
    /// Number of sequent-pool variables (1 or 2).
    pub vars: usize,
    /// Formula depth for the sampled sequents.
    pub sample_depth: usize,
    /// Sampled sequents per calculus/matrix pairing.
    pub samples: usize,
    /// Premise bound for the bounded logic-equality pools.
    pub eq_premises: usize,
    /// Extra formulas for the universe-padding stability check.
    pub pad_extras: usize,
    /// Keep every n-th sequent of the Hilbert-companion pool (1 = all).
    pub hilbert_stride: usize,
}

impl Profile {
    pub fn smoke() -> Profile {
        Profile {
            name: "smoke",
            vars: 1,
            sample_depth: 1,
            samples: 100,
            eq_premises: 1,
            pad_extras: 10,
            hilbert_stride: 8,
        }
    }

    pub fn full() -> Profile {
        Profile {
            name: "full",
            vars: 2,
            sample_depth: 2,
            samples: 500,
            eq_premises: 2,
            pad_extras: 10,
            hilbert_stride: 1,
        }
    }

    pub fn from_token(token: &str) -> Option<Profile> {
        match token {
            "smoke" => Some(Profile::smoke()),
            "full" => Some(Profile::full()),
            _ => None,
        }
    }

    fn var_names(&self) -> &'static [&'static str] {
        const NAMES: [&str; 4] = ["p", "q", "r", "s"];
        &NAMES[..self.vars.min(4)]
    }
}

/// A calculus paired with the matrices it is meant to capture, plus the
/// schema and formula alphabet the comparison runs over. Rule sets without
/// constant rules are compared over constant-free pools.
pub struct CrossPairing {
    pub name: &'static str,
    pub ruleset: RuleSet,
    pub schema: Vec<Formula>,
    pub matrices: Vec<LogicalMatrix>,
    pub alphabet: Alphabet,
}

/// The five calculus/semantics pairings exercised by the acceptance suite.
pub fn builtin_pairings() -> Vec<CrossPairing> {
    let m = |addr: &str| builtin_matrix(addr).expect("builtin matrix address");
    let rbmc = builtin_ruleset(RuleSetName::RBMc);
    let rnabla = builtin_ruleset(RuleSetName::RNabla);
    let s15 = builtin_ruleset(RuleSetName::S15);
    vec![
        CrossPairing {
            name: "R_B_MC/DM4-up_a",
            ruleset: rbmc.clone(),
            schema: SchemaName::S.formulas(),
            matrices: vec![m("builtin:DM4:up_a")],
            alphabet: Alphabet {
                constants: true,
                nabla: false,
            },
        },
        CrossPairing {
            name: "R_B_MC+R_NABLA/IS6-up_a",
            ruleset: rbmc.union(&rnabla).expect("disjoint rule names"),
            schema: SchemaName::SNabla.formulas(),
            matrices: vec![m("builtin:IS6:up_a")],
            alphabet: Alphabet {
                constants: true,
                nabla: true,
            },
        },
        CrossPairing {
            name: "S15/K3",
            ruleset: s15.clone(),
            schema: SchemaName::S.formulas(),
            matrices: vec![m("builtin:K3:up_1"), m("builtin:K3:up_a")],
            alphabet: Alphabet {
                constants: false,
                nabla: false,
            },
        },
        CrossPairing {
            name: "S15+R_NABLA/IS5",
            ruleset: s15.union(&rnabla).expect("disjoint rule names"),
            schema: SchemaName::SNabla.formulas(),
            matrices: vec![m("builtin:IS5:up_1"), m("builtin:IS5:up_a")],
            alphabet: Alphabet {
                constants: false,
                nabla: true,
            },
        },
        CrossPairing {
            name: "S21/IS3",
            ruleset: builtin_ruleset(RuleSetName::S21),
            schema: SchemaName::SNabla.formulas(),
            matrices: vec![m("builtin:IS3:top"), m("builtin:IS3:up_0")],
            alphabet: Alphabet {
                constants: false,
                nabla: true,
            },
        },
    ]
}

/// One calculus-vs-semantics disagreement.
#[derive(Debug, Clone)]
pub struct Disagreement {
    pub sequent: Sequent,
    pub derivable: bool,
    pub semantically_valid: bool,
}

/// Outcome of a calculus-vs-semantics comparison over a sequent suite.
#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub pairing: String,
    pub checked: usize,
    pub disagreements: Vec<Disagreement>,
    /// Underivability witnesses re-validated by direct instance scan.
    pub witnesses_validated: usize,
}

impl CrosscheckReport {
    pub fn clean(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn crosscheck_sequents(
    pairing: &CrossPairing,
    sequents: &[Sequent],
    budget: &Budget,
) -> Result<CrosscheckReport, CalculusError> {
    let matrices: Vec<&LogicalMatrix> = pairing.matrices.iter().collect();
    let mut report = CrosscheckReport {
        pairing: pairing.name.to_string(),
        checked: 0,
        disagreements: Vec::new(),
        witnesses_validated: 0,
    };
    for (i, s) in sequents.iter().enumerate() {
        let search =
            derives_analytic(&pairing.ruleset, &pairing.schema, &s.premises, &s.conclusions, budget)?;
        let semantic =
            crate::matrix::mc_semantic_consequence(&matrices, &s.premises, &s.conclusions, budget)?;
        report.checked += 1;
        if search.derivable() != semantic.holds() {
            report.disagreements.push(Disagreement {
                sequent: s.clone(),
                derivable: search.derivable(),
                semantically_valid: semantic.holds(),
            });
        }
        // Re-validation of underivability witnesses by direct scan (the
        // first few, then periodically).
        if report.witnesses_validated < 20 || i % 50 == 0 {
            if let Some(theory) = search.theory() {
                let universe: BTreeSet<Formula> = search.universe.iter().cloned().collect();
                if !validate_separating_theory(
                    &pairing.ruleset,
                    &s.premises,
                    &s.conclusions,
                    &universe,
                    theory,
                    budget,
                )? {
                    report.disagreements.push(Disagreement {
                        sequent: s.clone(),
                        derivable: false,
                        semantically_valid: semantic.holds(),
                    });
                } else {
                    report.witnesses_validated += 1;
                }
            }
        }
    }
    Ok(report)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut out = 1u64;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

fn sample_side(pool: &[Formula], max_size: usize, rng: &mut SplitMix64) -> BTreeSet<Formula> {
    let n = pool.len() as u64;
    let weights: Vec<u64> = (0..=max_size as u64).map(|s| binomial(n, s)).collect();
    let total: u64 = weights.iter().sum();
    let mut draw = rng.below(total);
    let mut size = 0;
    for (s, &w) in weights.iter().enumerate() {
        if draw < w {
            size = s;
            break;
        }
        draw -= w;
    }
    // Floyd's algorithm: uniform distinct indices.
    let mut chosen: BTreeSet<u64> = BTreeSet::new();
    for j in (n - size as u64)..n {
        let t = rng.below(j + 1);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    chosen.iter().map(|&i| pool[i as usize].clone()).collect()
}

/// Uniformly sampled sequents (seeded, deterministic) from the bounded
/// pool, compared between analytic proof search and matrix semantics.
#[allow(clippy::too_many_arguments)]
pub fn random_sequent_crosscheck(
    pairing: &CrossPairing,
    count: usize,
    vars: &[&str],
    depth: usize,
    max_premises: usize,
    max_conclusions: usize,
    seed: u64,
    budget: &Budget,
) -> Result<CrosscheckReport, CalculusError> {
    let pool = enumerate_formulas_with(vars, depth, pairing.alphabet, budget.pool_formulas)?;
    let mut rng = SplitMix64::new(seed);
    let sequents: Vec<Sequent> = (0..count)
        .map(|_| Sequent {
            premises: sample_side(&pool, max_premises, &mut rng),
            conclusions: sample_side(&pool, max_conclusions, &mut rng),
        })
        .collect();
    crosscheck_sequents(pairing, &sequents, budget)
}

/// Exhaustive comparison over the full bounded sequent pool.
pub fn exhaustive_sequent_crosscheck(
    pairing: &CrossPairing,
    vars: &[&str],
    depth: usize,
    max_premises: usize,
    max_conclusions: usize,
    budget: &Budget,
) -> Result<CrosscheckReport, CalculusError> {
    let pool = enumerate_formulas_with(vars, depth, pairing.alphabet, budget.pool_formulas)?;
    let sequents = enumerate_sequents(&pool, max_premises, max_conclusions, budget.pool_sequents)?;
    crosscheck_sequents(pairing, &sequents, budget)
}

/// Re-runs a sequent suite with the proof-search universe padded by extra
/// seeded formulas, reporting any verdict flip.
#[allow(clippy::too_many_arguments)]
fn padded_stability(
    pairing: &CrossPairing,
    sequents: &[Sequent],
    extras_depth: usize,
    vars: &[&str],
    pad: usize,
    seed: u64,
    budget: &Budget,
) -> Result<Option<String>, CalculusError> {
    let extras_pool =
        enumerate_formulas_with(vars, extras_depth, pairing.alphabet, budget.pool_formulas)?;
    let mut rng = SplitMix64::new(seed ^ 0x9e3779b97f4a7c15);
    for s in sequents {
        let base = derives_analytic(
            &pairing.ruleset,
            &pairing.schema,
            &s.premises,
            &s.conclusions,
            budget,
        )?;
        let mut universe: BTreeSet<Formula> = base.universe.iter().cloned().collect();
        let mut added = 0;
        let mut attempts = 0;
        while added < pad && attempts < 10_000 {
            attempts += 1;
            let f = extras_pool[rng.below(extras_pool.len() as u64) as usize].clone();
            if universe.insert(f) {
                added += 1;
            }
        }
        let padded = derives(
            &pairing.ruleset,
            &s.premises,
            &s.conclusions,
            &universe,
            budget,
        )?;
        if padded.derivable() != base.derivable() {
            return Ok(Some(format!(
                "verdict flip on {} ({} -> {}) after padding",
                s,
                if base.derivable() { "derivable" } else { "underivable" },
                if padded.derivable() { "derivable" } else { "underivable" },
            )));
        }
    }
    Ok(None)
}

struct Ctx {
    seed: u64,
    profile: Profile,
    budget: Budget,
}

/// Verdict of a check body: pass (optionally with a summary note carrying
/// recorded witnesses or counts) or fail with a counterexample.
enum Verdict {
    Pass(Option<String>),
    Fail(String),
}

type CheckOutcome = Result<Verdict, String>;
type CheckFn = fn(&Ctx) -> CheckOutcome;

fn fail(msg: impl Into<String>) -> CheckOutcome {
    Ok(Verdict::Fail(msg.into()))
}

fn pass() -> CheckOutcome {
    Ok(Verdict::Pass(None))
}

fn note(msg: impl Into<String>) -> CheckOutcome {
    Ok(Verdict::Pass(Some(msg.into())))
}

fn err_to_string<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---- criterion 1: identity suites ----------------------------------------

fn check_identities(name: AlgebraName) -> CheckOutcome {
    let a = make_named_algebra(name);
    for (id, lhs, rhs) in identity_suite_for(&a) {
        let outcome = check_identity(&a, &lhs, &rhs).map_err(err_to_string)?;
        if !outcome.holds {
            let w = outcome
                .witness
                .map(|m| format!("{m:?}"))
                .unwrap_or_default();
            return fail(format!("{id} fails on {} at {w}", a.name()));
        }
    }
    pass()
}

// ---- criterion 2: lift fidelity -------------------------------------------

fn check_lift(ctx: &Ctx, from: AlgebraName, to: AlgebraName) -> CheckOutcome {
    let lifted = crate::algebra::nabla_lift(&make_named_algebra(from)).map_err(err_to_string)?;
    let target = make_named_algebra(to);
    match algebra_isomorphism(&lifted, &target, &ctx.budget).map_err(err_to_string)? {
        Some(_) => pass(),
        None => fail(format!("no isomorphism between {}^nabla and {}", from, to)),
    }
}

// ---- criterion 3: Leibniz congruences --------------------------------------

fn check_leibniz_top(ctx: &Ctx) -> CheckOutcome {
    let m = builtin_matrix("builtin:IS6:top").map_err(err_to_string)?;
    let partition = leibniz_congruence(&m, &ctx.budget).map_err(err_to_string)?;
    let rendered = partition.render(m.algebra());
    if rendered == "{B} {0,a,b,1} {T}" {
        pass()
    } else {
        fail(format!("expected {{B}} {{0,a,b,1}} {{T}}, got {rendered}"))
    }
}

fn check_leibniz_reduced(ctx: &Ctx, addr: &str) -> CheckOutcome {
    let m = builtin_matrix(addr).map_err(err_to_string)?;
    let partition = leibniz_congruence(&m, &ctx.budget).map_err(err_to_string)?;
    if partition.is_identity() {
        pass()
    } else {
        fail(format!(
            "{m} is not reduced: {}",
            partition.render(m.algebra())
        ))
    }
}

fn check_leibniz_oracle(ctx: &Ctx) -> CheckOutcome {
    for name in AlgebraName::ALL {
        let a = make_named_algebra(name);
        let closure = PolynomialClosure::new(&a, &ctx.budget).map_err(err_to_string)?;
        for m in filter_matrices(&a, true).map_err(err_to_string)? {
            let fast = closure.leibniz(m.designated());
            let slow = leibniz_by_enumeration(&m).map_err(err_to_string)?;
            if fast != slow {
                return fail(format!(
                    "polynomial and enumeration Leibniz disagree on {m}: {} vs {}",
                    fast.render(m.algebra()),
                    slow.render(m.algebra())
                ));
            }
        }
    }
    pass()
}

// ---- criteria 4 & 5: reductions --------------------------------------------

fn check_reduce(ctx: &Ctx, from: &str, to: &str) -> CheckOutcome {
    let m = builtin_matrix(from).map_err(err_to_string)?;
    let reduced = reduce(&m, &ctx.budget).map_err(err_to_string)?;
    let target = builtin_matrix(to).map_err(err_to_string)?;
    match matrix_isomorphism(&reduced, &target, &ctx.budget).map_err(err_to_string)? {
        Some(_) => pass(),
        None => fail(format!("reduce({from}) is not isomorphic to {to}")),
    }
}

fn check_hat_star(ctx: &Ctx, addr: &str) -> CheckOutcome {
    let m = builtin_matrix(addr).map_err(err_to_string)?;
    let hat = matrix_hat(&m).map_err(err_to_string)?;
    let star = reduce(&hat, &ctx.budget).map_err(err_to_string)?;
    match matrix_isomorphism(&star, &m, &ctx.budget).map_err(err_to_string)? {
        Some(_) => pass(),
        None => fail(format!("reduce(hat({addr})) is not isomorphic to {addr}")),
    }
}

// ---- criterion 6: rule soundness --------------------------------------------

fn check_soundness(ctx: &Ctx, ruleset: RuleSetName) -> CheckOutcome {
    let rs = builtin_ruleset(ruleset);
    for addr in rs.intended_matrices() {
        let m = builtin_matrix(addr).map_err(err_to_string)?;
        for report in soundness_suite(&rs, &[&m], &ctx.budget).map_err(err_to_string)? {
            if !report.sound {
                let w = report
                    .witness
                    .map(|w| w.to_string())
                    .unwrap_or_default();
                return fail(format!("rule {} unsound on {m}: {w}", report.rule));
            }
        }
    }
    pass()
}

// ---- criterion 7: separation table ------------------------------------------

fn check_separation(
    ctx: &Ctx,
    ruleset: RuleSetName,
    sound_on: &[&str],
    unsound_on: &str,
) -> CheckOutcome {
    let rs = builtin_ruleset(ruleset);
    let sound_matrices: Vec<LogicalMatrix> = sound_on
        .iter()
        .map(|a| builtin_matrix(a))
        .collect::<Result<_, _>>()
        .map_err(err_to_string)?;
    let refs: Vec<&LogicalMatrix> = sound_matrices.iter().collect();
    for rule in rs.rules() {
        let report = is_sound(rule, &refs, &ctx.budget).map_err(err_to_string)?;
        if !report.sound {
            let w = report.witness.map(|w| w.to_string()).unwrap_or_default();
            return fail(format!(
                "{} expected sound on {:?}, found countermodel {w}",
                rule.name, sound_on
            ));
        }
    }
    let other = builtin_matrix(unsound_on).map_err(err_to_string)?;
    let mut witnesses = Vec::new();
    let mut any_unsound = false;
    for rule in rs.rules() {
        let report = is_sound(rule, &[&other], &ctx.budget).map_err(err_to_string)?;
        if !report.sound {
            any_unsound = true;
            if let Some(w) = report.witness {
                witnesses.push(format!("{}: {}", rule.name, w));
            }
        }
    }
    if !any_unsound {
        return fail(format!(
            "{} unexpectedly sound on {unsound_on}",
            rs.name
        ));
    }
    // The recorded witness rides along on the passing entry.
    note(format!("unsound on {unsound_on}: {}", witnesses.join("; ")))
}

// ---- criterion 8: bounded logic equalities ------------------------------------

fn check_logic_equality(ctx: &Ctx, pairs: &[(&str, &str)]) -> CheckOutcome {
    let pool = enumerate_formulas_with(
        ctx.profile.var_names(),
        1,
        Alphabet::FULL,
        ctx.budget.pool_formulas,
    )
    .map_err(err_to_string)?;
    let mut notes = Vec::new();
    for (left_addr, right_addr) in pairs {
        let left_m = builtin_matrix(left_addr).map_err(err_to_string)?;
        let right_m = builtin_matrix(right_addr).map_err(err_to_string)?;
        let left = MatrixOracle::new(vec![&left_m], &ctx.budget);
        let right = MatrixOracle::new(vec![&right_m], &ctx.budget);
        let report = bounded_logic_equality(
            &left,
            &right,
            &pool,
            ctx.profile.eq_premises,
            1,
            &ctx.budget,
        )
        .map_err(err_to_string)?;
        if !report.agree() {
            let (s, l, r) = &report.disagreements[0];
            return fail(format!(
                "{left_addr} vs {right_addr}: {s} ({l} vs {r}), {} disagreements of {}",
                report.disagreements.len(),
                report.total
            ));
        }
        notes.push(format!(
            "{left_addr}={right_addr} on {} sequents",
            report.total
        ));
    }
    note(notes.join("; "))
}

// ---- criteria 9 & 10: calculus/semantics agreement and stability ---------------

fn agreement_suites(
    ctx: &Ctx,
    pairing: &CrossPairing,
) -> Result<(Vec<Sequent>, Vec<Sequent>), String> {
    // Exhaustive depth-1 single-premise single-conclusion pool.
    let pool = enumerate_formulas_with(
        ctx.profile.var_names(),
        1,
        pairing.alphabet,
        ctx.budget.pool_formulas,
    )
    .map_err(err_to_string)?;
    let exhaustive =
        enumerate_sequents(&pool, 1, 1, ctx.budget.pool_sequents).map_err(err_to_string)?;
    // Seeded sample at the deeper bounds.
    let sample_pool = enumerate_formulas_with(
        ctx.profile.var_names(),
        ctx.profile.sample_depth,
        pairing.alphabet,
        ctx.budget.pool_formulas,
    )
    .map_err(err_to_string)?;
    let mut rng = SplitMix64::new(ctx.seed);
    let sampled: Vec<Sequent> = (0..ctx.profile.samples)
        .map(|_| Sequent {
            premises: sample_side(&sample_pool, 2, &mut rng),
            conclusions: sample_side(&sample_pool, 2, &mut rng),
        })
        .collect();
    Ok((exhaustive, sampled))
}

fn check_agreement(ctx: &Ctx, index: usize) -> CheckOutcome {
    let pairing = &builtin_pairings()[index];
    let (exhaustive, sampled) = agreement_suites(ctx, pairing)?;
    let mut total = 0;
    for suite in [&exhaustive, &sampled] {
        let report = crosscheck_sequents(pairing, suite, &ctx.budget).map_err(err_to_string)?;
        total += report.checked;
        if !report.clean() {
            let d = &report.disagreements[0];
            return fail(format!(
                "{}: {} derivable={} semantic={} ({} disagreements)",
                pairing.name,
                d.sequent,
                d.derivable,
                d.semantically_valid,
                report.disagreements.len()
            ));
        }
    }
    note(format!("{total} sequents compared, 0 disagreements"))
}

fn check_stability(ctx: &Ctx, index: usize) -> CheckOutcome {
    let pairing = &builtin_pairings()[index];
    let (exhaustive, sampled) = agreement_suites(ctx, pairing)?;
    let mut sequents = exhaustive;
    sequents.extend(sampled);
    match padded_stability(
        pairing,
        &sequents,
        ctx.profile.sample_depth,
        ctx.profile.var_names(),
        ctx.profile.pad_extras,
        ctx.seed,
        &ctx.budget,
    )
    .map_err(err_to_string)?
    {
        Some(flip) => fail(format!("{}: {flip}", pairing.name)),
        None => note(format!(
            "{} queries stable under {} padding formulas",
            sequents.len(),
            ctx.profile.pad_extras
        )),
    }
}

// ---- criterion 11: ∨-transform and the Hilbert companion ------------------------

fn check_or_transform_text(_ctx: &Ctx) -> CheckOutcome {
    let transformed = or_transform(&builtin_ruleset(RuleSetName::RNabla));
    let expected = builtin_ruleset(RuleSetName::RNablaOr);
    if transformed.rules().len() != 27 {
        return fail(format!(
            "expected 23 transformed + 4 structural rules, got {}",
            transformed.rules().len()
        ));
    }
    // The 21 numbered transforms must match the transcribed display texts
    // exactly; the two designation-link transforms follow them.
    for (got, want) in transformed.rules()[..23].iter().zip(expected.rules()) {
        if got != want {
            return fail(format!("transform mismatch: got '{got}', expected '{want}'"));
        }
    }
    let structural: Vec<String> = transformed.rules()[23..]
        .iter()
        .map(|r| r.to_string())
        .collect();
    let want_structural = [
        "or_intro : ?p / ?p | ?q",
        "or_comm : ?p | ?q / ?q | ?p",
        "or_contr : ?p | ?p / ?p",
        "or_assoc : ?p | (?q | ?r) / ?p | ?q | ?r",
    ];
    if structural != want_structural {
        return fail(format!("structural tail mismatch: {structural:?}"));
    }
    pass()
}

fn check_hilbert_agreement(ctx: &Ctx) -> CheckOutcome {
    let calculus = builtin_ruleset(RuleSetName::RBHilbert)
        .union(&builtin_ruleset(RuleSetName::RNablaOr))
        .map_err(err_to_string)?;
    let matrix = builtin_matrix("builtin:IS6:up_a").map_err(err_to_string)?;
    let pool =
        enumerate_formulas_with(&["p"], 1, Alphabet::FULL, ctx.budget.pool_formulas)
            .map_err(err_to_string)?;
    let sequents =
        enumerate_sequents(&pool, 1, 1, ctx.budget.pool_sequents).map_err(err_to_string)?;
    let mut misses = Vec::new();
    let mut compared = 0;
    let stride = ctx.profile.hilbert_stride.max(1);
    for s in sequents.iter().step_by(stride) {
        let Some(goal) = s.conclusions.iter().next() else {
            continue; // single-conclusion pool only
        };
        compared += 1;
        let semantic = semantic_consequence(&[&matrix], &s.premises, goal, &ctx.budget)
            .map_err(err_to_string)?;
        let search = single_conclusion_derives(
            &calculus,
            &s.premises,
            goal,
            &UniversePolicy::default(),
            &ctx.budget,
        )
        .map_err(err_to_string)?;
        if search.derivable() && !semantic.holds() {
            return fail(format!(
                "soundness violation: {s} derivable but semantically invalid"
            ));
        }
        if !search.derivable() && semantic.holds() {
            misses.push(format!(
                "{s}{}",
                if search.universe_truncated {
                    " (universe truncated)"
                } else {
                    ""
                }
            ));
        }
    }
    if misses.is_empty() {
        note(format!(
            "{compared} single-conclusion sequents, 0 completeness misses"
        ))
    } else {
        // Completeness misses are flagged explicitly, never silent.
        fail(format!(
            "{} completeness misses of {compared}: {}",
            misses.len(),
            misses.join("; ")
        ))
    }
}

// ---- criterion 12: subalgebra census -----------------------------------------

fn check_subalgebra_census(ctx: &Ctx) -> CheckOutcome {
    let is6 = make_named_algebra(AlgebraName::Is6);
    let subs = crate::algebra::all_subuniverses(&is6).map_err(err_to_string)?;
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for universe in &subs {
        let sub = crate::algebra::subalgebra(&is6, universe, "census").map_err(err_to_string)?;
        let mut matched = None;
        for name in [
            AlgebraName::Is2,
            AlgebraName::Is3,
            AlgebraName::Is4,
            AlgebraName::Is5,
            AlgebraName::Is6,
        ] {
            let target = make_named_algebra(name);
            if target.size() == sub.size()
                && algebra_isomorphism(&sub, &target, &ctx.budget)
                    .map_err(err_to_string)?
                    .is_some()
            {
                matched = Some(name.token());
                break;
            }
        }
        match matched {
            Some(token) => *counts.entry(token).or_insert(0) += 1,
            None => {
                let names: Vec<&str> =
                    universe.iter().map(|&i| is6.element_name(i)).collect();
                return fail(format!(
                    "subuniverse {{{}}} matches no built-in algebra",
                    names.join(",")
                ));
            }
        }
    }
    let expected = BTreeMap::from([
        ("IS2", 1),
        ("IS3", 2),
        ("IS4", 1),
        ("IS5", 2),
        ("IS6", 1),
    ]);
    if counts == expected {
        note("7 subuniverses: IS2, 2xIS3, IS4, 2xIS5, IS6")
    } else {
        fail(format!("census mismatch: {counts:?}"))
    }
}

/// The declared check list, in acceptance order.
fn check_registry() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("identities-DM4", |_| check_identities(AlgebraName::Dm4)),
        ("identities-K3", |_| check_identities(AlgebraName::K3)),
        ("identities-B2", |_| check_identities(AlgebraName::B2)),
        ("identities-IS6", |_| check_identities(AlgebraName::Is6)),
        ("identities-IS5", |_| check_identities(AlgebraName::Is5)),
        ("identities-IS4", |_| check_identities(AlgebraName::Is4)),
        ("identities-IS3", |_| check_identities(AlgebraName::Is3)),
        ("identities-IS2", |_| check_identities(AlgebraName::Is2)),
        ("lift-DM4-IS6", |c| {
            check_lift(c, AlgebraName::Dm4, AlgebraName::Is6)
        }),
        ("lift-K3-IS5", |c| {
            check_lift(c, AlgebraName::K3, AlgebraName::Is5)
        }),
        ("lift-B2-IS4", |c| {
            check_lift(c, AlgebraName::B2, AlgebraName::Is4)
        }),
        ("leibniz-IS6-top", check_leibniz_top),
        ("leibniz-IS6-up1-reduced", |c| {
            check_leibniz_reduced(c, "builtin:IS6:up_1")
        }),
        ("leibniz-IS6-upa-reduced", |c| {
            check_leibniz_reduced(c, "builtin:IS6:up_a")
        }),
        ("leibniz-oracle", check_leibniz_oracle),
        ("reduce-IS6-top", |c| {
            check_reduce(c, "builtin:IS6:top", "builtin:IS3:top")
        }),
        ("reduce-IS6-up0", |c| {
            check_reduce(c, "builtin:IS6:up_0", "builtin:IS3:up_0")
        }),
        ("hat-star-DM4-up_a", |c| check_hat_star(c, "builtin:DM4:up_a")),
        ("hat-star-DM4-up_1", |c| check_hat_star(c, "builtin:DM4:up_1")),
        ("hat-star-K3-up_a", |c| check_hat_star(c, "builtin:K3:up_a")),
        ("hat-star-K3-up_1", |c| check_hat_star(c, "builtin:K3:up_1")),
        ("hat-star-B2-up_1", |c| check_hat_star(c, "builtin:B2:up_1")),
        ("sound-R_NABLA", |c| check_soundness(c, RuleSetName::RNabla)),
        ("sound-R_B_MC", |c| check_soundness(c, RuleSetName::RBMc)),
        ("separation-DS", |c| {
            check_separation(c, RuleSetName::Ds, &["builtin:IS6:up_1"], "builtin:IS6:up_a")
        }),
        ("separation-EM", |c| {
            check_separation(c, RuleSetName::Em, &["builtin:IS5:up_a"], "builtin:IS6:up_a")
        }),
        ("separation-K1", |c| {
            check_separation(c, RuleSetName::K1, &["builtin:IS5:up_1"], "builtin:IS5:up_a")
        }),
        ("separation-KLEQ", |c| {
            check_separation(
                c,
                RuleSetName::Kleq,
                &["builtin:IS5:up_a", "builtin:IS5:up_1"],
                "builtin:IS6:up_a",
            )
        }),
        ("separation-ASSERT1", |c| {
            check_separation(c, RuleSetName::Assert1, &["builtin:IS6:top"], "builtin:IS6:up_1")
        }),
        ("separation-AX_UP0", |c| {
            check_separation(c, RuleSetName::AxUp0, &["builtin:IS3:up_0"], "builtin:IS6:up_a")
        }),
        ("logeq-IS6a-IS6b", |c| {
            check_logic_equality(c, &[("builtin:IS6:up_a", "builtin:IS6:up_b")])
        }),
        ("logeq-top-chain", |c| {
            check_logic_equality(
                c,
                &[
                    ("builtin:IS6:top", "builtin:IS5:top"),
                    ("builtin:IS5:top", "builtin:IS4:top"),
                    ("builtin:IS4:top", "builtin:IS3:top"),
                ],
            )
        }),
        ("logeq-up0-IS3", |c| {
            check_logic_equality(c, &[("builtin:IS6:up_0", "builtin:IS3:up_0")])
        }),
        ("agree-R_B_MC-DM4", |c| check_agreement(c, 0)),
        ("agree-R_B_MC+R_NABLA-IS6", |c| check_agreement(c, 1)),
        ("agree-S15-K3", |c| check_agreement(c, 2)),
        ("agree-S15+R_NABLA-IS5", |c| check_agreement(c, 3)),
        ("agree-S21-IS3", |c| check_agreement(c, 4)),
        ("stability-R_B_MC-DM4", |c| check_stability(c, 0)),
        ("stability-R_B_MC+R_NABLA-IS6", |c| check_stability(c, 1)),
        ("stability-S15-K3", |c| check_stability(c, 2)),
        ("stability-S15+R_NABLA-IS5", |c| check_stability(c, 3)),
        ("stability-S21-IS3", |c| check_stability(c, 4)),
        ("or-transform-text", check_or_transform_text),
        ("hilbert-agreement", check_hilbert_agreement),
        ("subalgebra-census", check_subalgebra_census),
    ]
}

/// All check names, in declared order.
pub fn check_names() -> Vec<&'static str> {
    check_registry().into_iter().map(|(n, _)| n).collect()
}

/// Runs the selected checks (all of them when `selection` is `None`) with
/// the given seed and bounds. Failures become report entries; the run never
/// aborts. Checks may execute in parallel (`budget.jobs`), but the report
/// is ordered by the declared check order and is deterministic for a fixed
/// (selection, seed, bounds).
pub fn run_checks(
    selection: Option<&[String]>,
    seed: u64,
    profile: &Profile,
    budget: &Budget,
) -> Report {
    let registry = check_registry();
    let selected: Vec<(&'static str, CheckFn)> = match selection {
        None => registry,
        Some(names) => registry
            .into_iter()
            .filter(|(n, _)| names.iter().any(|s| s == n))
            .collect(),
    };
    let ctx = Ctx {
        seed,
        profile: profile.clone(),
        budget: budget.clone(),
    };
    let results: Mutex<Vec<Option<CheckResult>>> = Mutex::new(vec![None; selected.len()]);
    let next = AtomicUsize::new(0);
    let workers = budget.jobs.max(1).min(selected.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= selected.len() {
                    break;
                }
                let (name, check) = selected[i];
                let start = Instant::now();
                let (pass, detail) = match check(&ctx) {
                    Ok(Verdict::Pass(d)) => (true, d),
                    Ok(Verdict::Fail(d)) => (false, Some(d)),
                    Err(e) => (false, Some(format!("error: {e}"))),
                };
                let result = CheckResult {
                    name: name.to_string(),
                    pass,
                    detail,
                    millis: start.elapsed().as_millis(),
                };
                results.lock().unwrap()[i] = Some(result);
            });
        }
    });
    Report {
        entries: results
            .into_inner()
            .unwrap()
            .into_iter()
            .map(|r| r.expect("every selected check ran"))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_run_is_green_and_deterministic() {
        let budget = Budget::default();
        let profile = Profile::smoke();
        let a = run_checks(None, 0xACCE5, &profile, &budget);
        assert!(a.all_pass(), "\n{}", a.render_text());
        let b = run_checks(None, 0xACCE5, &profile, &budget);
        assert_eq!(a.render_records(), b.render_records());
        // parallel execution reorders nothing
        let parallel = Budget {
            jobs: 4,
            ..Budget::default()
        };
        let c = run_checks(None, 0xACCE5, &profile, &parallel);
        assert_eq!(a.render_records(), c.render_records());
    }
}
