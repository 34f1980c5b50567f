//! Multiple-conclusion rule sets and bounded-universe proof search.
//!
//! A rule is a finite premise set over schematic variables (written `?p`,
//! `?q`, … — a namespace disjoint from query variables) together with a
//! finite conclusion set read disjunctively; either side may be empty.
//! Derivability over a finite universe Λ is decided by encoding each
//! formula of Λ as a boolean variable and each Λ-instance of a rule as the
//! constraint "all premises true implies some conclusion true": a
//! satisfying assignment extending "premises true, conclusions false" is a
//! separating theory witnessing underivability, and exhaustion of the
//! search is a derivation certificate.
//!
//! The built-in rule sets are the analytic axiomatizations of the
//! Belnap–Dunn family and their `∇`-expansions, the corresponding Hilbert
//! calculi obtained by the ∨-transform, and the small named rules
//! (disjunctive syllogism, excluded middle, the Kleene rules) that separate
//! the matrices of interest.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{Signature, TextError};
use crate::formula::{
    generalized_subformulas, parse_formula, subformulas, Formula, PoolError, Sequent,
};
use crate::matrix::{mc_semantic_consequence, CounterModel, LogicalMatrix, MatrixError};
use crate::Budget;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("unknown symbol scope: 'nabla' is not in the calculus' declared signature")]
    SignatureScope,
    #[error("universe of {size} formulas exceeds cap of {cap}")]
    UniverseCap { size: usize, cap: usize },
    #[error("rule instances exceed cap of {cap}")]
    InstanceCap { cap: u64 },
    #[error("query formula '{0}' is not in the universe")]
    OutsideUniverse(Formula),
    #[error("rule '{0}' is not single-conclusion")]
    NotSingleConclusion(String),
    #[error("proof-search engines disagree on {0} (internal invariant violated)")]
    EngineMismatch(String),
    #[error("unknown rule set '{0}'")]
    UnknownRuleSet(String),
    #[error("unknown schema '{0}'")]
    UnknownSchema(String),
    #[error("duplicate rule name '{0}'")]
    DuplicateRule(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error(transparent)]
    Text(#[from] TextError),
}

/// A schematic multiple-conclusion rule. Premises and conclusions keep their
/// declared order (the ∨-transform depends on it); set semantics applies at
/// instantiation time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    premises: Vec<Formula>,
    conclusions: Vec<Formula>,
}

impl Rule {
    pub fn new(
        name: impl Into<String>,
        premises: Vec<Formula>,
        conclusions: Vec<Formula>,
    ) -> Rule {
        fn dedup(side: Vec<Formula>) -> Vec<Formula> {
            let mut seen = BTreeSet::new();
            side.into_iter().filter(|f| seen.insert(f.clone())).collect()
        }
        Rule {
            name: name.into(),
            premises: dedup(premises),
            conclusions: dedup(conclusions),
        }
    }

    pub fn premises(&self) -> &[Formula] {
        &self.premises
    }

    pub fn conclusions(&self) -> &[Formula] {
        &self.conclusions
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.premises.iter().chain(self.conclusions.iter())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in self.formulas() {
            out.extend(f.variables());
        }
        out
    }

    pub fn is_single_conclusion(&self) -> bool {
        self.conclusions.len() == 1
    }

    pub fn uses_nabla(&self) -> bool {
        self.formulas().any(Formula::contains_nabla)
    }

    /// Parses `name : P1 , P2 / C1 , C2`; `.` stands for an empty side.
    pub fn parse(line: &str) -> Result<Rule, TextError> {
        let err = |m: &str| TextError::new(0, format!("{m} in rule '{line}'"));
        let (name, body) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let (prem, concl) = body.split_once('/').ok_or_else(|| err("missing '/'"))?;
        let side = |text: &str| -> Result<Vec<Formula>, TextError> {
            let trimmed = text.trim();
            if trimmed == "." || trimmed.is_empty() {
                return Ok(Vec::new());
            }
            trimmed
                .split(',')
                .map(|s| parse_formula(s).map_err(|e| TextError::new(0, e.to_string())))
                .collect()
        };
        Ok(Rule::new(name.trim(), side(prem)?, side(concl)?))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, fs: &[Formula]) -> fmt::Result {
            if fs.is_empty() {
                return write!(f, ".");
            }
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, " , ")?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        }
        write!(f, "{} : ", self.name)?;
        side(f, &self.premises)?;
        write!(f, " / ")?;
        side(f, &self.conclusions)
    }
}

/// An ordered collection of rules with a declared signature, optionally
/// carrying the analyticity schema and matrices it is intended for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub name: String,
    rules: Vec<Rule>,
    signature: Signature,
    schema: Option<Vec<Formula>>,
    intended_matrices: Vec<String>,
}

impl RuleSet {
    pub fn new(
        name: impl Into<String>,
        rules: Vec<Rule>,
        signature: Signature,
    ) -> Result<RuleSet, CalculusError> {
        let mut seen = BTreeSet::new();
        for r in &rules {
            if !seen.insert(r.name.clone()) {
                return Err(CalculusError::DuplicateRule(r.name.clone()));
            }
            if signature == Signature::DeMorgan && r.uses_nabla() {
                return Err(CalculusError::SignatureScope);
            }
        }
        Ok(RuleSet {
            name: name.into(),
            rules,
            signature,
            schema: None,
            intended_matrices: Vec::new(),
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// The analyticity schema this set was built for, if any.
    pub fn schema(&self) -> Option<&[Formula]> {
        self.schema.as_deref()
    }

    pub fn intended_matrices(&self) -> &[String] {
        &self.intended_matrices
    }

    pub fn with_schema(mut self, schema: Vec<Formula>) -> RuleSet {
        self.schema = Some(schema);
        self
    }

    pub fn with_intended_matrices(mut self, addresses: &[&str]) -> RuleSet {
        self.intended_matrices = addresses.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn is_single_conclusion(&self) -> bool {
        self.rules.iter().all(Rule::is_single_conclusion)
    }

    /// Concatenation of two rule sets; names must stay unique. The signature
    /// and schema are the stronger of the two.
    pub fn union(&self, other: &RuleSet) -> Result<RuleSet, CalculusError> {
        let mut rules = self.rules.clone();
        rules.extend(other.rules.iter().cloned());
        let signature = self.signature.max(other.signature);
        let mut combined =
            RuleSet::new(format!("{}+{}", self.name, other.name), rules, signature)?;
        combined.schema = match (&self.schema, &other.schema) {
            (Some(a), Some(b)) => {
                let mut merged: Vec<Formula> = a.clone();
                for f in b {
                    if !merged.contains(f) {
                        merged.push(f.clone());
                    }
                }
                Some(merged)
            }
            (Some(a), None) => Some(a.clone()),
            (None, b) => b.clone(),
        };
        Ok(combined)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses one rule per line; `#` comments in column 0 and blank lines
    /// are skipped. The signature is inferred from the rules.
    pub fn from_text(name: impl Into<String>, text: &str) -> Result<RuleSet, CalculusError> {
        let mut rules = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let rule = Rule::parse(line).map_err(|e| TextError::new(lineno + 1, e.message))?;
            rules.push(rule);
        }
        let signature = if rules.iter().any(Rule::uses_nabla) {
            Signature::InvolutiveStone
        } else {
            Signature::DeMorgan
        };
        RuleSet::new(name, rules, signature)
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Built-in separator schemas: `S` is `{p, ~p}`, and the `∇`-extension adds
/// the four one-variable `∇`-separators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaName {
    S,
    SNabla,
}

impl SchemaName {
    pub fn token(self) -> &'static str {
        match self {
            SchemaName::S => "S",
            SchemaName::SNabla => "SNABLA",
        }
    }

    pub fn formulas(self) -> Vec<Formula> {
        let parse = |ss: &[&str]| ss.iter().map(|s| parse_formula(s).unwrap()).collect();
        match self {
            SchemaName::S => parse(&["p", "~p"]),
            SchemaName::SNabla => parse(&["p", "~p", "#p", "~#p", "#~p", "~#~p"]),
        }
    }
}

impl FromStr for SchemaName {
    type Err = CalculusError;

    fn from_str(s: &str) -> Result<SchemaName, CalculusError> {
        match s.to_ascii_uppercase().replace(['_', '^'], "").as_str() {
            "S" => Ok(SchemaName::S),
            "SNABLA" => Ok(SchemaName::SNabla),
            _ => Err(CalculusError::UnknownSchema(s.to_string())),
        }
    }
}

/// Names of the built-in rule sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSetName {
    /// The 21 `∇`-rules that expand an axiomatization of a De Morgan base
    /// logic to its `∇`-lift.
    RNabla,
    /// The ∨-transformed `∇`-rules (single-conclusion).
    RNablaOr,
    /// The Hilbert calculus for the four-valued base logic.
    RBHilbert,
    /// The analytic multiple-conclusion calculus for the four-valued base
    /// logic.
    RBMc,
    /// The analytic calculus for the Kleene order logic.
    S15,
    /// S15 extended by the six `∇`-rules of the three-element chain.
    S21,
    Ds,
    K1,
    Kleq,
    Em,
    Assert1,
    Order3,
    AxUp0,
}

impl RuleSetName {
    pub const ALL: [RuleSetName; 13] = [
        RuleSetName::RNabla,
        RuleSetName::RNablaOr,
        RuleSetName::RBHilbert,
        RuleSetName::RBMc,
        RuleSetName::S15,
        RuleSetName::S21,
        RuleSetName::Ds,
        RuleSetName::K1,
        RuleSetName::Kleq,
        RuleSetName::Em,
        RuleSetName::Assert1,
        RuleSetName::Order3,
        RuleSetName::AxUp0,
    ];

    pub fn token(self) -> &'static str {
        match self {
            RuleSetName::RNabla => "R_NABLA",
            RuleSetName::RNablaOr => "R_NABLA_OR",
            RuleSetName::RBHilbert => "R_B_HILBERT",
            RuleSetName::RBMc => "R_B_MC",
            RuleSetName::S15 => "S15",
            RuleSetName::S21 => "S21",
            RuleSetName::Ds => "DS",
            RuleSetName::K1 => "K1",
            RuleSetName::Kleq => "KLEQ",
            RuleSetName::Em => "EM",
            RuleSetName::Assert1 => "ASSERT1",
            RuleSetName::Order3 => "ORDER3",
            RuleSetName::AxUp0 => "AX_UP0",
        }
    }
}

impl FromStr for RuleSetName {
    type Err = CalculusError;

    fn from_str(s: &str) -> Result<RuleSetName, CalculusError> {
        let norm = s.to_ascii_uppercase().replace(['_', '-'], "");
        RuleSetName::ALL
            .into_iter()
            .find(|n| n.token().replace('_', "") == norm)
            .ok_or_else(|| CalculusError::UnknownRuleSet(s.to_string()))
    }
}

fn rules_from(lines: &[&str]) -> Vec<Rule> {
    lines
        .iter()
        .map(|l| Rule::parse(l).expect("built-in rules are well-formed"))
        .collect()
}

const R_NABLA_RULES: [&str; 21] = [
    "r1 : . / #?p , ~#?p",
    "r2 : #?p / ~#~#?p",
    "r3 : ##?p / #?p",
    "r4 : #?p , ~#?p / .",
    "r5 : ~#?p / #~?p",
    "r6 : #~~?p / #?p",
    "r7 : #?p / #~~?p",
    "r8 : #(?p & ?q) / #?p",
    "r9 : #(?p & ?q) / #?q",
    "r10 : #~(?p & ?q) / #~?p , #~?q",
    "r11 : #~?p / #~(?p & ?q)",
    "r12 : #~?q / #~(?p & ?q)",
    "r13 : #?p , #?q / #(?p & ?q)",
    "r14 : #~(?p | ?q) / #~?p",
    "r15 : #~(?p | ?q) / #~?q",
    "r16 : #(?p | ?q) / #?p , #?q",
    "r17 : #?p / #(?p | ?q)",
    "r18 : #?q / #(?p | ?q)",
    "r19 : #~?p , #~?q / #~(?p | ?q)",
    "r20 : . / ~#0",
    "r21 : . / ~#~1",
];

// The two designation-link rules coupling a formula to its one-variable
// ∇-separators. Both are sound on every matrix obtained by the top/bottom
// adjunction (a designated ¬∇φ forces φ to the fresh bottom, a designated
// ¬∇¬φ forces φ to the fresh top), and without them the lifted matrices
// validate sequents such as p ⊢ ∇p that no chain of r1–r21 derives.
const NABLA_LINK_RULES: [&str; 2] = [
    "link1 : ?p , ~#?p / .",
    "link2 : ~#~?p / ?p",
];

const R_B_MC_RULES: [&str; 18] = [
    "b1 : ?p / ~~?p",
    "b2 : ~~?p / ?p",
    "b3 : ?p & ?q / ?p",
    "b4 : ?p & ?q / ?q",
    "b5 : ?p , ?q / ?p & ?q",
    "b6 : ~?p / ~(?p & ?q)",
    "b7 : ~?q / ~(?p & ?q)",
    "b8 : ~(?p & ?q) / ~?p , ~?q",
    "b9 : ?p / ?p | ?q",
    "b10 : ?q / ?p | ?q",
    "b11 : ?p | ?q / ?p , ?q",
    "b12 : ~?p , ~?q / ~(?p | ?q)",
    "b13 : ~(?p | ?q) / ~?p",
    "b14 : ~(?p | ?q) / ~?q",
    "b15 : . / 1",
    "b16 : ~1 / .",
    "b17 : . / ~0",
    "b18 : 0 / .",
];

const R_B_HILBERT_RULES: [&str; 19] = [
    "h1 : ?p & ?q / ?p",
    "h2 : ?p & ?q / ?q",
    "h3 : ?p , ?q / ?p & ?q",
    "h4 : ?p / ?p | ?q",
    "h5 : ?p | ?q / ?q | ?p",
    "h6 : ?p | ?p / ?p",
    "h7 : ?p | (?q | ?r) / (?p | ?q) | ?r",
    "h8 : ?p | (?q & ?r) / (?p | ?q) & (?p | ?r)",
    "h9 : (?p | ?q) & (?p | ?r) / ?p | (?q & ?r)",
    "h10 : ?p | ?r / ~~?p | ?r",
    "h11 : ~~?p | ?r / ?p | ?r",
    "h12 : ~(?p | ?q) | ?r / (~?p & ~?q) | ?r",
    "h13 : (~?p & ~?q) | ?r / ~(?p | ?q) | ?r",
    "h14 : ~(?p & ?q) | ?r / (~?p | ~?q) | ?r",
    "h15 : (~?p | ~?q) | ?r / ~(?p & ?q) | ?r",
    "h16 : . / 1",
    "h17 : . / ~0",
    "h18 : 0 | ?p / ?p",
    "h19 : ~1 | ?p / ?p",
];

const S15_RULES: [&str; 15] = [
    "s1 : ?p , ?q / ?p & ?q",
    "s2 : ?p & ?q / ?p",
    "s3 : ?p & ?q / ?q",
    "s4 : ~?p / ~(?p & ?q)",
    "s5 : ~?q / ~(?p & ?q)",
    "s6 : ~(?p & ?q) / ~?p , ~?q",
    "s7 : ?p / ?p | ?q",
    "s8 : ?q / ?p | ?q",
    "s9 : ~(?p | ?q) / ~?p",
    "s10 : ~(?p | ?q) / ~?q",
    "s11 : ~?p , ~?q / ~(?p | ?q)",
    "s12 : ?p | ?q / ?p , ?q",
    "s13 : ?p / ~~?p",
    "s14 : ~~?p / ?p",
    "s15 : ?p , ~?p / ?q , ~?q",
];

const S21_EXTRA_RULES: [&str; 6] = [
    "s16 : ~?p , #?p / ?p",
    "s17 : ~?p / ?p , ~#?p",
    "s18 : ?p / #?p",
    "s19 : ?p , ~#?p / .",
    "s20 : ~#?p / ~?p",
    "s21 : . / ~?p , #?p",
];

// Transcribed directly (not derived from or_transform, which is checked
// against this list).
const R_NABLA_OR_RULES: [&str; 23] = [
    "r1_or : . / #?p | ~#?p",
    "r2_or : #?p | ?r / ~#~#?p | ?r",
    "r3_or : ##?p | ?r / #?p | ?r",
    "r4_or : #?p | ?r , ~#?p | ?r / ?r",
    "r5_or : ~#?p | ?r / #~?p | ?r",
    "r6_or : #~~?p | ?r / #?p | ?r",
    "r7_or : #?p | ?r / #~~?p | ?r",
    "r8_or : #(?p & ?q) | ?r / #?p | ?r",
    "r9_or : #(?p & ?q) | ?r / #?q | ?r",
    "r10_or : #~(?p & ?q) | ?r / #~?p | #~?q | ?r",
    "r11_or : #~?p | ?r / #~(?p & ?q) | ?r",
    "r12_or : #~?q | ?r / #~(?p & ?q) | ?r",
    "r13_or : #?p | ?r , #?q | ?r / #(?p & ?q) | ?r",
    "r14_or : #~(?p | ?q) | ?r / #~?p | ?r",
    "r15_or : #~(?p | ?q) | ?r / #~?q | ?r",
    "r16_or : #(?p | ?q) | ?r / #?p | #?q | ?r",
    "r17_or : #?p | ?r / #(?p | ?q) | ?r",
    "r18_or : #?q | ?r / #(?p | ?q) | ?r",
    "r19_or : #~?p | ?r , #~?q | ?r / #~(?p | ?q) | ?r",
    "r20_or : . / ~#0",
    "r21_or : . / ~#~1",
    "link1_or : ?p | ?r , ~#?p | ?r / ?r",
    "link2_or : ~#~?p | ?r / ?p | ?r",
];

/// Returns a built-in rule set, with its intended schema and matrices
/// attached as metadata.
pub fn builtin_ruleset(name: RuleSetName) -> RuleSet {
    let build = |rules: Vec<Rule>, sig: Signature| {
        RuleSet::new(name.token(), rules, sig).expect("built-in rule sets are well-formed")
    };
    match name {
        RuleSetName::RNabla => {
            let mut rules = rules_from(&R_NABLA_RULES);
            rules.extend(rules_from(&NABLA_LINK_RULES));
            build(rules, Signature::InvolutiveStone)
        }
        .with_schema(SchemaName::SNabla.formulas())
            .with_intended_matrices(&[
                "builtin:IS6:up_a",
                "builtin:IS6:up_1",
                "builtin:IS5:up_a",
                "builtin:IS5:up_1",
                "builtin:IS4:up_1",
                "builtin:IS3:top",
                "builtin:IS3:up_0",
            ]),
        RuleSetName::RNablaOr => build(rules_from(&R_NABLA_OR_RULES), Signature::InvolutiveStone)
            .with_intended_matrices(&["builtin:IS6:up_a"]),
        RuleSetName::RBHilbert => build(rules_from(&R_B_HILBERT_RULES), Signature::DeMorgan)
            .with_intended_matrices(&["builtin:DM4:up_a"]),
        RuleSetName::RBMc => build(rules_from(&R_B_MC_RULES), Signature::DeMorgan)
            .with_schema(SchemaName::S.formulas())
            .with_intended_matrices(&["builtin:DM4:up_a"]),
        RuleSetName::S15 => build(rules_from(&S15_RULES), Signature::DeMorgan)
            .with_schema(SchemaName::S.formulas())
            .with_intended_matrices(&["builtin:K3:up_1", "builtin:K3:up_a"]),
        RuleSetName::S21 => {
            let mut rules = rules_from(&S15_RULES);
            rules.extend(rules_from(&S21_EXTRA_RULES));
            build(rules, Signature::InvolutiveStone)
                .with_schema(SchemaName::SNabla.formulas())
                .with_intended_matrices(&["builtin:IS3:top", "builtin:IS3:up_0"])
        }
        RuleSetName::Ds => build(
            rules_from(&["DS : ?p & (~?p | ?q) / ?q"]),
            Signature::DeMorgan,
        ),
        RuleSetName::K1 => build(
            rules_from(&["K1 : (?p & ~?p) | ?q / ?q"]),
            Signature::DeMorgan,
        ),
        RuleSetName::Kleq => build(
            rules_from(&["KLEQ : (?p & ~?p) | ?r / ?q | ~?q | ?r"]),
            Signature::DeMorgan,
        ),
        RuleSetName::Em => build(rules_from(&["EM : . / ?p | ~?p"]), Signature::DeMorgan),
        RuleSetName::Assert1 => build(
            rules_from(&["ASSERT1 : ?p / ~#~?p"]),
            Signature::InvolutiveStone,
        ),
        RuleSetName::Order3 => build(
            rules_from(&[
                "ORDER3a : ~?p | ?r , #?p | ?r / ?p | ?r",
                "ORDER3b : ~#?p | ?r / ~?p | ?r",
            ]),
            Signature::InvolutiveStone,
        ),
        RuleSetName::AxUp0 => build(
            rules_from(&["AX_UP0 : . / ?p | ~#?p"]),
            Signature::InvolutiveStone,
        ),
    }
}

/// The ∨-transform: rules with empty premises become the plain disjunction
/// of their conclusions; every other rule `Γ/Δ` becomes `Γ∨r / (⋁Δ)∨r`
/// with a fresh context variable (`⋁` associates to the left over the
/// declared conclusion order, and `⋁∅` collapses to the fresh variable
/// alone); the four structural disjunction rules are appended.
pub fn or_transform(rs: &RuleSet) -> RuleSet {
    let used: BTreeSet<String> = rs.rules.iter().flat_map(|r| r.variables()).collect();
    let fresh = if !used.contains("?r") {
        "?r".to_string()
    } else {
        (0..)
            .map(|i| format!("?p{i}"))
            .find(|v| !used.contains(v))
            .unwrap()
    };
    let fresh_var = Formula::var(fresh);
    let mut rules: Vec<Rule> = rs
        .rules
        .iter()
        .map(|r| {
            let name = format!("{}_or", r.name);
            if r.premises.is_empty() {
                let conclusion = Formula::big_or(r.conclusions.iter().cloned())
                    .unwrap_or_else(|| fresh_var.clone());
                Rule::new(name, vec![], vec![conclusion])
            } else {
                let premises = r
                    .premises
                    .iter()
                    .map(|p| p.clone().or(fresh_var.clone()))
                    .collect();
                let conclusion = match Formula::big_or(r.conclusions.iter().cloned()) {
                    Some(disjunction) => disjunction.or(fresh_var.clone()),
                    None => fresh_var.clone(),
                };
                Rule::new(name, premises, vec![conclusion])
            }
        })
        .collect();
    rules.extend(rules_from(&[
        "or_intro : ?p / ?p | ?q",
        "or_comm : ?p | ?q / ?q | ?p",
        "or_contr : ?p | ?p / ?p",
        "or_assoc : ?p | (?q | ?r) / (?p | ?q) | ?r",
    ]));
    RuleSet::new(format!("{}^or", rs.name), rules, rs.signature)
        .expect("transformed rule names stay unique")
}

/// Soundness verdict for one rule on a list of matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessReport {
    pub rule: String,
    pub sound: bool,
    pub witness: Option<CounterModel>,
}

/// A rule is sound on the matrices when every valuation of its schematic
/// variables designating all premises designates some conclusion.
pub fn is_sound(
    rule: &Rule,
    matrices: &[&LogicalMatrix],
    budget: &Budget,
) -> Result<SoundnessReport, CalculusError> {
    let premises: BTreeSet<Formula> = rule.premises.iter().cloned().collect();
    let conclusions: BTreeSet<Formula> = rule.conclusions.iter().cloned().collect();
    let verdict = mc_semantic_consequence(matrices, &premises, &conclusions, budget)?;
    Ok(SoundnessReport {
        rule: rule.name.clone(),
        sound: verdict.holds(),
        witness: verdict.witness().cloned(),
    })
}

pub fn soundness_suite(
    rs: &RuleSet,
    matrices: &[&LogicalMatrix],
    budget: &Budget,
) -> Result<Vec<SoundnessReport>, CalculusError> {
    rs.rules
        .iter()
        .map(|r| is_sound(r, matrices, budget))
        .collect()
}

/// One Λ-instance of a rule: instantiated premise and conclusion sets, all
/// members inside the universe.
pub type Instance = (BTreeSet<Formula>, BTreeSet<Formula>);

fn is_rule_var(name: &str) -> bool {
    name.starts_with('?')
}

/// Matches a schematic pattern against a target, extending `binding` on the
/// rule variables; records new bindings on `trail` so the caller can unwind.
/// Bound values borrow subtrees of universe formulas.
fn match_pattern<'r, 'u>(
    pattern: &'r Formula,
    target: &'u Formula,
    binding: &mut BTreeMap<&'r str, &'u Formula>,
    trail: &mut Vec<&'r str>,
) -> bool {
    match (pattern, target) {
        (Formula::Var(v), t) if is_rule_var(v) => match binding.get(v.as_str()) {
            Some(bound) => *bound == t,
            None => {
                binding.insert(v, t);
                trail.push(v);
                true
            }
        },
        (Formula::Var(v), Formula::Var(w)) => v == w,
        (Formula::Bot, Formula::Bot) | (Formula::Top, Formula::Top) => true,
        (Formula::Neg(a), Formula::Neg(b)) | (Formula::Nabla(a), Formula::Nabla(b)) => {
            match_pattern(a, b, binding, trail)
        }
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2)) => {
            match_pattern(a1, b1, binding, trail) && match_pattern(a2, b2, binding, trail)
        }
        _ => false,
    }
}

fn shape_of(f: &Formula) -> usize {
    match f {
        Formula::Var(_) => 0,
        Formula::Bot => 1,
        Formula::Top => 2,
        Formula::Neg(_) => 3,
        Formula::Nabla(_) => 4,
        Formula::And(..) => 5,
        Formula::Or(..) => 6,
    }
}

struct UniverseIndex {
    formulas: Vec<Formula>,
    position: HashMap<Formula, u32>,
    /// Formula indices grouped by top-level constructor, so patterns only
    /// scan candidates of their own shape.
    shapes: [Vec<u32>; 7],
}

impl UniverseIndex {
    fn new(universe: &BTreeSet<Formula>) -> UniverseIndex {
        let formulas: Vec<Formula> = universe.iter().cloned().collect();
        let mut shapes: [Vec<u32>; 7] = Default::default();
        for (i, f) in formulas.iter().enumerate() {
            shapes[shape_of(f)].push(i as u32);
        }
        UniverseIndex {
            position: formulas
                .iter()
                .enumerate()
                .map(|(i, f)| (f.clone(), i as u32))
                .collect(),
            formulas,
            shapes,
        }
    }
}

/// Engine-internal instance: premise and conclusion sets as sorted universe
/// indices.
type RawInstance = (Vec<u32>, Vec<u32>);

fn instances_into(
    rule: &Rule,
    universe: &UniverseIndex,
    budget: &Budget,
    generated: &mut u64,
    out: &mut Vec<RawInstance>,
) -> Result<(), CalculusError> {
    // Match the most structured formulas first so variables get bound by
    // shape instead of blind enumeration. `slots` maps each match position
    // back to (premise side?, index within side).
    let mut order: Vec<(&Formula, bool, usize)> = rule
        .premises
        .iter()
        .enumerate()
        .map(|(i, f)| (f, true, i))
        .chain(
            rule.conclusions
                .iter()
                .enumerate()
                .map(|(i, f)| (f, false, i)),
        )
        .collect();
    order.sort_by_key(|(f, _, _)| std::cmp::Reverse(f.node_count()));
    let mut binding: BTreeMap<&str, &Formula> = BTreeMap::new();
    let mut matched = vec![0u32; order.len()];
    let ctx = SearchCtx {
        rule,
        universe,
        order: &order,
        budget,
    };
    search(&ctx, 0, &mut binding, &mut matched, generated, out)?;
    out.sort_unstable();
    out.dedup();
    Ok(())
}

struct SearchCtx<'a> {
    rule: &'a Rule,
    universe: &'a UniverseIndex,
    order: &'a [(&'a Formula, bool, usize)],
    budget: &'a Budget,
}

/// Builds the instance of `pattern` under `binding` (all rule variables
/// bound), cloning bound subtrees.
fn instantiate(pattern: &Formula, binding: &BTreeMap<&str, &Formula>) -> Formula {
    match pattern {
        Formula::Var(v) if is_rule_var(v) => (*binding
            .get(v.as_str())
            .expect("ground pattern has all variables bound"))
        .clone(),
        Formula::Var(_) | Formula::Bot | Formula::Top => pattern.clone(),
        Formula::Neg(x) => instantiate(x, binding).neg(),
        Formula::Nabla(x) => instantiate(x, binding).nabla(),
        Formula::And(l, r) => instantiate(l, binding).and(instantiate(r, binding)),
        Formula::Or(l, r) => instantiate(l, binding).or(instantiate(r, binding)),
    }
}

fn search<'a>(
    ctx: &SearchCtx<'a>,
    depth: usize,
    binding: &mut BTreeMap<&'a str, &'a Formula>,
    matched: &mut Vec<u32>,
    generated: &mut u64,
    out: &mut Vec<RawInstance>,
) -> Result<(), CalculusError> {
    if depth == ctx.order.len() {
        *generated += 1;
        if *generated > ctx.budget.rule_instances {
            return Err(CalculusError::InstanceCap {
                cap: ctx.budget.rule_instances,
            });
        }
        let mut premise_indices = Vec::with_capacity(ctx.rule.premises.len());
        let mut conclusion_indices = Vec::with_capacity(ctx.rule.conclusions.len());
        for (d, (_, is_premise, _)) in ctx.order.iter().enumerate() {
            if *is_premise {
                premise_indices.push(matched[d]);
            } else {
                conclusion_indices.push(matched[d]);
            }
        }
        premise_indices.sort_unstable();
        premise_indices.dedup();
        conclusion_indices.sort_unstable();
        conclusion_indices.dedup();
        out.push((premise_indices, conclusion_indices));
        return Ok(());
    }
    let (pattern, _, _) = ctx.order[depth];
    let unbound = pattern
        .variables()
        .into_iter()
        .any(|v| is_rule_var(&v) && !binding.contains_key(v.as_str()));
    if !unbound {
        // Fully determined: just check membership.
        let position = match pattern {
            // a bound bare variable needs no construction
            Formula::Var(v) if is_rule_var(v) => {
                ctx.universe.position.get(binding[v.as_str()]).copied()
            }
            _ => ctx
                .universe
                .position
                .get(&instantiate(pattern, binding))
                .copied(),
        };
        if let Some(i) = position {
            matched[depth] = i;
            search(ctx, depth + 1, binding, matched, generated, out)?;
        }
        return Ok(());
    }
    let candidates: &[u32] = match pattern {
        // a bare rule variable matches anything
        Formula::Var(_) => &[],
        shaped => &ctx.universe.shapes[shape_of(shaped)],
    };
    let all: Vec<u32>;
    let candidates = if matches!(pattern, Formula::Var(_)) {
        all = (0..ctx.universe.formulas.len() as u32).collect();
        &all[..]
    } else {
        candidates
    };
    for &i in candidates {
        let target = &ctx.universe.formulas[i as usize];
        let mut trail = Vec::new();
        if match_pattern(pattern, target, binding, &mut trail) {
            matched[depth] = i;
            search(ctx, depth + 1, binding, matched, generated, out)?;
        }
        for v in trail {
            binding.remove(v);
        }
    }
    Ok(())
}

/// All substitutions of the rule's variables by universe formulas keeping
/// every instantiated premise and conclusion inside the universe, in
/// canonical order.
pub fn rule_instances(
    rule: &Rule,
    universe: &BTreeSet<Formula>,
    budget: &Budget,
) -> Result<Vec<Instance>, CalculusError> {
    let index = UniverseIndex::new(universe);
    let mut raw = Vec::new();
    let mut generated = 0;
    instances_into(rule, &index, budget, &mut generated, &mut raw)?;
    let mut out: Vec<Instance> = raw
        .into_iter()
        .map(|(p, c)| {
            (
                p.iter().map(|&i| index.formulas[i as usize].clone()).collect(),
                c.iter().map(|&i| index.formulas[i as usize].clone()).collect(),
            )
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Verdict of a bounded-universe proof search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// No separating theory exists inside the universe; the trace records
    /// the exhausted search or the forward-chaining steps.
    Derivable { trace: Vec<String> },
    /// A theory containing the premises, avoiding every conclusion and
    /// closed under all universe instances of the rules.
    Underivable { theory: BTreeSet<Formula> },
}

/// Search result together with the universe it is relative to (verdicts are
/// universe-relative; enlarging the universe can only add derivations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub universe: Vec<Formula>,
    /// Set when the Hilbert-chain universe hit the cap and was truncated;
    /// an Underivable verdict may then be a bound artefact.
    pub universe_truncated: bool,
    pub outcome: SearchOutcome,
}

impl SearchReport {
    pub fn derivable(&self) -> bool {
        matches!(self.outcome, SearchOutcome::Derivable { .. })
    }

    pub fn theory(&self) -> Option<&BTreeSet<Formula>> {
        match &self.outcome {
            SearchOutcome::Underivable { theory } => Some(theory),
            SearchOutcome::Derivable { .. } => None,
        }
    }
}

fn scope_check(rs: &RuleSet, formulas: &BTreeSet<Formula>) -> Result<(), CalculusError> {
    if rs.signature == Signature::DeMorgan && formulas.iter().any(Formula::contains_nabla) {
        return Err(CalculusError::SignatureScope);
    }
    Ok(())
}

struct Clause {
    label: (usize, usize),
    neg: Vec<u32>,
    pos: Vec<u32>,
}

/// Per-rule instance lists over the universe, generated once and shared by
/// the search engines.
fn generate_all(
    rs: &RuleSet,
    index: &UniverseIndex,
    budget: &Budget,
) -> Result<Vec<Vec<RawInstance>>, CalculusError> {
    let mut all = Vec::with_capacity(rs.rules.len());
    let mut generated = 0;
    for rule in &rs.rules {
        let mut found = Vec::new();
        instances_into(rule, index, budget, &mut generated, &mut found)?;
        all.push(found);
    }
    Ok(all)
}

fn validate_query<'a>(
    rs: &RuleSet,
    query: impl Iterator<Item = &'a Formula>,
    universe: &BTreeSet<Formula>,
    budget: &Budget,
) -> Result<(), CalculusError> {
    scope_check(rs, universe)?;
    if universe.len() > budget.universe_formulas {
        return Err(CalculusError::UniverseCap {
            size: universe.len(),
            cap: budget.universe_formulas,
        });
    }
    for f in query {
        if !universe.contains(f) {
            return Err(CalculusError::OutsideUniverse(f.clone()));
        }
    }
    Ok(())
}

/// Decides `Γ ⊩ Δ` over the finite universe Λ by boolean constraint search
/// with unit propagation and chronological backtracking, branching
/// true-first on the first unassigned formula in canonical order. A
/// satisfying assignment restricted to its true formulas is the separating
/// theory.
pub fn derives(
    rs: &RuleSet,
    premises: &BTreeSet<Formula>,
    conclusions: &BTreeSet<Formula>,
    universe: &BTreeSet<Formula>,
    budget: &Budget,
) -> Result<SearchReport, CalculusError> {
    validate_query(
        rs,
        premises.iter().chain(conclusions.iter()),
        universe,
        budget,
    )?;
    let index = UniverseIndex::new(universe);
    let instances = generate_all(rs, &index, budget)?;
    Ok(solve_constraints(rs, premises, conclusions, &index, &instances))
}

fn solve_constraints(
    rs: &RuleSet,
    premises: &BTreeSet<Formula>,
    conclusions: &BTreeSet<Formula>,
    index: &UniverseIndex,
    instances: &[Vec<RawInstance>],
) -> SearchReport {
    let mut clauses = Vec::new();
    for (ri, rule_instances) in instances.iter().enumerate() {
        for (ii, (prem, concl)) in rule_instances.iter().enumerate() {
            clauses.push(Clause {
                label: (ri, ii),
                neg: prem.clone(),
                pos: concl.clone(),
            });
        }
    }
    let n = index.formulas.len();
    let mut assignment: Vec<Option<bool>> = vec![None; n];
    let mut trail: Vec<u32> = Vec::new();
    let mut trace: Vec<String> = Vec::new();
    let label = |c: &Clause| -> String {
        let (ri, ii) = c.label;
        let (p, q) = &instances[ri][ii];
        let side = |vs: &[u32]| {
            let fs: Vec<&Formula> = vs.iter().map(|&v| &index.formulas[v as usize]).collect();
            join_formulas(fs)
        };
        format!("{}[{} / {}]", rs.rules[ri].name, side(p), side(q))
    };
    // Fixed polarity assumptions for the query.
    let mut consistent = true;
    for (f, value) in premises
        .iter()
        .map(|f| (f, true))
        .chain(conclusions.iter().map(|f| (f, false)))
    {
        let var = index.position[f] as usize;
        match assignment[var] {
            Some(v) => consistent &= v == value,
            None => {
                assignment[var] = Some(value);
                trail.push(var as u32);
            }
        }
    }
    if !consistent {
        // Overlap: a formula on both sides derives immediately.
        return SearchReport {
            universe: index.formulas.clone(),
            universe_truncated: false,
            outcome: SearchOutcome::Derivable {
                trace: vec!["overlap between premises and conclusions".into()],
            },
        };
    }
    // Occurrence lists and per-clause counters: assigning a variable only
    // touches the clauses it occurs in.
    let mut occs: Vec<Vec<(u32, bool)>> = vec![Vec::new(); n];
    for (ci, c) in clauses.iter().enumerate() {
        for &v in &c.neg {
            occs[v as usize].push((ci as u32, false));
        }
        for &v in &c.pos {
            occs[v as usize].push((ci as u32, true));
        }
    }
    let mut sat_count: Vec<u32> = vec![0; clauses.len()];
    let mut open_count: Vec<u32> = clauses
        .iter()
        .map(|c| (c.neg.len() + c.pos.len()) as u32)
        .collect();
    let mut qhead = 0usize;
    // Counters lag behind the trail tail; a "unit" clause is re-examined
    // under the real assignment before anything is forced.
    macro_rules! clause_status {
        ($ci:expr) => {{
            let clause = &clauses[$ci as usize];
            let mut unassigned: Option<(u32, bool)> = None;
            let mut satisfied = false;
            let mut open = 0u32;
            for &v in &clause.neg {
                match assignment[v as usize] {
                    Some(false) => satisfied = true,
                    Some(true) => {}
                    None => {
                        open += 1;
                        unassigned = Some((v, false));
                    }
                }
            }
            for &v in &clause.pos {
                match assignment[v as usize] {
                    Some(true) => satisfied = true,
                    Some(false) => {}
                    None => {
                        open += 1;
                        unassigned = Some((v, true));
                    }
                }
            }
            (satisfied, open, unassigned)
        }};
    }
    let mut conflicts = 0u64;
    let mut decisions: Vec<(u32, usize, bool)> = Vec::new();
    'solve: loop {
        // propagate
        let mut conflict: Option<u32> = None;
        while qhead < trail.len() {
            let v = trail[qhead] as usize;
            qhead += 1;
            let value = assignment[v].expect("trail entries are assigned");
            // Counter updates for this variable must complete even on
            // conflict, or backtracking would undo more than was applied.
            for &(ci, polarity) in &occs[v] {
                open_count[ci as usize] -= 1;
                if polarity == value {
                    sat_count[ci as usize] += 1;
                    continue;
                }
                if sat_count[ci as usize] > 0 || conflict.is_some() {
                    continue;
                }
                match open_count[ci as usize] {
                    0 => conflict = Some(ci),
                    1 => {
                        // Re-examine under the live assignment; pending trail
                        // entries may already satisfy or falsify it.
                        let (satisfied, open, unassigned) = clause_status!(ci);
                        if satisfied {
                            continue;
                        }
                        match (open, unassigned) {
                            (0, _) => conflict = Some(ci),
                            (1, Some((uv, uvalue))) => {
                                assignment[uv as usize] = Some(uvalue);
                                trail.push(uv);
                            }
                            _ => {}
                        }
                    }
                    _ => {}
                }
            }
            if conflict.is_some() {
                break;
            }
        }
        if let Some(ci) = conflict {
            conflicts += 1;
            if trace.len() < 200 {
                trace.push(format!(
                    "conflict with instance {}",
                    label(&clauses[ci as usize])
                ));
            }
            loop {
                match decisions.pop() {
                    None => {
                        trace.push(format!(
                            "search exhausted: {} conflicts over {} instances",
                            conflicts,
                            clauses.len()
                        ));
                        return SearchReport {
                            universe: index.formulas.clone(),
                            universe_truncated: false,
                            outcome: SearchOutcome::Derivable { trace },
                        };
                    }
                    Some((var, mark, tried_false)) => {
                        // Undo the trail; counters were only updated for the
                        // processed prefix.
                        while trail.len() > mark {
                            let pos = trail.len() - 1;
                            let v = trail.pop().unwrap() as usize;
                            if pos < qhead {
                                let value = assignment[v].expect("assigned");
                                for &(ci, polarity) in &occs[v] {
                                    open_count[ci as usize] += 1;
                                    if polarity == value {
                                        sat_count[ci as usize] -= 1;
                                    }
                                }
                            }
                            assignment[v] = None;
                        }
                        qhead = mark;
                        if !tried_false {
                            assignment[var as usize] = Some(false);
                            trail.push(var);
                            decisions.push((var, mark, true));
                            break;
                        }
                    }
                }
            }
            continue 'solve;
        }
        match assignment.iter().position(Option::is_none) {
            None => {
                let theory: BTreeSet<Formula> = index
                    .formulas
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| assignment[*i] == Some(true))
                    .map(|(_, f)| f.clone())
                    .collect();
                return SearchReport {
                    universe: index.formulas.clone(),
                    universe_truncated: false,
                    outcome: SearchOutcome::Underivable { theory },
                };
            }
            Some(var) => {
                let mark = trail.len();
                assignment[var] = Some(true);
                trail.push(var as u32);
                decisions.push((var as u32, mark, false));
            }
        }
    }
}

fn join_formulas<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> String {
    let parts: Vec<String> = fs.into_iter().map(|f| f.to_string()).collect();
    if parts.is_empty() {
        ".".to_string()
    } else {
        parts.join(", ")
    }
}

/// Independent re-validation of an underivability witness: the theory must
/// contain the premises, avoid every conclusion, and be closed under every
/// universe instance of every rule (checked by direct scan).
pub fn validate_separating_theory(
    rs: &RuleSet,
    premises: &BTreeSet<Formula>,
    conclusions: &BTreeSet<Formula>,
    universe: &BTreeSet<Formula>,
    theory: &BTreeSet<Formula>,
    budget: &Budget,
) -> Result<bool, CalculusError> {
    if !theory.is_superset(premises) || theory.intersection(conclusions).next().is_some() {
        return Ok(false);
    }
    if !theory.iter().all(|f| universe.contains(f)) {
        return Ok(false);
    }
    for rule in &rs.rules {
        for (prem, concl) in rule_instances(rule, universe, budget)? {
            if prem.is_subset(theory) && concl.intersection(theory).next().is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `derives` with the universe of generalized subformulas of the query
/// under the given schema.
pub fn derives_analytic(
    rs: &RuleSet,
    schema: &[Formula],
    premises: &BTreeSet<Formula>,
    conclusions: &BTreeSet<Formula>,
    budget: &Budget,
) -> Result<SearchReport, CalculusError> {
    let mut base: BTreeSet<Formula> = premises.clone();
    base.extend(conclusions.iter().cloned());
    scope_check(rs, &base)?;
    let universe = generalized_subformulas(&subformulas(&base), schema);
    derives(rs, premises, conclusions, &universe, budget)
}

/// Closure of the premises under the single-conclusion universe instances;
/// membership of the goal decides derivability. Only applicable when every
/// rule has exactly one conclusion.
pub fn forward_chain(
    rs: &RuleSet,
    premises: &BTreeSet<Formula>,
    conclusion: &Formula,
    universe: &BTreeSet<Formula>,
    budget: &Budget,
) -> Result<SearchReport, CalculusError> {
    if let Some(bad) = rs.rules.iter().find(|r| !r.is_single_conclusion()) {
        return Err(CalculusError::NotSingleConclusion(bad.name.clone()));
    }
    validate_query(rs, premises.iter().chain([conclusion]), universe, budget)?;
    let index = UniverseIndex::new(universe);
    let instances = generate_all(rs, &index, budget)?;
    Ok(chain_closure(rs, premises, conclusion, &index, &instances))
}

fn chain_closure(
    rs: &RuleSet,
    premises: &BTreeSet<Formula>,
    conclusion: &Formula,
    index: &UniverseIndex,
    all_instances: &[Vec<RawInstance>],
) -> SearchReport {
    let mut instances: Vec<(usize, Vec<u32>, u32)> = Vec::new();
    for (ri, found) in all_instances.iter().enumerate() {
        for (prem, concl) in found {
            let c = *concl.first().expect("single conclusion");
            instances.push((ri, prem.clone(), c));
        }
    }
    // Premise counters with occurrence lists: deriving a formula only
    // touches the instances waiting on it.
    let n = index.formulas.len();
    let mut waiting: Vec<u32> = instances.iter().map(|(_, p, _)| p.len() as u32).collect();
    let mut premise_occs: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (ii, (_, prem, _)) in instances.iter().enumerate() {
        for &v in prem {
            premise_occs[v as usize].push(ii as u32);
        }
    }
    let mut derived = vec![false; n];
    let mut queue: Vec<u32> = Vec::new();
    let mut trace: Vec<String> = Vec::new();
    let fire = |ii: usize,
                derived: &mut Vec<bool>,
                queue: &mut Vec<u32>,
                trace: &mut Vec<String>| {
        let (ri, prem, concl) = &instances[ii];
        if !derived[*concl as usize] {
            derived[*concl as usize] = true;
            queue.push(*concl);
            if trace.len() < 2000 {
                let ps: Vec<&Formula> = prem
                    .iter()
                    .map(|&v| &index.formulas[v as usize])
                    .collect();
                trace.push(format!(
                    "{}: {} => {}",
                    rs.rules[*ri].name,
                    join_formulas(ps),
                    index.formulas[*concl as usize]
                ));
            }
        }
    };
    for f in premises {
        let v = index.position[f] as usize;
        if !derived[v] {
            derived[v] = true;
            queue.push(v as u32);
        }
    }
    for (ii, &count) in waiting.iter().enumerate() {
        if count == 0 {
            fire(ii, &mut derived, &mut queue, &mut trace);
        }
    }
    let mut qhead = 0;
    while qhead < queue.len() {
        let v = queue[qhead] as usize;
        qhead += 1;
        for &occ in &premise_occs[v] {
            let ii = occ as usize;
            waiting[ii] -= 1;
            if waiting[ii] == 0 {
                fire(ii, &mut derived, &mut queue, &mut trace);
            }
        }
    }
    let outcome = if derived[index.position[conclusion] as usize] {
        SearchOutcome::Derivable { trace }
    } else {
        let theory: BTreeSet<Formula> = index
            .formulas
            .iter()
            .enumerate()
            .filter(|(i, _)| derived[*i])
            .map(|(_, f)| f.clone())
            .collect();
        SearchOutcome::Underivable { theory }
    };
    SearchReport {
        universe: index.formulas.clone(),
        universe_truncated: false,
        outcome,
    }
}

/// How the universe for a single-conclusion query is chosen.
#[derive(Debug, Clone)]
pub enum UniversePolicy {
    /// Generalized subformulas of the query under a schema.
    Analytic(Vec<Formula>),
    /// An explicit universe.
    Fixed(BTreeSet<Formula>),
    /// Generalized subformulas under the separator schema of the calculus'
    /// signature, closed `k` times under disjunction with them (the
    /// ∨-transform introduces disjunctive contexts that plain subformulas
    /// lack). Truncated deterministically at the universe cap, with the
    /// truncation flagged in the report.
    HilbertChain { k: usize },
}

impl Default for UniversePolicy {
    fn default() -> Self {
        UniversePolicy::HilbertChain { k: 2 }
    }
}

fn hilbert_universe(
    rs: &RuleSet,
    base: &BTreeSet<Formula>,
    k: usize,
    budget: &Budget,
) -> (BTreeSet<Formula>, bool) {
    let schema = match rs.signature {
        Signature::DeMorgan => SchemaName::S.formulas(),
        Signature::InvolutiveStone => SchemaName::SNabla.formulas(),
    };
    let payload = generalized_subformulas(&subformulas(base), &schema);
    let mut universe = payload.clone();
    let mut truncated = false;
    'grow: for _ in 0..k {
        let snapshot: Vec<Formula> = universe.iter().cloned().collect();
        for a in &snapshot {
            for b in &payload {
                if universe.len() >= budget.universe_formulas {
                    truncated = true;
                    break 'grow;
                }
                universe.insert(a.clone().or(b.clone()));
            }
        }
    }
    (universe, truncated)
}

/// Single-conclusion derivability. Runs the boolean-constraint engine, and
/// for single-conclusion rule sets also the forward-chaining engine over
/// the same universe; the two must agree.
pub fn single_conclusion_derives(
    rs: &RuleSet,
    premises: &BTreeSet<Formula>,
    conclusion: &Formula,
    policy: &UniversePolicy,
    budget: &Budget,
) -> Result<SearchReport, CalculusError> {
    let mut base = premises.clone();
    base.insert(conclusion.clone());
    scope_check(rs, &base)?;
    let (universe, truncated) = match policy {
        UniversePolicy::Analytic(schema) => {
            (generalized_subformulas(&subformulas(&base), schema), false)
        }
        UniversePolicy::Fixed(universe) => (universe.clone(), false),
        UniversePolicy::HilbertChain { k } => hilbert_universe(rs, &base, *k, budget),
    };
    let conclusions = BTreeSet::from([conclusion.clone()]);
    validate_query(
        rs,
        premises.iter().chain(conclusions.iter()),
        &universe,
        budget,
    )?;
    let index = UniverseIndex::new(&universe);
    let instances = generate_all(rs, &index, budget)?;
    let constrained = solve_constraints(rs, premises, &conclusions, &index, &instances);
    let mut report = if rs.is_single_conclusion() {
        let chained = chain_closure(rs, premises, conclusion, &index, &instances);
        if chained.derivable() != constrained.derivable() {
            let sequent = Sequent::new(premises.clone(), conclusions);
            return Err(CalculusError::EngineMismatch(sequent.to_string()));
        }
        chained
    } else {
        constrained
    };
    report.universe_truncated = truncated;
    Ok(report)
}

/// A single- or multiple-conclusion consequence predicate over a common
/// signature, used for bounded comparisons of logics.
pub trait ConsequenceOracle: Sync {
    fn describe(&self) -> String;
    fn entails(
        &self,
        premises: &BTreeSet<Formula>,
        conclusions: &BTreeSet<Formula>,
    ) -> Result<bool, CalculusError>;
}

/// Matrix-class semantics as an oracle.
pub struct MatrixOracle<'a> {
    matrices: Vec<&'a LogicalMatrix>,
    budget: &'a Budget,
}

impl<'a> MatrixOracle<'a> {
    pub fn new(matrices: Vec<&'a LogicalMatrix>, budget: &'a Budget) -> MatrixOracle<'a> {
        MatrixOracle { matrices, budget }
    }
}

impl ConsequenceOracle for MatrixOracle<'_> {
    fn describe(&self) -> String {
        let names: Vec<String> = self.matrices.iter().map(|m| m.to_string()).collect();
        format!("Log{{{}}}", names.join(", "))
    }

    fn entails(
        &self,
        premises: &BTreeSet<Formula>,
        conclusions: &BTreeSet<Formula>,
    ) -> Result<bool, CalculusError> {
        Ok(mc_semantic_consequence(&self.matrices, premises, conclusions, self.budget)?.holds())
    }
}

/// Analytic proof search as an oracle.
pub struct CalculusOracle<'a> {
    ruleset: &'a RuleSet,
    schema: Vec<Formula>,
    budget: &'a Budget,
}

impl<'a> CalculusOracle<'a> {
    pub fn new(
        ruleset: &'a RuleSet,
        schema: Vec<Formula>,
        budget: &'a Budget,
    ) -> CalculusOracle<'a> {
        CalculusOracle {
            ruleset,
            schema,
            budget,
        }
    }
}

impl ConsequenceOracle for CalculusOracle<'_> {
    fn describe(&self) -> String {
        format!("derivability in {}", self.ruleset.name)
    }

    fn entails(
        &self,
        premises: &BTreeSet<Formula>,
        conclusions: &BTreeSet<Formula>,
    ) -> Result<bool, CalculusError> {
        Ok(
            derives_analytic(self.ruleset, &self.schema, premises, conclusions, self.budget)?
                .derivable(),
        )
    }
}

/// Result of comparing two consequence oracles over a bounded sequent pool.
#[derive(Debug, Clone)]
pub struct EqualityReport {
    pub left: String,
    pub right: String,
    pub total: usize,
    pub agreements: usize,
    /// Sequents with differing verdicts, as (sequent, left, right).
    pub disagreements: Vec<(Sequent, bool, bool)>,
}

impl EqualityReport {
    pub fn agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares two oracles on every sequent of the bounded pool, reporting
/// each disagreement. The pool order is deterministic; with `jobs > 1` the
/// pool is split across threads and merged by sequent index.
pub fn bounded_logic_equality(
    left: &dyn ConsequenceOracle,
    right: &dyn ConsequenceOracle,
    pool: &[Formula],
    max_premises: usize,
    max_conclusions: usize,
    budget: &Budget,
) -> Result<EqualityReport, CalculusError> {
    let sequents = crate::formula::enumerate_sequents(
        pool,
        max_premises,
        max_conclusions,
        budget.pool_sequents,
    )?;
    let verdicts = compare_on(left, right, &sequents, budget)?;
    let mut report = EqualityReport {
        left: left.describe(),
        right: right.describe(),
        total: sequents.len(),
        agreements: 0,
        disagreements: Vec::new(),
    };
    for (s, (l, r)) in sequents.into_iter().zip(verdicts) {
        if l == r {
            report.agreements += 1;
        } else {
            report.disagreements.push((s, l, r));
        }
    }
    Ok(report)
}

pub(crate) fn compare_on(
    left: &dyn ConsequenceOracle,
    right: &dyn ConsequenceOracle,
    sequents: &[Sequent],
    budget: &Budget,
) -> Result<Vec<(bool, bool)>, CalculusError> {
    let evaluate = |s: &Sequent| -> Result<(bool, bool), CalculusError> {
        Ok((
            left.entails(&s.premises, &s.conclusions)?,
            right.entails(&s.premises, &s.conclusions)?,
        ))
    };
    if budget.jobs > 1 && sequents.len() > 64 {
        let jobs = budget.jobs.min(sequents.len());
        let chunk = sequents.len().div_ceil(jobs);
        std::thread::scope(|scope| {
            let handles: Vec<_> = sequents
                .chunks(chunk)
                .map(|slice| scope.spawn(move || slice.iter().map(evaluate).collect::<Vec<_>>()))
                .collect();
            let mut out = Vec::with_capacity(sequents.len());
            for h in handles {
                for r in h.join().expect("comparison worker panicked") {
                    out.push(r?);
                }
            }
            Ok(out)
        })
    } else {
        sequents.iter().map(evaluate).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_sequent;
    use crate::matrix::builtin_matrix;
    use crate::rng::SplitMix64;

    fn fm(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn fms(ss: &[&str]) -> BTreeSet<Formula> {
        ss.iter().map(|s| fm(s)).collect()
    }

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn builtin_rule_spot_checks() {
        let nabla = builtin_ruleset(RuleSetName::RNabla);
        assert_eq!(nabla.rules().len(), 23);
        let link1 = nabla.rule("link1").unwrap();
        assert_eq!(link1.premises(), &[fm("?p"), fm("~#?p")]);
        assert!(link1.conclusions().is_empty());
        let r4 = nabla.rule("r4").unwrap();
        assert_eq!(r4.premises(), &[fm("#?p"), fm("~#?p")]);
        assert!(r4.conclusions().is_empty());
        let r1 = nabla.rule("r1").unwrap();
        assert!(r1.premises().is_empty());
        assert_eq!(r1.conclusions(), &[fm("#?p"), fm("~#?p")]);
        let s21 = builtin_ruleset(RuleSetName::S21);
        assert_eq!(s21.rules().len(), 21);
        let last = s21.rule("s21").unwrap();
        assert!(last.premises().is_empty());
        assert_eq!(last.conclusions(), &[fm("~?p"), fm("#?p")]);
        assert_eq!(builtin_ruleset(RuleSetName::RBMc).rules().len(), 18);
        assert_eq!(builtin_ruleset(RuleSetName::RBHilbert).rules().len(), 19);
        assert!(builtin_ruleset(RuleSetName::RBHilbert).is_single_conclusion());
        assert!(builtin_ruleset(RuleSetName::RNablaOr).is_single_conclusion());
    }

    #[test]
    fn ruleset_names_parse_with_or_without_underscores() {
        assert_eq!("R_NABLA".parse::<RuleSetName>().unwrap(), RuleSetName::RNabla);
        assert_eq!("RNABLA".parse::<RuleSetName>().unwrap(), RuleSetName::RNabla);
        assert_eq!("rb_mc".parse::<RuleSetName>().unwrap(), RuleSetName::RBMc);
        assert!("R_BOGUS".parse::<RuleSetName>().is_err());
    }

    #[test]
    fn or_transform_matches_the_expected_displays() {
        let transformed = or_transform(&builtin_ruleset(RuleSetName::RNabla));
        let r1 = transformed.rule("r1_or").unwrap();
        assert!(r1.premises().is_empty());
        assert_eq!(r1.conclusions(), &[fm("#?p | ~#?p")]);
        let r4 = transformed.rule("r4_or").unwrap();
        assert_eq!(r4.premises(), &[fm("#?p | ?r"), fm("~#?p | ?r")]);
        assert_eq!(r4.conclusions(), &[fm("?r")]);
        let r20 = transformed.rule("r20_or").unwrap();
        assert!(r20.premises().is_empty());
        assert_eq!(r20.conclusions(), &[fm("~#0")]);
        // structural rules appended at the end
        let intro = transformed.rule("or_intro").unwrap();
        assert_eq!(intro.premises(), &[fm("?p")]);
        assert_eq!(intro.conclusions(), &[fm("?p | ?q")]);
        assert_eq!(transformed.rules().len(), 27);
        // the transform reproduces the independently transcribed built-in
        let expected = builtin_ruleset(RuleSetName::RNablaOr);
        assert_eq!(&transformed.rules()[..23], expected.rules());
    }

    #[test]
    fn soundness_examples() {
        let b = budget();
        let is6a = builtin_matrix("builtin:IS6:up_a").unwrap();
        let nabla = builtin_ruleset(RuleSetName::RNabla);
        let r1 = is_sound(nabla.rule("r1").unwrap(), &[&is6a], &b).unwrap();
        assert!(r1.sound);
        let ds = builtin_ruleset(RuleSetName::Ds);
        let report = is_sound(ds.rule("DS").unwrap(), &[&is6a], &b).unwrap();
        assert!(!report.sound);
        let witness = report.witness.unwrap();
        assert_eq!(witness.assignment["?p"], "a");
        assert_eq!(witness.assignment["?q"], "B");
        let is5a = builtin_matrix("builtin:IS5:up_a").unwrap();
        let em = builtin_ruleset(RuleSetName::Em);
        assert!(is_sound(em.rule("EM").unwrap(), &[&is5a], &b).unwrap().sound);
    }

    #[test]
    fn instance_enumeration_examples() {
        let b = budget();
        let nabla = builtin_ruleset(RuleSetName::RNabla);
        let r3 = nabla.rule("r3").unwrap();
        let universe = fms(&["p", "#p", "##p"]);
        let instances = rule_instances(r3, &universe, &b).unwrap();
        assert_eq!(instances, vec![(fms(&["##p"]), fms(&["#p"]))]);
        // no conjunction in the universe starves the conjunction rule
        let r13 = nabla.rule("r13").unwrap();
        assert!(rule_instances(r13, &universe, &b).unwrap().is_empty());
        // a one-variable rule has at most one instance per universe formula
        let r2 = nabla.rule("r2").unwrap();
        let big: BTreeSet<Formula> = crate::formula::enumerate_formulas(&["p", "q"], 1, 1000)
            .unwrap()
            .into_iter()
            .collect();
        assert!(rule_instances(r2, &big, &b).unwrap().len() <= big.len());
    }

    #[test]
    fn universe_caps_and_membership_are_enforced() {
        let nabla = builtin_ruleset(RuleSetName::RNabla);
        let universe = fms(&["p", "#p"]);
        let tight = Budget {
            universe_formulas: 1,
            ..Budget::default()
        };
        let err = derives(&nabla, &fms(&["p"]), &fms(&["#p"]), &universe, &tight).unwrap_err();
        assert_eq!(
            err,
            CalculusError::UniverseCap {
                size: 2,
                cap: 1
            }
        );
        let err = derives(
            &nabla,
            &fms(&["q"]),
            &fms(&["#p"]),
            &universe,
            &Budget::default(),
        )
        .unwrap_err();
        assert_eq!(err, CalculusError::OutsideUniverse(fm("q")));
    }

    #[test]
    fn derives_decides_the_nabla_sequents() {
        let b = budget();
        let nabla = builtin_ruleset(RuleSetName::RNabla);
        let universe = fms(&["p", "#p", "~#p", "#~p", "~#~p"]);
        let both = derives(&nabla, &fms(&["#p", "~#p"]), &BTreeSet::new(), &universe, &b).unwrap();
        assert!(both.derivable());
        let split = derives(&nabla, &BTreeSet::new(), &fms(&["#p", "~#p"]), &universe, &b).unwrap();
        assert!(split.derivable());
    }

    #[test]
    fn underivable_comes_with_a_closed_separating_theory() {
        let b = budget();
        let rbmc = builtin_ruleset(RuleSetName::RBMc);
        let premises = fms(&["p"]);
        let conclusions = fms(&["q"]);
        let report =
            derives_analytic(&rbmc, &SchemaName::S.formulas(), &premises, &conclusions, &b)
                .unwrap();
        let theory = report.theory().expect("underivable").clone();
        assert!(theory.contains(&fm("p")));
        assert!(!theory.contains(&fm("q")));
        let universe: BTreeSet<Formula> = report.universe.iter().cloned().collect();
        assert!(
            validate_separating_theory(&rbmc, &premises, &conclusions, &universe, &theory, &b)
                .unwrap()
        );
    }

    #[test]
    fn analytic_search_examples() {
        let b = budget();
        let joint = builtin_ruleset(RuleSetName::RBMc)
            .union(&builtin_ruleset(RuleSetName::RNabla))
            .unwrap();
        let contradiction_to_anything = derives_analytic(
            &joint,
            &SchemaName::SNabla.formulas(),
            &fms(&["p & ~p"]),
            &fms(&["q"]),
            &b,
        )
        .unwrap();
        assert!(!contradiction_to_anything.derivable());
        let s21 = builtin_ruleset(RuleSetName::S21);
        let s16_closure = derives_analytic(
            &s21,
            &SchemaName::S.formulas(),
            &fms(&["~p", "#p"]),
            &fms(&["p"]),
            &b,
        )
        .unwrap();
        assert!(s16_closure.derivable());
        let rbmc = builtin_ruleset(RuleSetName::RBMc);
        let disjunction_split = derives_analytic(
            &rbmc,
            &SchemaName::S.formulas(),
            &fms(&["p | q"]),
            &fms(&["p", "q"]),
            &b,
        )
        .unwrap();
        assert!(disjunction_split.derivable());
    }

    #[test]
    fn hilbert_engine_examples() {
        let b = budget();
        let hilbert = builtin_ruleset(RuleSetName::RBHilbert);
        let commuted = single_conclusion_derives(
            &hilbert,
            &fms(&["p & q"]),
            &fm("q & p"),
            &UniversePolicy::default(),
            &b,
        )
        .unwrap();
        assert!(commuted.derivable());
        let with_nabla_or = hilbert
            .union(&builtin_ruleset(RuleSetName::RNablaOr))
            .unwrap();
        let axiom = single_conclusion_derives(
            &with_nabla_or,
            &BTreeSet::new(),
            &fm("#p | ~#p"),
            &UniversePolicy::default(),
            &b,
        )
        .unwrap();
        assert!(axiom.derivable());
        // signature guard
        let err = single_conclusion_derives(
            &hilbert,
            &fms(&["p"]),
            &fm("#p"),
            &UniversePolicy::default(),
            &b,
        )
        .unwrap_err();
        assert_eq!(err, CalculusError::SignatureScope);
    }

    #[test]
    fn overlap_and_dilution_hold_on_sampled_instances() {
        let b = budget();
        let rbmc = builtin_ruleset(RuleSetName::RBMc);
        let dm_only = crate::formula::Alphabet {
            constants: true,
            nabla: false,
        };
        let pool =
            crate::formula::enumerate_formulas_with(&["p", "q"], 1, dm_only, 1000).unwrap();
        let mut rng = SplitMix64::new(0xD1CE);
        for _ in 0..40 {
            let pick = |rng: &mut SplitMix64| pool[rng.below(pool.len() as u64) as usize].clone();
            let shared = pick(&mut rng);
            let mut premises = BTreeSet::from([shared.clone(), pick(&mut rng)]);
            let mut conclusions = BTreeSet::from([shared, pick(&mut rng)]);
            let overlap = derives_analytic(
                &rbmc,
                &SchemaName::S.formulas(),
                &premises,
                &conclusions,
                &b,
            )
            .unwrap();
            assert!(overlap.derivable(), "overlap violated");
            // dilution: adding formulas to either side preserves derivability
            premises.insert(pick(&mut rng));
            conclusions.insert(pick(&mut rng));
            let diluted = derives_analytic(
                &rbmc,
                &SchemaName::S.formulas(),
                &premises,
                &conclusions,
                &b,
            )
            .unwrap();
            assert!(diluted.derivable(), "dilution violated");
        }
    }

    #[test]
    fn cut_for_sets_on_small_universes() {
        let b = budget();
        let rbmc = builtin_ruleset(RuleSetName::RBMc);
        let mut rng = SplitMix64::new(0xCAFE);
        let dm_only = crate::formula::Alphabet {
            constants: true,
            nabla: false,
        };
        let pool =
            crate::formula::enumerate_formulas_with(&["p", "q"], 1, dm_only, 1000).unwrap();
        for _ in 0..10 {
            let pick = |rng: &mut SplitMix64| pool[rng.below(pool.len() as u64) as usize].clone();
            let premises = BTreeSet::from([pick(&mut rng)]);
            let conclusions = BTreeSet::from([pick(&mut rng)]);
            let cut_set: Vec<Formula> = (0..3).map(|_| pick(&mut rng)).collect();
            let mut base: BTreeSet<Formula> = premises.union(&conclusions).cloned().collect();
            base.extend(cut_set.iter().cloned());
            let universe = generalized_subformulas(&subformulas(&base), &SchemaName::S.formulas());
            let plain = derives(&rbmc, &premises, &conclusions, &universe, &b).unwrap();
            // cut for sets: if Γ,T ⊩ Δ,F for every partition (T,F) of the
            // cut set, then Γ ⊩ Δ
            let mut all_partitions_derive = true;
            for mask in 0..(1u32 << cut_set.len()) {
                let mut p = premises.clone();
                let mut c = conclusions.clone();
                for (i, f) in cut_set.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        p.insert(f.clone());
                    } else {
                        c.insert(f.clone());
                    }
                }
                if !derives(&rbmc, &p, &c, &universe, &b).unwrap().derivable() {
                    all_partitions_derive = false;
                    break;
                }
            }
            assert!(
                !all_partitions_derive || plain.derivable(),
                "cut for sets violated"
            );
        }
    }

    #[test]
    fn solver_agrees_with_exhaustive_partition_search_on_tiny_universes() {
        // Brute-force oracle: a sequent is underivable over the universe iff
        // some subset T of the universe contains the premises, avoids the
        // conclusions and is closed under every instance.
        let b = budget();
        let joint = builtin_ruleset(RuleSetName::RBMc)
            .union(&builtin_ruleset(RuleSetName::RNabla))
            .unwrap();
        let pool = crate::formula::enumerate_formulas(&["p", "q"], 1, 1000).unwrap();
        let mut rng = SplitMix64::new(0xBEEF);
        for _ in 0..30 {
            let pick = |rng: &mut SplitMix64| pool[rng.below(pool.len() as u64) as usize].clone();
            let premises = BTreeSet::from([pick(&mut rng)]);
            let conclusions = BTreeSet::from([pick(&mut rng)]);
            let mut universe: BTreeSet<Formula> =
                premises.union(&conclusions).cloned().collect();
            universe.extend(subformulas(&universe));
            while universe.len() < 11 {
                universe.insert(pick(&mut rng));
            }
            let report = derives(&joint, &premises, &conclusions, &universe, &b).unwrap();
            let formulas: Vec<&Formula> = universe.iter().collect();
            let mut instances: Vec<Instance> = Vec::new();
            for rule in joint.rules() {
                instances.extend(rule_instances(rule, &universe, &b).unwrap());
            }
            let mut separating = false;
            'subsets: for mask in 0u32..(1 << formulas.len()) {
                let theory: BTreeSet<Formula> = formulas
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, f)| (*f).clone())
                    .collect();
                if !theory.is_superset(&premises)
                    || theory.intersection(&conclusions).next().is_some()
                {
                    continue;
                }
                for (prem, concl) in &instances {
                    if prem.is_subset(&theory) && concl.intersection(&theory).next().is_none() {
                        continue 'subsets;
                    }
                }
                separating = true;
                break;
            }
            assert_eq!(
                report.derivable(),
                !separating,
                "solver disagrees with the exhaustive oracle on {} |- {}",
                join_formulas(&premises),
                join_formulas(&conclusions)
            );
        }
    }

    #[test]
    fn bounded_equality_separates_up_a_from_up_1() {
        let b = budget();
        let upa = builtin_matrix("builtin:IS6:up_a").unwrap();
        let up1 = builtin_matrix("builtin:IS6:up_1").unwrap();
        let left = MatrixOracle::new(vec![&upa], &b);
        let right = MatrixOracle::new(vec![&up1], &b);
        // the pool must reach the disjunctive-syllogism shapes that
        // separate the two logics
        let pool = vec![fm("p"), fm("q"), fm("~p | q"), fm("p & (~p | q)")];
        let report = bounded_logic_equality(&left, &right, &pool, 2, 1, &b).unwrap();
        assert!(!report.agree());
        let ds = report
            .disagreements
            .iter()
            .find(|(s, _, _)| s.premises == fms(&["p & (~p | q)"]) && s.conclusions == fms(&["q"]));
        let (_, in_up_a, in_up_1) = ds.expect("DS instance separates the logics");
        assert!(!in_up_a && *in_up_1);
        assert_eq!(report.agreements + report.disagreements.len(), report.total);
    }

    #[test]
    fn ruleset_text_round_trips() {
        for name in RuleSetName::ALL {
            let rs = builtin_ruleset(name);
            let parsed = RuleSet::from_text(rs.name.clone(), &rs.to_text()).unwrap();
            assert_eq!(parsed.rules(), rs.rules());
            assert_eq!(parsed.signature(), rs.signature());
        }
    }

    #[test]
    fn duplicate_rule_names_are_rejected() {
        let text = "r : ?p / ?p | ?q\nr : ?q / ?q | ?p\n";
        assert!(matches!(
            RuleSet::from_text("dup", text),
            Err(CalculusError::DuplicateRule(_))
        ));
    }

    #[test]
    fn engines_agree_on_sequents_from_a_seeded_pool() {
        let b = budget();
        let hilbert = builtin_ruleset(RuleSetName::RBHilbert);
        let dm_only = crate::formula::Alphabet {
            constants: true,
            nabla: false,
        };
        let pool = crate::formula::enumerate_formulas_with(&["p"], 1, dm_only, 1000).unwrap();
        let mut rng = SplitMix64::new(7);
        for _ in 0..25 {
            let pick = |rng: &mut SplitMix64| pool[rng.below(pool.len() as u64) as usize].clone();
            let premises = BTreeSet::from([pick(&mut rng)]);
            let goal = pick(&mut rng);
            // single_conclusion_derives runs both engines and errors if they
            // ever disagree
            single_conclusion_derives(&hilbert, &premises, &goal, &UniversePolicy::default(), &b)
                .unwrap();
        }
    }

    #[test]
    fn underivable_sequent_matches_the_semantic_countermodel()
    {
        let b = budget();
        let joint = builtin_ruleset(RuleSetName::RBMc)
            .union(&builtin_ruleset(RuleSetName::RNabla))
            .unwrap();
        let s = parse_sequent("p & ~p |- q").unwrap();
        let search = derives_analytic(
            &joint,
            &SchemaName::SNabla.formulas(),
            &s.premises,
            &s.conclusions,
            &b,
        )
        .unwrap();
        assert!(!search.derivable());
        let is6a = builtin_matrix("builtin:IS6:up_a").unwrap();
        let semantic = mc_semantic_consequence(&[&is6a], &s.premises, &s.conclusions, &b).unwrap();
        assert!(!semantic.holds());
    }
}
