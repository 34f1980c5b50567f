//! Formula trees over the `∇`-signature, their text grammar, substitution,
//! subformula closure and bounded enumeration.
//!
//! Concrete grammar (ASCII only): `~` is ¬, `#` is ∇, `&` and `|` are the
//! lattice connectives, `0` is ⊥ and `1` is ⊤. Unary operators bind tightest,
//! `&` binds over `|`, both binary connectives associate to the left.
//! `cons(x)` and `incons(x)` are parse-time sugar for `~#(x & ~x)` and
//! `#(x & ~x)`. Variables are identifiers; an identifier prefixed with `?`
//! is a rule variable (a schematic slot in a calculus rule) and lives in a
//! namespace disjoint from ordinary query variables.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A propositional formula over `{∧, ∨, ¬, ∇, ⊥, ⊤}` and named variables.
///
/// Equality, ordering and hashing are purely syntactic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(String),
    Bot,
    Top,
    Neg(Box<Formula>),
    Nabla(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Formula {
        Formula::Neg(Box::new(self))
    }

    pub fn nabla(self) -> Formula {
        Formula::Nabla(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    /// Left-associated disjunction of a nonempty sequence, `((f1 ∨ f2) ∨ …) ∨ fn`.
    pub fn big_or<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        let mut it = items.into_iter();
        let first = it.next()?;
        Some(it.fold(first, |acc, f| acc.or(f)))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 0,
            Formula::Neg(f) | Formula::Nabla(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 1,
            Formula::Neg(f) | Formula::Nabla(f) => 1 + f.node_count(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    /// Names of all variables occurring in the formula, rule variables included.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Bot | Formula::Top => {}
            Formula::Neg(f) | Formula::Nabla(f) => f.collect_variables(out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    pub fn contains_nabla(&self) -> bool {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => false,
            Formula::Nabla(_) => true,
            Formula::Neg(f) => f.contains_nabla(),
            Formula::And(l, r) | Formula::Or(l, r) => l.contains_nabla() || r.contains_nabla(),
        }
    }

    pub fn contains_constants(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Bot | Formula::Top => true,
            Formula::Neg(f) | Formula::Nabla(f) => f.contains_constants(),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.contains_constants() || r.contains_constants()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 0,
            Formula::And(..) => 1,
            Formula::Neg(_) | Formula::Nabla(_) => 2,
            Formula::Var(_) | Formula::Bot | Formula::Top => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Bot => write!(f, "0"),
            Formula::Top => write!(f, "1"),
            Formula::Neg(x) => {
                write!(f, "~")?;
                x.fmt_prec(f, 2)
            }
            Formula::Nabla(x) => {
                write!(f, "#")?;
                x.fmt_prec(f, 2)
            }
            Formula::And(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " & ")?;
                r.fmt_prec(f, 2)
            }
            Formula::Or(l, r) => {
                l.fmt_prec(f, 0)?;
                write!(f, " | ")?;
                r.fmt_prec(f, 1)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Parser<'a> {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::new(
                self.pos,
                format!("expected '{}'", c as char),
            )),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_alphanumeric() || b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.src[start..self.pos].to_string()
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'#') => {
                self.pos += 1;
                Ok(self.unary()?.nabla())
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(b'?') => {
                self.pos += 1;
                let name = self.ident();
                if name.is_empty() {
                    return Err(ParseError::new(self.pos, "expected identifier after '?'"));
                }
                Ok(Formula::var(format!("?{name}")))
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let pos = self.pos;
                let name = self.ident();
                match name.as_str() {
                    // LFI-style consistency/inconsistency operators, expanded
                    // at parse time.
                    "cons" | "incons" => {
                        self.expect(b'(')?;
                        let inner = self.formula()?;
                        self.expect(b')')?;
                        let body = inner.clone().and(inner.neg()).nabla();
                        Ok(if name == "cons" { body.neg() } else { body })
                    }
                    _ => {
                        if name.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                            Err(ParseError::new(pos, "identifier cannot start with digit"))
                        } else {
                            Ok(Formula::Var(name))
                        }
                    }
                }
            }
            _ => Err(ParseError::new(self.pos, "expected formula")),
        }
    }
}

/// Parses a single formula; the whole input must be consumed.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(ParseError::new(p.pos, "unexpected trailing input"));
    }
    Ok(f)
}

/// A finite map from variable names to formulas, applied homomorphically and
/// acting as the identity on unmapped variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Formula>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn bind(mut self, var: impl Into<String>, f: Formula) -> Substitution {
        self.map.insert(var.into(), f);
        self
    }

    pub fn insert(&mut self, var: impl Into<String>, f: Formula) {
        self.map.insert(var.into(), f);
    }

    pub fn get(&self, var: &str) -> Option<&Formula> {
        self.map.get(var)
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| f.clone()),
            Formula::Bot | Formula::Top => f.clone(),
            Formula::Neg(x) => self.apply(x).neg(),
            Formula::Nabla(x) => self.apply(x).nabla(),
            Formula::And(l, r) => self.apply(l).and(self.apply(r)),
            Formula::Or(l, r) => self.apply(l).or(self.apply(r)),
        }
    }

    /// Sequential composition: applying `self.then(&t)` equals applying
    /// `self` first and `t` afterwards.
    pub fn then(&self, t: &Substitution) -> Substitution {
        let mut map: BTreeMap<String, Formula> = self
            .map
            .iter()
            .map(|(v, f)| (v.clone(), t.apply(f)))
            .collect();
        for (v, f) in &t.map {
            map.entry(v.clone()).or_insert_with(|| f.clone());
        }
        Substitution { map }
    }
}

/// Least set containing `fs` and closed under the subformula relation.
pub fn subformulas(fs: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for f in fs {
        collect_subformulas(f, &mut out);
    }
    out
}

fn collect_subformulas(f: &Formula, out: &mut BTreeSet<Formula>) {
    if !out.insert(f.clone()) {
        return;
    }
    match f {
        Formula::Var(_) | Formula::Bot | Formula::Top => {}
        Formula::Neg(x) | Formula::Nabla(x) => collect_subformulas(x, out),
        Formula::And(l, r) | Formula::Or(l, r) => {
            collect_subformulas(l, out);
            collect_subformulas(r, out);
        }
    }
}

/// `base` together with every instance of a schema formula whose variables
/// are mapped into `base` — the "generalized subformulas" universe used by
/// analytic proof search. An empty base yields an empty result.
pub fn generalized_subformulas(base: &BTreeSet<Formula>, schema: &[Formula]) -> BTreeSet<Formula> {
    let mut out = base.clone();
    if base.is_empty() {
        return out;
    }
    let pool: Vec<&Formula> = base.iter().collect();
    for a in schema {
        let vars: Vec<String> = a.variables().into_iter().collect();
        if vars.is_empty() {
            out.insert(a.clone());
            continue;
        }
        // Odometer over all maps vars -> base.
        let mut idx = vec![0usize; vars.len()];
        'maps: loop {
            let mut sigma = Substitution::new();
            for (v, &i) in vars.iter().zip(idx.iter()) {
                sigma.insert(v.clone(), pool[i].clone());
            }
            out.insert(sigma.apply(a));
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break 'maps;
                }
                idx[k] += 1;
                if idx[k] < pool.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    out
}

/// Which generators may appear in an enumerated formula pool.
#[derive(Debug, Clone, Copy)]
pub struct Alphabet {
    pub constants: bool,
    pub nabla: bool,
}

impl Alphabet {
    pub const FULL: Alphabet = Alphabet {
        constants: true,
        nabla: true,
    };
}

/// Deterministic duplicate-free pool of formulas of depth `<= max_depth`
/// over the given variables, in depth-then-construction order: depth-0 atoms
/// are the variables (in the given order) followed by `0` and `1`; each
/// deeper level adds `~f`, `#f`, then all `f & g`, then all `f | g`.
pub fn enumerate_formulas(
    vars: &[&str],
    max_depth: usize,
    cap: usize,
) -> Result<Vec<Formula>, PoolError> {
    enumerate_formulas_with(vars, max_depth, Alphabet::FULL, cap)
}

pub fn enumerate_formulas_with(
    vars: &[&str],
    max_depth: usize,
    alphabet: Alphabet,
    cap: usize,
) -> Result<Vec<Formula>, PoolError> {
    fn push(pool: &mut Vec<Formula>, cap: usize, f: Formula) -> Result<(), PoolError> {
        if pool.len() >= cap {
            return Err(PoolError::FormulaCap { cap });
        }
        pool.push(f);
        Ok(())
    }
    let mut pool: Vec<Formula> = Vec::new();
    for v in vars {
        push(&mut pool, cap, Formula::var(*v))?;
    }
    if alphabet.constants {
        push(&mut pool, cap, Formula::Bot)?;
        push(&mut pool, cap, Formula::Top)?;
    }
    let mut level_start = 0;
    for _ in 0..max_depth {
        let level_end = pool.len();
        for i in level_start..level_end {
            let f = pool[i].clone().neg();
            push(&mut pool, cap, f)?;
        }
        if alphabet.nabla {
            for i in level_start..level_end {
                let f = pool[i].clone().nabla();
                push(&mut pool, cap, f)?;
            }
        }
        for i in 0..level_end {
            for j in 0..level_end {
                if i >= level_start || j >= level_start {
                    let f = pool[i].clone().and(pool[j].clone());
                    push(&mut pool, cap, f)?;
                }
            }
        }
        for i in 0..level_end {
            for j in 0..level_end {
                if i >= level_start || j >= level_start {
                    let f = pool[i].clone().or(pool[j].clone());
                    push(&mut pool, cap, f)?;
                }
            }
        }
        level_start = level_end;
    }
    Ok(pool)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoolError {
    #[error("formula pool exceeds cap of {cap}")]
    FormulaCap { cap: usize },
    #[error("sequent pool of {size} exceeds cap of {cap}")]
    SequentCap { size: u64, cap: u64 },
}

/// A premise set paired with a conclusion set, conclusions read disjunctively.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sequent {
    pub premises: BTreeSet<Formula>,
    pub conclusions: BTreeSet<Formula>,
}

impl Sequent {
    pub fn new<P, C>(premises: P, conclusions: C) -> Sequent
    where
        P: IntoIterator<Item = Formula>,
        C: IntoIterator<Item = Formula>,
    {
        Sequent {
            premises: premises.into_iter().collect(),
            conclusions: conclusions.into_iter().collect(),
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, fs: &BTreeSet<Formula>) -> fmt::Result {
            if fs.is_empty() {
                return write!(f, ".");
            }
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        }
        side(f, &self.premises)?;
        write!(f, " |- ")?;
        side(f, &self.conclusions)
    }
}

/// Parses `P1, P2 |- C1, C2`; an empty side is written `.` (or, on the
/// premise side, omitted entirely: `|- p | ~p`).
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let split = text
        .find("|-")
        .ok_or_else(|| ParseError::new(0, "missing '|-'"))?;
    let premises = parse_side(&text[..split])?;
    let conclusions = parse_side(&text[split + 2..])?;
    Ok(Sequent {
        premises,
        conclusions,
    })
}

fn parse_side(text: &str) -> Result<BTreeSet<Formula>, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "." {
        return Ok(BTreeSet::new());
    }
    trimmed.split(',').map(parse_formula).collect()
}

/// All sequents with both sides drawn from `pool` within the size bounds, in
/// deterministic order (premise subsets by size then index order, conclusion
/// subsets likewise in an inner loop). Sides may be empty.
pub fn enumerate_sequents(
    pool: &[Formula],
    max_premises: usize,
    max_conclusions: usize,
    cap: u64,
) -> Result<Vec<Sequent>, PoolError> {
    let premise_sides = subsets_up_to(pool, max_premises);
    let conclusion_sides = subsets_up_to(pool, max_conclusions);
    let size = premise_sides.len() as u64 * conclusion_sides.len() as u64;
    if size > cap {
        return Err(PoolError::SequentCap { size, cap });
    }
    let mut out = Vec::with_capacity(size as usize);
    for p in &premise_sides {
        for c in &conclusion_sides {
            out.push(Sequent {
                premises: p.iter().cloned().collect(),
                conclusions: c.iter().cloned().collect(),
            });
        }
    }
    Ok(out)
}

/// Subsets of `pool` of size `<= k`, ordered by size then lexicographically
/// by element index.
fn subsets_up_to(pool: &[Formula], k: usize) -> Vec<Vec<Formula>> {
    let mut out = vec![Vec::new()];
    let mut current: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        let mut next: Vec<Vec<usize>> = Vec::new();
        for idx in &current {
            let start = idx.last().map_or(0, |&i| i + 1);
            for j in start..pool.len() {
                let mut grown = idx.clone();
                grown.push(j);
                next.push(grown);
            }
        }
        for idx in &next {
            out.push(idx.iter().map(|&i| pool[i].clone()).collect());
        }
        current = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fm(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn parses_negated_conjunction() {
        assert_eq!(
            fm("~(p & q)"),
            Formula::var("p").and(Formula::var("q")).neg()
        );
    }

    #[test]
    fn parses_nabla_chain_with_bot() {
        assert_eq!(
            fm("#~p | 0"),
            Formula::var("p").neg().nabla().or(Formula::Bot)
        );
    }

    #[test]
    fn cons_expands_to_consistency_operator() {
        let p = Formula::var("p");
        assert_eq!(fm("cons(p)"), p.clone().and(p.clone().neg()).nabla().neg());
        assert_eq!(fm("incons(p)"), p.clone().and(p.neg()).nabla());
    }

    #[test]
    fn rule_variables_parse_with_sigil() {
        assert_eq!(fm("#?p"), Formula::var("?p").nabla());
    }

    #[test]
    fn precedence_is_unary_then_and_then_or() {
        assert_eq!(
            fm("~p & q | r"),
            Formula::var("p")
                .neg()
                .and(Formula::var("q"))
                .or(Formula::var("r"))
        );
        // Left association on both binary connectives.
        assert_eq!(fm("p | q | r"), fm("(p | q) | r"));
        assert_eq!(fm("p & q & r"), fm("(p & q) & r"));
    }

    #[test]
    fn reports_error_position() {
        let err = parse_formula("p & & q").unwrap_err();
        assert_eq!(err.pos, 4);
        assert!(parse_formula("p q").is_err());
    }

    #[test]
    fn subformula_closure_matches_examples() {
        let sub = |s: &str| subformulas(&BTreeSet::from([fm(s)]));
        assert_eq!(sub("#p"), BTreeSet::from([fm("#p"), fm("p")]));
        assert_eq!(
            sub("p & ~p"),
            BTreeSet::from([fm("p & ~p"), fm("p"), fm("~p")])
        );
        assert_eq!(subformulas(&BTreeSet::new()), BTreeSet::new());
    }

    #[test]
    fn generalized_subformulas_instantiates_schema() {
        let base = BTreeSet::from([fm("p")]);
        let nabla_schema = [fm("#p"), fm("~#p"), fm("#~p"), fm("~#~p")];
        assert_eq!(
            generalized_subformulas(&base, &nabla_schema),
            BTreeSet::from([fm("p"), fm("#p"), fm("~#p"), fm("#~p"), fm("~#~p")])
        );
        let separators = [fm("p"), fm("~p")];
        assert_eq!(
            generalized_subformulas(&base, &separators),
            BTreeSet::from([fm("p"), fm("~p")])
        );
        assert_eq!(
            generalized_subformulas(&BTreeSet::new(), &separators),
            BTreeSet::new()
        );
    }

    #[test]
    fn generalized_subformulas_is_monotone_in_both_arguments() {
        let base_small = BTreeSet::from([fm("p")]);
        let base_large = BTreeSet::from([fm("p"), fm("q & p")]);
        let schema_small = [fm("~p")];
        let schema_large = [fm("~p"), fm("#p")];
        let small = generalized_subformulas(&base_small, &schema_small);
        assert!(small.is_subset(&generalized_subformulas(&base_large, &schema_small)));
        assert!(small.is_subset(&generalized_subformulas(&base_small, &schema_large)));
    }

    #[test]
    fn depth_zero_pool_is_vars_then_constants() {
        let pool = enumerate_formulas(&["p"], 0, 1000).unwrap();
        assert_eq!(pool, vec![fm("p"), Formula::Bot, Formula::Top]);
    }

    #[test]
    fn depth_one_pool_over_two_vars_has_44_formulas() {
        let pool = enumerate_formulas(&["p", "q"], 1, 1000).unwrap();
        assert_eq!(pool.len(), 44);
        let dedup: BTreeSet<_> = pool.iter().cloned().collect();
        assert_eq!(dedup.len(), 44);
    }

    #[test]
    fn enumeration_is_stable_across_runs() {
        let a = enumerate_formulas(&["p", "q"], 2, 100_000).unwrap();
        let b = enumerate_formulas(&["p", "q"], 2, 100_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn formula_cap_is_reported() {
        assert_eq!(
            enumerate_formulas(&["p", "q"], 1, 10),
            Err(PoolError::FormulaCap { cap: 10 })
        );
    }

    #[test]
    fn sequent_cap_is_reported() {
        let pool = enumerate_formulas(&["p"], 0, 100).unwrap();
        assert_eq!(
            enumerate_sequents(&pool, 1, 1, 3),
            Err(PoolError::SequentCap { size: 16, cap: 3 })
        );
    }

    #[test]
    fn sequent_text_round_trips() {
        for s in ["p & ~p |- q, ~q", ". |- .", "p |- .", ". |- #p | ~#p"] {
            let seq = parse_sequent(s).unwrap();
            assert_eq!(parse_sequent(&seq.to_string()).unwrap(), seq);
        }
        // Empty premise side may be omitted entirely.
        let seq = parse_sequent("|- p | ~p").unwrap();
        assert!(seq.premises.is_empty());
        assert_eq!(seq.conclusions, BTreeSet::from([fm("p | ~p")]));
    }

    #[test]
    fn sequent_enumeration_counts_and_dedups() {
        let pool = enumerate_formulas(&["p"], 0, 100).unwrap();
        let seqs = enumerate_sequents(&pool, 2, 1, 10_000).unwrap();
        // (1 + 3 + 3) premise sides x (1 + 3) conclusion sides.
        assert_eq!(seqs.len(), 28);
        let dedup: BTreeSet<_> = seqs.iter().cloned().collect();
        assert_eq!(dedup.len(), 28);
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            prop_oneof![Just("p"), Just("q"), Just("r"), Just("x_1")].prop_map(Formula::var),
            Just(Formula::Bot),
            Just(Formula::Top),
        ];
        leaf.prop_recursive(5, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::neg),
                inner.clone().prop_map(Formula::nabla),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(f in arb_formula()) {
            prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn substitution_composition(f in arb_formula(), g in arb_formula(), h in arb_formula()) {
            let sigma = Substitution::new().bind("p", g);
            let tau = Substitution::new().bind("q", h);
            prop_assert_eq!(tau.apply(&sigma.apply(&f)), sigma.then(&tau).apply(&f));
        }
    }
}
