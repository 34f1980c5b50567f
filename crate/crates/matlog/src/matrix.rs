//! Logical matrices and their consequence relations.
//!
//! A matrix is a finite algebra with a designated subset. Semantic
//! consequence (single- and multiple-conclusion) is decided by enumerating
//! valuations over the variables occurring in the query; a failing query
//! returns the first countermodel in enumeration order, reported with
//! element names. Leibniz congruences are computed from the closure of the
//! unary polynomial functions, with exhaustive congruence enumeration kept
//! as an independent oracle for small carriers.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::HashMap;
use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::{
    self, algebra_to_text, hat_reduct, nabla_lift, subalgebra, AlgebraError, FiniteAlgebra,
    Signature, Sym, TextError,
};
use crate::formula::Formula;
use crate::Budget;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("query needs {needed} valuations, cap is {cap}")]
    ValuationCap { needed: u128, cap: u64 },
    #[error("polynomial closure needs more than {cap} table entries")]
    PolynomialCap { cap: u64 },
    #[error("isomorphism search capped at {cap} elements, got {size}")]
    IsomorphismCap { size: usize, cap: usize },
    #[error("designated element {0} is out of range")]
    BadDesignated(usize),
    #[error("formula uses operations outside the matrix signature")]
    SignatureMismatch,
    #[error("bad builtin matrix address '{0}' (expected builtin:<ALGEBRA>:<DESIGNATED>)")]
    BadAddress(String),
    #[error(transparent)]
    Text(#[from] TextError),
}

/// A finite algebra together with a designated subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalMatrix {
    algebra: FiniteAlgebra,
    designated: BTreeSet<usize>,
}

impl LogicalMatrix {
    pub fn new(
        algebra: FiniteAlgebra,
        designated: BTreeSet<usize>,
    ) -> Result<LogicalMatrix, MatrixError> {
        if let Some(&bad) = designated.iter().find(|&&d| d >= algebra.size()) {
            return Err(MatrixError::BadDesignated(bad));
        }
        Ok(LogicalMatrix {
            algebra,
            designated,
        })
    }

    pub fn with_designated_names(
        algebra: FiniteAlgebra,
        names: &[&str],
    ) -> Result<LogicalMatrix, MatrixError> {
        let mut designated = BTreeSet::new();
        for n in names {
            let idx = algebra
                .element_index(n)
                .ok_or_else(|| AlgebraError::UnknownElement(n.to_string()))?;
            designated.insert(idx);
        }
        LogicalMatrix::new(algebra, designated)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn designated(&self) -> &BTreeSet<usize> {
        &self.designated
    }

    pub fn is_designated(&self, x: usize) -> bool {
        self.designated.contains(&x)
    }

    pub fn designated_names(&self) -> Vec<&str> {
        self.designated
            .iter()
            .map(|&i| self.algebra.element_name(i))
            .collect()
    }

    /// Flags the degenerate designated sets that trivialize the matrix.
    pub fn degeneracy(&self) -> Option<&'static str> {
        if self.designated.is_empty() {
            Some("empty designated set")
        } else if self.designated.len() == self.algebra.size() {
            Some("total designated set")
        } else {
            None
        }
    }
}

impl fmt::Display for LogicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}, {{{}}}>",
            self.algebra.name(),
            self.designated_names().join(",")
        )
    }
}

/// A falsifying valuation, reported with element names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterModel {
    pub matrix_index: usize,
    pub matrix_name: String,
    pub assignment: BTreeMap<String, String>,
    /// The conclusions left undesignated (all of them, in the
    /// multiple-conclusion case).
    pub offending: Vec<Formula>,
}

impl fmt::Display for CounterModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with ", self.matrix_name)?;
        if self.assignment.is_empty() {
            write!(f, "the empty valuation")?;
        } else {
            for (i, (v, e)) in self.assignment.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}={e}")?;
            }
        }
        if !self.offending.is_empty() {
            let fs: Vec<String> = self.offending.iter().map(|f| f.to_string()).collect();
            write!(f, " leaves undesignated: {}", fs.join(", "))?;
        }
        Ok(())
    }
}

/// Verdict of a semantic query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consequence {
    Holds,
    Fails(CounterModel),
}

impl Consequence {
    pub fn holds(&self) -> bool {
        matches!(self, Consequence::Holds)
    }

    pub fn witness(&self) -> Option<&CounterModel> {
        match self {
            Consequence::Holds => None,
            Consequence::Fails(w) => Some(w),
        }
    }
}

fn check_signatures(
    matrices: &[&LogicalMatrix],
    formulas: impl Iterator<Item = impl std::borrow::Borrow<Formula>>,
) -> Result<(), MatrixError> {
    let weakest = matrices
        .iter()
        .map(|m| m.algebra().signature())
        .min()
        .unwrap_or(Signature::InvolutiveStone);
    if weakest == Signature::DeMorgan {
        for f in formulas {
            if f.borrow().contains_nabla() {
                return Err(MatrixError::SignatureMismatch);
            }
        }
    }
    Ok(())
}

fn eval_slots(
    a: &FiniteAlgebra,
    f: &Formula,
    slots: &HashMap<&str, usize>,
    assignment: &[usize],
) -> usize {
    match f {
        Formula::Var(v) => assignment[slots[v.as_str()]],
        Formula::Bot => a.bot(),
        Formula::Top => a.top(),
        Formula::Neg(x) => a.negate(eval_slots(a, x, slots, assignment)),
        Formula::Nabla(x) => a
            .op1(Sym::Nabla, eval_slots(a, x, slots, assignment))
            .expect("signature checked before evaluation"),
        Formula::And(l, r) => a.meet(
            eval_slots(a, l, slots, assignment),
            eval_slots(a, r, slots, assignment),
        ),
        Formula::Or(l, r) => a.join(
            eval_slots(a, l, slots, assignment),
            eval_slots(a, r, slots, assignment),
        ),
    }
}

/// Designation-preservation from premises to a single conclusion, over every
/// matrix and every valuation of the variables occurring in the query.
pub fn semantic_consequence(
    matrices: &[&LogicalMatrix],
    premises: &BTreeSet<Formula>,
    conclusion: &Formula,
    budget: &Budget,
) -> Result<Consequence, MatrixError> {
    let conclusions = BTreeSet::from([conclusion.clone()]);
    mc_semantic_consequence(matrices, premises, &conclusions, budget)
}

/// Multiple-conclusion consequence: no valuation may designate every premise
/// while designating no conclusion. An empty conclusion set asks that no
/// valuation designates all premises.
pub fn mc_semantic_consequence(
    matrices: &[&LogicalMatrix],
    premises: &BTreeSet<Formula>,
    conclusions: &BTreeSet<Formula>,
    budget: &Budget,
) -> Result<Consequence, MatrixError> {
    check_signatures(matrices, premises.iter().chain(conclusions.iter()))?;
    let mut vars: BTreeSet<String> = BTreeSet::new();
    for f in premises.iter().chain(conclusions.iter()) {
        vars.extend(f.variables());
    }
    let vars: Vec<String> = vars.into_iter().collect();
    let slots: HashMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let mut total: u128 = 0;
    for m in matrices {
        total += (m.algebra().size() as u128).pow(vars.len() as u32);
    }
    if total > budget.valuations as u128 {
        return Err(MatrixError::ValuationCap {
            needed: total,
            cap: budget.valuations,
        });
    }
    let premises: Vec<&Formula> = premises.iter().collect();
    let conclusions: Vec<&Formula> = conclusions.iter().collect();
    for (mi, m) in matrices.iter().enumerate() {
        let a = m.algebra();
        let n = a.size();
        let count = (n as u64).pow(vars.len() as u32);
        let scan = |from: u64, to: u64| -> Option<u64> {
            let mut assignment = decode_valuation(from, n, vars.len());
            let mut index = from;
            while index < to {
                let designated_premises = premises
                    .iter()
                    .all(|p| m.is_designated(eval_slots(a, p, &slots, &assignment)));
                if designated_premises
                    && !conclusions
                        .iter()
                        .any(|c| m.is_designated(eval_slots(a, c, &slots, &assignment)))
                {
                    return Some(index);
                }
                index += 1;
                bump_valuation(&mut assignment, n);
            }
            None
        };
        let found = if budget.jobs > 1 && count > 1024 {
            let jobs = budget.jobs.min(count as usize);
            let chunk = count.div_ceil(jobs as u64);
            std::thread::scope(|s| {
                let handles: Vec<_> = (0..jobs as u64)
                    .map(|j| {
                        let scan = &scan;
                        s.spawn(move || scan(j * chunk, ((j + 1) * chunk).min(count)))
                    })
                    .collect();
                handles
                    .into_iter()
                    .filter_map(|h| h.join().expect("valuation worker panicked"))
                    .min()
            })
        } else {
            scan(0, count)
        };
        if let Some(index) = found {
            let assignment = decode_valuation(index, n, vars.len());
            let witness = CounterModel {
                matrix_index: mi,
                matrix_name: m.to_string(),
                assignment: vars
                    .iter()
                    .zip(&assignment)
                    .map(|(v, &e)| (v.clone(), a.element_name(e).to_string()))
                    .collect(),
                offending: conclusions.iter().map(|&c| c.clone()).collect(),
            };
            return Ok(Consequence::Fails(witness));
        }
    }
    Ok(Consequence::Holds)
}

fn decode_valuation(mut index: u64, n: usize, vars: usize) -> Vec<usize> {
    let mut out = vec![0usize; vars];
    for slot in out.iter_mut() {
        *slot = (index % n as u64) as usize;
        index /= n as u64;
    }
    out
}

fn bump_valuation(assignment: &mut [usize], n: usize) {
    for slot in assignment.iter_mut() {
        *slot += 1;
        if *slot < n {
            return;
        }
        *slot = 0;
    }
}

/// A partition of the carrier, normalized so block ids appear in first-use
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
}

impl Partition {
    fn normalize(raw: &[usize]) -> Partition {
        let mut rename: BTreeMap<usize, usize> = BTreeMap::new();
        let mut block_of = Vec::with_capacity(raw.len());
        for &b in raw {
            let next = rename.len();
            block_of.push(*rename.entry(b).or_insert(next));
        }
        Partition { block_of }
    }

    pub fn identity(n: usize) -> Partition {
        Partition {
            block_of: (0..n).collect(),
        }
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn block_count(&self) -> usize {
        self.block_of.iter().max().map_or(0, |&m| m + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.block_count() == self.block_of.len()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    /// True when every block of `self` is contained in a block of `other`
    /// (i.e. `self` refines `other`).
    pub fn refines(&self, other: &Partition) -> bool {
        let n = self.block_of.len();
        for x in 0..n {
            for y in (x + 1)..n {
                if self.same(x, y) && !other.same(x, y) {
                    return false;
                }
            }
        }
        true
    }

    pub fn render(&self, a: &FiniteAlgebra) -> String {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|&x| a.element_name(x)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        blocks.join(" ")
    }

    /// Congruence property by definition: each operation respects the blocks.
    pub fn is_congruence(&self, a: &FiniteAlgebra) -> bool {
        let n = a.size();
        for &sym in a.signature().symbols() {
            match sym.arity() {
                1 => {
                    for x in 0..n {
                        for y in 0..n {
                            if self.same(x, y)
                                && !self.same(a.op1(sym, x).unwrap(), a.op1(sym, y).unwrap())
                            {
                                return false;
                            }
                        }
                    }
                }
                2 => {
                    for x in 0..n {
                        for y in 0..n {
                            if !self.same(x, y) {
                                continue;
                            }
                            for z in 0..n {
                                if !self.same(
                                    a.op2(sym, x, z).unwrap(),
                                    a.op2(sym, y, z).unwrap(),
                                ) || !self.same(
                                    a.op2(sym, z, x).unwrap(),
                                    a.op2(sym, z, y).unwrap(),
                                ) {
                                    return false;
                                }
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        true
    }

    /// Compatibility with a designated set: no block straddles the boundary.
    pub fn compatible_with(&self, designated: &BTreeSet<usize>) -> bool {
        let n = self.block_of.len();
        for x in 0..n {
            for y in 0..n {
                if self.same(x, y) && designated.contains(&x) && !designated.contains(&y) {
                    return false;
                }
            }
        }
        true
    }
}

/// The closure of the unary polynomial functions of an algebra: the least
/// set of self-maps containing the identity and the constant maps, closed
/// under applying the operations to maps already obtained.
///
/// The closure depends only on the algebra, so it can be computed once and
/// reused for the Leibniz congruences of every matrix over it.
#[derive(Debug, Clone)]
pub struct PolynomialClosure {
    maps: Vec<Box<[u16]>>,
    carrier: usize,
}

impl PolynomialClosure {
    pub fn new(a: &FiniteAlgebra, budget: &Budget) -> Result<PolynomialClosure, MatrixError> {
        let n = a.size();
        // Carriers up to 16 fit a packed 4-bit-per-entry key; beyond that the
        // map itself is the key.
        enum Seen {
            Packed(HashSet<u64>),
            Wide(HashSet<Box<[u16]>>),
        }
        let mut seen = if n <= 16 {
            Seen::Packed(HashSet::new())
        } else {
            Seen::Wide(HashSet::new())
        };
        let mut maps: Vec<Box<[u16]>> = Vec::new();
        let mut push = |maps: &mut Vec<Box<[u16]>>, m: &[u16]| -> Result<(), MatrixError> {
            let new = match &mut seen {
                Seen::Packed(set) => {
                    let key = m.iter().fold(0u64, |acc, &e| (acc << 4) | e as u64);
                    set.insert(key)
                }
                Seen::Wide(set) => {
                    if set.contains(m) {
                        false
                    } else {
                        set.insert(m.into())
                    }
                }
            };
            if new {
                if (maps.len() as u64 + 1) * n as u64 > budget.polynomial_entries {
                    return Err(MatrixError::PolynomialCap {
                        cap: budget.polynomial_entries,
                    });
                }
                maps.push(m.into());
            }
            Ok(())
        };
        let identity: Vec<u16> = (0..n).map(|x| x as u16).collect();
        push(&mut maps, &identity)?;
        for c in 0..n {
            push(&mut maps, &vec![c as u16; n])?;
        }
        let mut scratch = vec![0u16; n];
        let mut frontier_start = 0;
        while frontier_start < maps.len() {
            let frontier_end = maps.len();
            for &sym in a.signature().symbols() {
                match sym.arity() {
                    1 => {
                        let table = a.table(sym).unwrap();
                        for i in frontier_start..frontier_end {
                            for x in 0..n {
                                scratch[x] = table[maps[i][x] as usize];
                            }
                            push(&mut maps, &scratch)?;
                        }
                    }
                    2 => {
                        let table = a.table(sym).unwrap();
                        // For a commutative table half the pairs suffice.
                        let commutative = (0..n)
                            .all(|x| (0..n).all(|y| table[x * n + y] == table[y * n + x]));
                        for i in 0..frontier_end {
                            let j_start = if commutative { i } else { 0 };
                            for j in j_start..frontier_end {
                                if i < frontier_start && j < frontier_start {
                                    continue;
                                }
                                for x in 0..n {
                                    scratch[x] =
                                        table[maps[i][x] as usize * n + maps[j][x] as usize];
                                }
                                push(&mut maps, &scratch)?;
                            }
                        }
                    }
                    _ => {}
                }
            }
            frontier_start = frontier_end;
        }
        Ok(PolynomialClosure { maps, carrier: n })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Groups elements by designation of their images: two elements are
    /// congruent iff no unary polynomial sends exactly one of them into the
    /// designated set.
    pub fn leibniz(&self, designated: &BTreeSet<usize>) -> Partition {
        let n = self.carrier;
        let in_d: Vec<bool> = (0..n).map(|x| designated.contains(&x)).collect();
        let mut raw: Vec<usize> = (0..n).collect();
        for x in 0..n {
            if raw[x] != x {
                continue;
            }
            for y in (x + 1)..n {
                if raw[y] != y {
                    continue;
                }
                let separated = self
                    .maps
                    .iter()
                    .any(|p| in_d[p[x] as usize] != in_d[p[y] as usize]);
                if !separated {
                    raw[y] = x;
                }
            }
        }
        Partition::normalize(&raw)
    }
}

/// The Leibniz congruence of the matrix: the greatest congruence compatible
/// with the designated set, computed by separating elements through the
/// unary polynomial functions.
pub fn leibniz_congruence(m: &LogicalMatrix, budget: &Budget) -> Result<Partition, MatrixError> {
    let closure = PolynomialClosure::new(m.algebra(), budget)?;
    let partition = closure.leibniz(m.designated());
    debug_assert!(partition.is_congruence(m.algebra()));
    debug_assert!(partition.compatible_with(m.designated()));
    Ok(partition)
}

/// All congruences of the algebra by exhaustive partition enumeration
/// (test oracle; carriers up to 10 elements).
pub fn enumerate_congruences(a: &FiniteAlgebra) -> Result<Vec<Partition>, MatrixError> {
    let n = a.size();
    if n > 10 {
        return Err(AlgebraError::CarrierTooLarge { size: n }.into());
    }
    let mut out = Vec::new();
    // Restricted growth strings enumerate set partitions exactly once.
    let mut rgs = vec![0usize; n];
    loop {
        let partition = Partition {
            block_of: rgs.clone(),
        };
        if partition.is_congruence(a) {
            out.push(partition);
        }
        // next restricted growth string
        let mut k = n as isize - 1;
        loop {
            if k <= 0 {
                return Ok(out);
            }
            let max_prefix = rgs[..k as usize].iter().copied().max().unwrap();
            if rgs[k as usize] <= max_prefix {
                rgs[k as usize] += 1;
                for x in rgs.iter_mut().skip(k as usize + 1) {
                    *x = 0;
                }
                break;
            }
            k -= 1;
        }
    }
}

/// Independent Leibniz oracle: the maximum, under refinement, of all
/// congruences compatible with the designated set.
pub fn leibniz_by_enumeration(m: &LogicalMatrix) -> Result<Partition, MatrixError> {
    let congruences = enumerate_congruences(m.algebra())?;
    let compatible: Vec<&Partition> = congruences
        .iter()
        .filter(|p| p.compatible_with(m.designated()))
        .collect();
    let best = compatible
        .iter()
        .find(|p| compatible.iter().all(|q| q.refines(p)))
        .expect("the identity congruence is always compatible");
    Ok((*best).clone())
}

/// Quotient of the matrix by its Leibniz congruence. Quotient elements are
/// named after each block's first member; the result is reduced.
pub fn reduce(m: &LogicalMatrix, budget: &Budget) -> Result<LogicalMatrix, MatrixError> {
    let partition = leibniz_congruence(m, budget)?;
    quotient(m, &partition)
}

fn quotient(m: &LogicalMatrix, partition: &Partition) -> Result<LogicalMatrix, MatrixError> {
    let a = m.algebra();
    let blocks = partition.blocks();
    let representative: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
    let elements: Vec<String> = representative
        .iter()
        .map(|&r| a.element_name(r).to_string())
        .collect();
    let mut tables = Vec::new();
    for &sym in a.signature().symbols() {
        match sym.arity() {
            0 => tables.push(vec![
                partition.block_of(a.constant(sym).unwrap()) as u16
            ]),
            1 => tables.push(
                representative
                    .iter()
                    .map(|&r| partition.block_of(a.op1(sym, r).unwrap()) as u16)
                    .collect(),
            ),
            2 => {
                let mut t = Vec::with_capacity(blocks.len() * blocks.len());
                for &x in &representative {
                    for &y in &representative {
                        t.push(partition.block_of(a.op2(sym, x, y).unwrap()) as u16);
                    }
                }
                tables.push(t);
            }
            _ => unreachable!(),
        }
    }
    let quotient_algebra = FiniteAlgebra::new(
        format!("{}*", a.name()),
        a.signature(),
        elements,
        tables,
    )
    .map_err(MatrixError::Algebra)?;
    let designated: BTreeSet<usize> = (0..blocks.len())
        .filter(|&b| blocks[b].iter().any(|x| m.is_designated(*x)))
        .collect();
    LogicalMatrix::new(quotient_algebra, designated)
}

/// `M ↦ M^∇`: lifts the algebra and designates the fresh top as well.
pub fn matrix_nabla_lift(m: &LogicalMatrix) -> Result<LogicalMatrix, MatrixError> {
    let lifted = nabla_lift(m.algebra())?;
    let mut designated = m.designated().clone();
    designated.insert(lifted.top());
    LogicalMatrix::new(lifted, designated)
}

/// `M ↦ M̂`: the ∇-free reduct of the lift, fresh top designated.
pub fn matrix_hat(m: &LogicalMatrix) -> Result<LogicalMatrix, MatrixError> {
    let lifted = nabla_lift(m.algebra())?;
    let top = lifted.top();
    let hat = hat_reduct(&lifted)?;
    let mut designated = m.designated().clone();
    designated.insert(top);
    LogicalMatrix::new(hat, designated)
}

/// Product matrix: product algebra, a tuple designated iff every coordinate
/// is.
pub fn matrix_product(
    matrices: &[&LogicalMatrix],
    budget: &Budget,
) -> Result<LogicalMatrix, MatrixError> {
    let algebras: Vec<&FiniteAlgebra> = matrices.iter().map(|m| m.algebra()).collect();
    let prod = algebra::product(&algebras, budget)?;
    let mut designated = BTreeSet::new();
    'tuples: for idx in 0..prod.size() {
        let mut rest = idx;
        for m in matrices.iter().rev() {
            let coord = rest % m.algebra().size();
            rest /= m.algebra().size();
            if !m.is_designated(coord) {
                continue 'tuples;
            }
        }
        designated.insert(idx);
    }
    LogicalMatrix::new(prod, designated)
}

/// Restriction of the matrix to a subuniverse of its algebra.
pub fn submatrix(
    m: &LogicalMatrix,
    universe: &BTreeSet<usize>,
    name: impl Into<String>,
) -> Result<LogicalMatrix, MatrixError> {
    let sub = subalgebra(m.algebra(), universe, name)?;
    let members: Vec<usize> = universe.iter().copied().collect();
    let designated: BTreeSet<usize> = members
        .iter()
        .enumerate()
        .filter(|(_, &old)| m.is_designated(old))
        .map(|(new, _)| new)
        .collect();
    LogicalMatrix::new(sub, designated)
}

/// Searches for a bijection preserving all tables and designation both ways.
/// Size or designation-count mismatches report `None` cheaply; the
/// backtracking search itself is capped by carrier size.
pub fn matrix_isomorphism(
    m1: &LogicalMatrix,
    m2: &LogicalMatrix,
    budget: &Budget,
) -> Result<Option<Vec<usize>>, MatrixError> {
    let a = m1.algebra();
    let b = m2.algebra();
    if a.signature() != b.signature() {
        return Err(AlgebraError::SignatureMismatch(
            "isomorphism endpoints must share a signature".into(),
        )
        .into());
    }
    if a.size() != b.size() || m1.designated().len() != m2.designated().len() {
        return Ok(None);
    }
    let n = a.size();
    if n > budget.isomorphism_elements {
        return Err(MatrixError::IsomorphismCap {
            size: n,
            cap: budget.isomorphism_elements,
        });
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if assign(a, b, m1, m2, &mut map, &mut used, 0) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn assign(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    m1: &LogicalMatrix,
    m2: &LogicalMatrix,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    k: usize,
) -> bool {
    let n = a.size();
    if k == n {
        return true;
    }
    'candidates: for v in 0..n {
        if used[v] || m1.is_designated(k) != m2.is_designated(v) {
            continue;
        }
        map[k] = v;
        used[v] = true;
        // Check every application fully determined by the prefix 0..=k that
        // involves the fresh element.
        for &sym in a.signature().symbols() {
            match sym.arity() {
                0 => {
                    let ca = a.constant(sym).unwrap();
                    if ca == k && b.constant(sym).unwrap() != v {
                        used[v] = false;
                        map[k] = usize::MAX;
                        continue 'candidates;
                    }
                }
                1 => {
                    for x in 0..=k {
                        let r = a.op1(sym, x).unwrap();
                        if r <= k
                            && (x == k || r == k)
                            && b.op1(sym, map[x]).unwrap() != map[r]
                        {
                            used[v] = false;
                            map[k] = usize::MAX;
                            continue 'candidates;
                        }
                    }
                }
                2 => {
                    for x in 0..=k {
                        for y in 0..=k {
                            let r = a.op2(sym, x, y).unwrap();
                            if r <= k
                                && (x == k || y == k || r == k)
                                && b.op2(sym, map[x], map[y]).unwrap() != map[r]
                            {
                                used[v] = false;
                                map[k] = usize::MAX;
                                continue 'candidates;
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        if assign(a, b, m1, m2, map, used, k + 1) {
            return true;
        }
        used[v] = false;
        map[k] = usize::MAX;
    }
    false
}

/// Isomorphism of bare algebras (no designation constraint).
pub fn algebra_isomorphism(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    budget: &Budget,
) -> Result<Option<Vec<usize>>, MatrixError> {
    let m1 = LogicalMatrix::new(a.clone(), BTreeSet::new())?;
    let m2 = LogicalMatrix::new(b.clone(), BTreeSet::new())?;
    matrix_isomorphism(&m1, &m2, budget)
}

/// True iff `map` is an injective homomorphism preserving designation both
/// ways (a matrix embedding).
pub fn is_matrix_embedding(
    map: &[usize],
    m1: &LogicalMatrix,
    m2: &LogicalMatrix,
) -> Result<bool, MatrixError> {
    if !algebra::is_homomorphism(map, m1.algebra(), m2.algebra())? {
        return Ok(false);
    }
    let mut seen = BTreeSet::new();
    for (x, &v) in map.iter().enumerate() {
        if !seen.insert(v) {
            return Ok(false);
        }
        if m1.is_designated(x) != m2.is_designated(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A lattice filter of a finite algebra, flagged when improper (the whole
/// carrier).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    pub generator: usize,
    pub elements: BTreeSet<usize>,
    pub improper: bool,
}

/// All nonempty up-closed meet-closed subsets, in carrier order of their
/// least element. In a finite lattice every such set is a principal up-set,
/// so enumerating `↑x` for each `x` is exhaustive.
pub fn lattice_filters(a: &FiniteAlgebra) -> Vec<Filter> {
    let n = a.size();
    (0..n)
        .map(|x| {
            let elements: BTreeSet<usize> = (0..n).filter(|&y| a.leq(x, y)).collect();
            Filter {
                generator: x,
                improper: elements.len() == n,
                elements,
            }
        })
        .collect()
}

/// The filter matrices `<A, F>` of an algebra; the improper filter is
/// excluded unless requested (a total designated set validates everything).
pub fn filter_matrices(
    a: &FiniteAlgebra,
    include_improper: bool,
) -> Result<Vec<LogicalMatrix>, MatrixError> {
    lattice_filters(a)
        .into_iter()
        .filter(|f| include_improper || !f.improper)
        .map(|f| LogicalMatrix::new(a.clone(), f.elements))
        .collect()
}

/// Resolves `builtin:<ALGEBRA>:<DESIGNATED>` with designated tokens `top`
/// (the singleton of the top element) and `up_<element>` (a principal
/// filter).
pub fn builtin_matrix(address: &str) -> Result<LogicalMatrix, MatrixError> {
    let bad = || MatrixError::BadAddress(address.to_string());
    let mut parts = address.split(':');
    if parts.next() != Some("builtin") {
        return Err(bad());
    }
    let alg_name: algebra::AlgebraName = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let desig = parts.next().ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    let a = algebra::make_named_algebra(alg_name);
    let designated: BTreeSet<usize> = if desig == "top" {
        BTreeSet::from([a.top()])
    } else if let Some(el) = desig.strip_prefix("up_") {
        let x = a.element_index(el).ok_or_else(bad)?;
        (0..a.size()).filter(|&y| a.leq(x, y)).collect()
    } else {
        return Err(bad());
    };
    LogicalMatrix::new(a, designated)
}

/// Serializes the matrix file format: the algebra section followed by a
/// `[matrix]` section.
pub fn matrix_to_text(m: &LogicalMatrix) -> String {
    let mut out = algebra_to_text(m.algebra());
    out.push_str("[matrix]\n");
    out.push_str(&format!("algebra = {}\n", m.algebra().name()));
    out.push_str(&format!("designated = {}\n", m.designated_names().join(",")));
    out
}

pub fn matrix_from_text(text: &str) -> Result<LogicalMatrix, MatrixError> {
    let mut lines = algebra::preprocess(text);
    let a = algebra::parse_algebra_section(&mut lines)?;
    match lines.next() {
        Some((_, l)) if l.trim() == "[matrix]" => {}
        Some((n, l)) => {
            return Err(TextError::new(n, format!("expected [matrix], got '{l}'")).into())
        }
        None => return Err(TextError::new(0, "missing [matrix] section").into()),
    }
    let mut algebra_key: Option<String> = None;
    let mut designated: Option<Vec<String>> = None;
    for (lineno, line) in lines {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| TextError::new(lineno, "expected 'key = value'"))?;
        match key.trim() {
            "algebra" => {
                if algebra_key.replace(value.trim().to_string()).is_some() {
                    return Err(TextError::new(lineno, "duplicate key 'algebra'").into());
                }
            }
            "designated" => {
                let names: Vec<String> = if value.trim().is_empty() {
                    Vec::new()
                } else {
                    value.split(',').map(|s| s.trim().to_string()).collect()
                };
                if designated.replace(names).is_some() {
                    return Err(TextError::new(lineno, "duplicate key 'designated'").into());
                }
            }
            other => return Err(TextError::new(lineno, format!("unknown key '{other}'")).into()),
        }
    }
    let algebra_key =
        algebra_key.ok_or_else(|| TextError::new(0, "missing 'algebra' in [matrix]"))?;
    if algebra_key != a.name() {
        return Err(TextError::new(
            0,
            format!(
                "[matrix] refers to '{algebra_key}' but the algebra section defines '{}'",
                a.name()
            ),
        )
        .into());
    }
    let designated =
        designated.ok_or_else(|| TextError::new(0, "missing 'designated' in [matrix]"))?;
    let refs: Vec<&str> = designated.iter().map(String::as_str).collect();
    LogicalMatrix::with_designated_names(a, &refs)
}
