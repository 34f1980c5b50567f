//! Finite algebras over the De Morgan signature and its `∇`-expansion.
//!
//! Carriers are lists of named elements; each operation is a total table over
//! element indices (row-major for binary operations). The named algebras are
//! the subdirectly irreducible De Morgan algebras `DM4`, `K3`, `B2` and the
//! involutive Stone algebras `IS6` down to `IS2`, built from their order
//! diagrams. `nabla_lift` adjoins a fresh top and bottom and interprets `∇`
//! as the map sending everything but the new bottom to the new top.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::Formula;
use crate::Budget;

/// Operation symbols of the two supported signatures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    And,
    Or,
    Neg,
    Nabla,
    Bot,
    Top,
}

impl Sym {
    pub fn name(self) -> &'static str {
        match self {
            Sym::And => "and",
            Sym::Or => "or",
            Sym::Neg => "neg",
            Sym::Nabla => "nabla",
            Sym::Bot => "bot",
            Sym::Top => "top",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Sym::And | Sym::Or => 2,
            Sym::Neg | Sym::Nabla => 1,
            Sym::Bot | Sym::Top => 0,
        }
    }

    fn from_name(name: &str) -> Option<Sym> {
        Some(match name {
            "and" => Sym::And,
            "or" => Sym::Or,
            "neg" => Sym::Neg,
            "nabla" => Sym::Nabla,
            "bot" => Sym::Bot,
            "top" => Sym::Top,
            _ => return None,
        })
    }
}

const DM_SYMBOLS: [Sym; 5] = [Sym::And, Sym::Or, Sym::Neg, Sym::Bot, Sym::Top];
const IS_SYMBOLS: [Sym; 6] = [Sym::And, Sym::Or, Sym::Neg, Sym::Nabla, Sym::Bot, Sym::Top];

/// One of the two built-in similarity types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Signature {
    DeMorgan,
    InvolutiveStone,
}

impl Signature {
    pub fn symbols(self) -> &'static [Sym] {
        match self {
            Signature::DeMorgan => &DM_SYMBOLS,
            Signature::InvolutiveStone => &IS_SYMBOLS,
        }
    }

    pub fn contains(self, sym: Sym) -> bool {
        self.symbols().contains(&sym)
    }

    pub fn token(self) -> &'static str {
        match self {
            Signature::DeMorgan => "DM",
            Signature::InvolutiveStone => "IS",
        }
    }

    pub fn from_token(token: &str) -> Option<Signature> {
        match token {
            "DM" => Some(Signature::DeMorgan),
            "IS" => Some(Signature::InvolutiveStone),
            _ => None,
        }
    }

    fn sym_pos(self, sym: Sym) -> Option<usize> {
        self.symbols().iter().position(|&s| s == sym)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operation '{0}' is not in the signature")]
    UnknownSymbol(&'static str),
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("product would have {size} elements, cap is {cap}")]
    ProductCap { size: usize, cap: usize },
    #[error("carrier of {size} elements is too large for subuniverse enumeration")]
    CarrierTooLarge { size: usize },
    #[error("quasi-identity has {n} premises, cap is {cap}")]
    QuasiPremiseCap { n: usize, cap: usize },
    #[error("set is not closed under the operations: missing {0}")]
    NotASubuniverse(String),
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
}

/// A finite algebra: named carrier plus one total table per signature symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    elements: Vec<String>,
    /// Aligned with `signature.symbols()`; row-major, `u16` element indices.
    tables: Vec<Vec<u16>>,
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        elements: Vec<String>,
        tables: Vec<Vec<u16>>,
    ) -> Result<FiniteAlgebra, AlgebraError> {
        let name = name.into();
        let n = elements.len();
        if n == 0 {
            return Err(AlgebraError::Invalid("empty carrier".into()));
        }
        if n > u16::MAX as usize {
            return Err(AlgebraError::Invalid("carrier too large".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &elements {
            if e.is_empty() || e.contains([',', ' ', '\t', '\n']) {
                return Err(AlgebraError::Invalid(format!("bad element name '{e}'")));
            }
            if !seen.insert(e) {
                return Err(AlgebraError::Invalid(format!("duplicate element '{e}'")));
            }
        }
        let symbols = signature.symbols();
        if tables.len() != symbols.len() {
            return Err(AlgebraError::Invalid(format!(
                "expected {} tables, got {}",
                symbols.len(),
                tables.len()
            )));
        }
        for (sym, table) in symbols.iter().zip(&tables) {
            let want = n.pow(sym.arity() as u32);
            if table.len() != want {
                return Err(AlgebraError::Invalid(format!(
                    "table for '{}' has {} entries, expected {}",
                    sym.name(),
                    table.len(),
                    want
                )));
            }
            if table.iter().any(|&e| e as usize >= n) {
                return Err(AlgebraError::Invalid(format!(
                    "table for '{}' mentions an element out of range",
                    sym.name()
                )));
            }
        }
        Ok(FiniteAlgebra {
            name,
            signature,
            elements,
            tables,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FiniteAlgebra {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, idx: usize) -> &str {
        &self.elements[idx]
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn table(&self, sym: Sym) -> Option<&[u16]> {
        let pos = self.signature.sym_pos(sym)?;
        Some(&self.tables[pos])
    }

    pub fn constant(&self, sym: Sym) -> Option<usize> {
        debug_assert_eq!(sym.arity(), 0);
        self.table(sym).map(|t| t[0] as usize)
    }

    pub fn op1(&self, sym: Sym, x: usize) -> Option<usize> {
        debug_assert_eq!(sym.arity(), 1);
        self.table(sym).map(|t| t[x] as usize)
    }

    pub fn op2(&self, sym: Sym, x: usize, y: usize) -> Option<usize> {
        debug_assert_eq!(sym.arity(), 2);
        self.table(sym).map(|t| t[x * self.size() + y] as usize)
    }

    /// Applies `sym` to `args` (length must match the arity).
    pub fn apply(&self, sym: Sym, args: &[usize]) -> Option<usize> {
        match sym.arity() {
            0 => self.constant(sym),
            1 => self.op1(sym, args[0]),
            2 => self.op2(sym, args[0], args[1]),
            _ => unreachable!(),
        }
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.op2(Sym::And, x, y).expect("and is in every signature")
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.op2(Sym::Or, x, y).expect("or is in every signature")
    }

    pub fn negate(&self, x: usize) -> usize {
        self.op1(Sym::Neg, x).expect("neg is in every signature")
    }

    pub fn bot(&self) -> usize {
        self.constant(Sym::Bot).expect("bot is in every signature")
    }

    pub fn top(&self) -> usize {
        self.constant(Sym::Top).expect("top is in every signature")
    }

    /// Lattice order derived from the meet table.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.meet(x, y) == x
    }

    /// Evaluates a formula-as-term under an assignment of variables to
    /// element indices. Fails on a `∇` node over the De Morgan signature and
    /// on unbound variables.
    pub fn eval(&self, f: &Formula, env: &BTreeMap<String, usize>) -> Result<usize, AlgebraError> {
        match f {
            Formula::Var(v) => env
                .get(v)
                .copied()
                .ok_or_else(|| AlgebraError::UnboundVariable(v.clone())),
            Formula::Bot => Ok(self.bot()),
            Formula::Top => Ok(self.top()),
            Formula::Neg(x) => Ok(self.negate(self.eval(x, env)?)),
            Formula::Nabla(x) => {
                let inner = self.eval(x, env)?;
                self.op1(Sym::Nabla, inner)
                    .ok_or(AlgebraError::UnknownSymbol("nabla"))
            }
            Formula::And(l, r) => Ok(self.meet(self.eval(l, env)?, self.eval(r, env)?)),
            Formula::Or(l, r) => Ok(self.join(self.eval(l, env)?, self.eval(r, env)?)),
        }
    }

    /// Checks that the formula only uses operations of this algebra's
    /// signature.
    pub fn admits(&self, f: &Formula) -> bool {
        self.signature == Signature::InvolutiveStone || !f.contains_nabla()
    }
}

/// The built-in algebras of the workbench.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraName {
    Dm4,
    K3,
    B2,
    Is6,
    Is5,
    Is4,
    Is3,
    Is2,
}

impl AlgebraName {
    pub const ALL: [AlgebraName; 8] = [
        AlgebraName::Dm4,
        AlgebraName::K3,
        AlgebraName::B2,
        AlgebraName::Is6,
        AlgebraName::Is5,
        AlgebraName::Is4,
        AlgebraName::Is3,
        AlgebraName::Is2,
    ];

    pub fn token(self) -> &'static str {
        match self {
            AlgebraName::Dm4 => "DM4",
            AlgebraName::K3 => "K3",
            AlgebraName::B2 => "B2",
            AlgebraName::Is6 => "IS6",
            AlgebraName::Is5 => "IS5",
            AlgebraName::Is4 => "IS4",
            AlgebraName::Is3 => "IS3",
            AlgebraName::Is2 => "IS2",
        }
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for AlgebraName {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<AlgebraName, AlgebraError> {
        AlgebraName::ALL
            .into_iter()
            .find(|n| n.token().eq_ignore_ascii_case(s))
            .ok_or_else(|| AlgebraError::Invalid(format!("unknown algebra '{s}'")))
    }
}

/// Builds the meet and join tables of a finite lattice from its order.
///
/// `covers` lists pairs `x < y`; the reflexive-transitive closure is taken.
/// Panics if the order is not a lattice (internal use on the built-ins).
fn lattice_tables(n: usize, covers: &[(usize, usize)]) -> (Vec<u16>, Vec<u16>) {
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for &(x, y) in covers {
        leq[x * n + y] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i * n + k] && leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    let mut meet = vec![0u16; n * n];
    let mut join = vec![0u16; n * n];
    for i in 0..n {
        for j in 0..n {
            let lower: Vec<usize> = (0..n)
                .filter(|&z| leq[z * n + i] && leq[z * n + j])
                .collect();
            let glb: Vec<usize> = lower
                .iter()
                .copied()
                .filter(|&z| lower.iter().all(|&w| leq[w * n + z]))
                .collect();
            assert_eq!(glb.len(), 1, "order is not a meet-semilattice");
            meet[i * n + j] = glb[0] as u16;
            let upper: Vec<usize> = (0..n)
                .filter(|&z| leq[i * n + z] && leq[j * n + z])
                .collect();
            let lub: Vec<usize> = upper
                .iter()
                .copied()
                .filter(|&z| upper.iter().all(|&w| leq[z * n + w]))
                .collect();
            assert_eq!(lub.len(), 1, "order is not a join-semilattice");
            join[i * n + j] = lub[0] as u16;
        }
    }
    (meet, join)
}

struct BuiltinSpec {
    elements: &'static [&'static str],
    covers: &'static [(&'static str, &'static str)],
    /// Negation as name pairs `(x, ¬x)`; involution fills in the symmetric
    /// entries.
    neg: &'static [(&'static str, &'static str)],
    bot: &'static str,
    top: &'static str,
    nabla: bool,
}

fn builtin_spec(name: AlgebraName) -> BuiltinSpec {
    match name {
        AlgebraName::Dm4 => BuiltinSpec {
            elements: &["0", "a", "b", "1"],
            covers: &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
            neg: &[("0", "1"), ("a", "a"), ("b", "b")],
            bot: "0",
            top: "1",
            nabla: false,
        },
        AlgebraName::K3 => BuiltinSpec {
            elements: &["0", "a", "1"],
            covers: &[("0", "a"), ("a", "1")],
            neg: &[("0", "1"), ("a", "a")],
            bot: "0",
            top: "1",
            nabla: false,
        },
        AlgebraName::B2 => BuiltinSpec {
            elements: &["0", "1"],
            covers: &[("0", "1")],
            neg: &[("0", "1")],
            bot: "0",
            top: "1",
            nabla: false,
        },
        AlgebraName::Is6 => BuiltinSpec {
            elements: &["B", "0", "a", "b", "1", "T"],
            covers: &[
                ("B", "0"),
                ("0", "a"),
                ("0", "b"),
                ("a", "1"),
                ("b", "1"),
                ("1", "T"),
            ],
            neg: &[("B", "T"), ("0", "1"), ("a", "a"), ("b", "b")],
            bot: "B",
            top: "T",
            nabla: true,
        },
        AlgebraName::Is5 => BuiltinSpec {
            elements: &["B", "0", "a", "1", "T"],
            covers: &[("B", "0"), ("0", "a"), ("a", "1"), ("1", "T")],
            neg: &[("B", "T"), ("0", "1"), ("a", "a")],
            bot: "B",
            top: "T",
            nabla: true,
        },
        AlgebraName::Is4 => BuiltinSpec {
            elements: &["B", "0", "1", "T"],
            covers: &[("B", "0"), ("0", "1"), ("1", "T")],
            neg: &[("B", "T"), ("0", "1")],
            bot: "B",
            top: "T",
            nabla: true,
        },
        AlgebraName::Is3 => BuiltinSpec {
            elements: &["B", "0", "T"],
            covers: &[("B", "0"), ("0", "T")],
            neg: &[("B", "T"), ("0", "0")],
            bot: "B",
            top: "T",
            nabla: true,
        },
        AlgebraName::Is2 => BuiltinSpec {
            elements: &["B", "T"],
            covers: &[("B", "T")],
            neg: &[("B", "T")],
            bot: "B",
            top: "T",
            nabla: true,
        },
    }
}

/// Constructs a built-in algebra, table-complete, from its order diagram.
pub fn make_named_algebra(name: AlgebraName) -> FiniteAlgebra {
    let spec = builtin_spec(name);
    let n = spec.elements.len();
    let idx = |s: &str| spec.elements.iter().position(|&e| e == s).unwrap();
    let covers: Vec<(usize, usize)> = spec.covers.iter().map(|&(x, y)| (idx(x), idx(y))).collect();
    let (meet, join) = lattice_tables(n, &covers);
    let mut neg = vec![0u16; n];
    for &(x, y) in spec.neg {
        neg[idx(x)] = idx(y) as u16;
        neg[idx(y)] = idx(x) as u16;
    }
    let bot = idx(spec.bot);
    let top = idx(spec.top);
    let signature = if spec.nabla {
        Signature::InvolutiveStone
    } else {
        Signature::DeMorgan
    };
    let mut tables = vec![meet, join, neg];
    if spec.nabla {
        // ∇ sends the bottom to itself and everything else to the top.
        tables.push(
            (0..n)
                .map(|x| if x == bot { bot as u16 } else { top as u16 })
                .collect(),
        );
    }
    tables.push(vec![bot as u16]);
    tables.push(vec![top as u16]);
    FiniteAlgebra::new(
        name.token(),
        signature,
        spec.elements.iter().map(|s| s.to_string()).collect(),
        tables,
    )
    .expect("built-in algebras are well-formed")
}

fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut candidate = base.to_string();
    while taken.iter().any(|e| e == &candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Adjoins a fresh bottom `B` and top `T` to a De Morgan algebra and defines
/// `∇` as the map fixing the new bottom and sending everything else to the
/// new top. The constants are re-pointed at the new bounds. Fresh names are
/// primed (`B'`, `T'`) on collision with existing element names.
pub fn nabla_lift(a: &FiniteAlgebra) -> Result<FiniteAlgebra, AlgebraError> {
    if a.signature() != Signature::DeMorgan {
        return Err(AlgebraError::SignatureMismatch(
            "nabla_lift expects a De Morgan algebra".into(),
        ));
    }
    let n = a.size();
    let mut elements = a.elements.clone();
    let bot_name = fresh_name("B", &elements);
    elements.push(bot_name);
    let top_name = fresh_name("T", &elements);
    elements.push(top_name);
    let bot = n;
    let top = n + 1;
    let m = n + 2;
    let mut meet = vec![0u16; m * m];
    let mut join = vec![0u16; m * m];
    for x in 0..m {
        for y in 0..m {
            let and = if x < n && y < n {
                a.meet(x, y)
            } else if x == bot || y == bot {
                bot
            } else if x == top {
                y
            } else {
                debug_assert_eq!(y, top);
                x
            };
            let or = if x < n && y < n {
                a.join(x, y)
            } else if x == top || y == top {
                top
            } else if x == bot {
                y
            } else {
                debug_assert_eq!(y, bot);
                x
            };
            meet[x * m + y] = and as u16;
            join[x * m + y] = or as u16;
        }
    }
    let mut neg = vec![0u16; m];
    for (x, entry) in neg.iter_mut().enumerate().take(n) {
        *entry = a.negate(x) as u16;
    }
    neg[bot] = top as u16;
    neg[top] = bot as u16;
    let nabla = (0..m)
        .map(|x| if x == bot { bot as u16 } else { top as u16 })
        .collect();
    FiniteAlgebra::new(
        format!("{}^nabla", a.name()),
        Signature::InvolutiveStone,
        elements,
        vec![meet, join, neg, nabla, vec![bot as u16], vec![top as u16]],
    )
}

/// Drops the `∇` table, keeping the carrier and the De Morgan reduct.
pub fn hat_reduct(a: &FiniteAlgebra) -> Result<FiniteAlgebra, AlgebraError> {
    if a.signature() != Signature::InvolutiveStone {
        return Err(AlgebraError::SignatureMismatch(
            "hat_reduct expects the nabla signature".into(),
        ));
    }
    let tables = vec![
        a.table(Sym::And).unwrap().to_vec(),
        a.table(Sym::Or).unwrap().to_vec(),
        a.table(Sym::Neg).unwrap().to_vec(),
        vec![a.bot() as u16],
        vec![a.top() as u16],
    ];
    FiniteAlgebra::new(
        format!("{}^hat", a.name()),
        Signature::DeMorgan,
        a.elements.clone(),
        tables,
    )
}

/// Direct product with componentwise tables; element names are the factor
/// names joined by `.`.
pub fn product(algebras: &[&FiniteAlgebra], budget: &Budget) -> Result<FiniteAlgebra, AlgebraError> {
    let first = algebras
        .first()
        .ok_or_else(|| AlgebraError::Invalid("empty product".into()))?;
    let signature = first.signature();
    if algebras.iter().any(|a| a.signature() != signature) {
        return Err(AlgebraError::SignatureMismatch(
            "product factors must share a signature".into(),
        ));
    }
    let mut size = 1usize;
    for a in algebras {
        size = size
            .checked_mul(a.size())
            .ok_or(AlgebraError::ProductCap {
                size: usize::MAX,
                cap: budget.product_elements,
            })?;
        if size > budget.product_elements {
            return Err(AlgebraError::ProductCap {
                size,
                cap: budget.product_elements,
            });
        }
    }
    // Tuple index: first factor most significant.
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut tuple = vec![0; algebras.len()];
        for (k, a) in algebras.iter().enumerate().rev() {
            tuple[k] = idx % a.size();
            idx /= a.size();
        }
        tuple
    };
    let encode = |tuple: &[usize]| -> usize {
        tuple
            .iter()
            .zip(algebras.iter())
            .fold(0, |acc, (&x, a)| acc * a.size() + x)
    };
    let elements: Vec<String> = (0..size)
        .map(|i| {
            decode(i)
                .iter()
                .zip(algebras.iter())
                .map(|(&x, a)| a.element_name(x))
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect();
    let mut tables = Vec::new();
    for &sym in signature.symbols() {
        match sym.arity() {
            0 => {
                let tuple: Vec<usize> = algebras.iter().map(|a| a.constant(sym).unwrap()).collect();
                tables.push(vec![encode(&tuple) as u16]);
            }
            1 => {
                let mut t = vec![0u16; size];
                for (x, entry) in t.iter_mut().enumerate() {
                    let tx = decode(x);
                    let tuple: Vec<usize> = tx
                        .iter()
                        .zip(algebras.iter())
                        .map(|(&xi, a)| a.op1(sym, xi).unwrap())
                        .collect();
                    *entry = encode(&tuple) as u16;
                }
                tables.push(t);
            }
            2 => {
                let mut t = vec![0u16; size * size];
                for x in 0..size {
                    let tx = decode(x);
                    for y in 0..size {
                        let ty = decode(y);
                        let tuple: Vec<usize> = tx
                            .iter()
                            .zip(ty.iter())
                            .zip(algebras.iter())
                            .map(|((&xi, &yi), a)| a.op2(sym, xi, yi).unwrap())
                            .collect();
                        t[x * size + y] = encode(&tuple) as u16;
                    }
                }
                tables.push(t);
            }
            _ => unreachable!(),
        }
    }
    let name = algebras
        .iter()
        .map(|a| a.name())
        .collect::<Vec<_>>()
        .join("x");
    FiniteAlgebra::new(name, signature, elements, tables)
}

/// Least subset containing `seed` and all constants, closed under every
/// operation.
pub fn subuniverse_generated(a: &FiniteAlgebra, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut members: BTreeSet<usize> = seed.clone();
    for &sym in a.signature().symbols() {
        if sym.arity() == 0 {
            members.insert(a.constant(sym).unwrap());
        }
    }
    loop {
        let snapshot: Vec<usize> = members.iter().copied().collect();
        let before = members.len();
        for &sym in a.signature().symbols() {
            match sym.arity() {
                1 => {
                    for &x in &snapshot {
                        members.insert(a.op1(sym, x).unwrap());
                    }
                }
                2 => {
                    for &x in &snapshot {
                        for &y in &snapshot {
                            members.insert(a.op2(sym, x, y).unwrap());
                        }
                    }
                }
                _ => {}
            }
        }
        if members.len() == before {
            return members;
        }
    }
}

/// All subuniverses, by exhaustive subset scan (carriers up to 20 elements).
pub fn all_subuniverses(a: &FiniteAlgebra) -> Result<Vec<BTreeSet<usize>>, AlgebraError> {
    let n = a.size();
    if n > 20 {
        return Err(AlgebraError::CarrierTooLarge { size: n });
    }
    let mut constants_mask = 0u32;
    for &sym in a.signature().symbols() {
        if sym.arity() == 0 {
            constants_mask |= 1 << a.constant(sym).unwrap();
        }
    }
    let mut out = Vec::new();
    'subsets: for mask in 0u32..(1 << n) {
        if mask & constants_mask != constants_mask {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if members.is_empty() {
            continue;
        }
        for &sym in a.signature().symbols() {
            match sym.arity() {
                1 => {
                    for &x in &members {
                        if mask & (1 << a.op1(sym, x).unwrap()) == 0 {
                            continue 'subsets;
                        }
                    }
                }
                2 => {
                    for &x in &members {
                        for &y in &members {
                            if mask & (1 << a.op2(sym, x, y).unwrap()) == 0 {
                                continue 'subsets;
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        out.push(members.into_iter().collect());
    }
    Ok(out)
}

/// Restriction of `a` to a subuniverse, reindexed in carrier order.
pub fn subalgebra(
    a: &FiniteAlgebra,
    universe: &BTreeSet<usize>,
    name: impl Into<String>,
) -> Result<FiniteAlgebra, AlgebraError> {
    let members: Vec<usize> = universe.iter().copied().collect();
    let reindex: BTreeMap<usize, u16> = members
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new as u16))
        .collect();
    let lookup = |old: usize| -> Result<u16, AlgebraError> {
        reindex
            .get(&old)
            .copied()
            .ok_or_else(|| AlgebraError::NotASubuniverse(a.element_name(old).to_string()))
    };
    let mut tables = Vec::new();
    for &sym in a.signature().symbols() {
        match sym.arity() {
            0 => tables.push(vec![lookup(a.constant(sym).unwrap())?]),
            1 => {
                let mut t = Vec::with_capacity(members.len());
                for &x in &members {
                    t.push(lookup(a.op1(sym, x).unwrap())?);
                }
                tables.push(t);
            }
            2 => {
                let mut t = Vec::with_capacity(members.len() * members.len());
                for &x in &members {
                    for &y in &members {
                        t.push(lookup(a.op2(sym, x, y).unwrap())?);
                    }
                }
                tables.push(t);
            }
            _ => unreachable!(),
        }
    }
    FiniteAlgebra::new(
        name,
        a.signature(),
        members
            .iter()
            .map(|&i| a.element_name(i).to_string())
            .collect(),
        tables,
    )
}

/// True iff `map` (indexed by elements of `a`) commutes with every table.
pub fn is_homomorphism(
    map: &[usize],
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
) -> Result<bool, AlgebraError> {
    if a.signature() != b.signature() {
        return Err(AlgebraError::SignatureMismatch(
            "homomorphism endpoints must share a signature".into(),
        ));
    }
    is_homomorphism_over(map, a, b, a.signature().symbols())
}

/// Homomorphism check restricted to a sub-signature; both algebras must
/// interpret every listed symbol. Used for reduct embeddings where the full
/// signatures differ.
pub fn is_homomorphism_over(
    map: &[usize],
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    symbols: &[Sym],
) -> Result<bool, AlgebraError> {
    if map.len() != a.size() || map.iter().any(|&x| x >= b.size()) {
        return Err(AlgebraError::Invalid(
            "map must be total on the source carrier".into(),
        ));
    }
    for &sym in symbols {
        if !a.signature().contains(sym) || !b.signature().contains(sym) {
            return Err(AlgebraError::UnknownSymbol(sym.name()));
        }
    }
    for &sym in symbols {
        match sym.arity() {
            0 => {
                if map[a.constant(sym).unwrap()] != b.constant(sym).unwrap() {
                    return Ok(false);
                }
            }
            1 => {
                for x in 0..a.size() {
                    if map[a.op1(sym, x).unwrap()] != b.op1(sym, map[x]).unwrap() {
                        return Ok(false);
                    }
                }
            }
            2 => {
                for x in 0..a.size() {
                    for y in 0..a.size() {
                        if map[a.op2(sym, x, y).unwrap()] != b.op2(sym, map[x], map[y]).unwrap() {
                            return Ok(false);
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(true)
}

/// Outcome of an identity or quasi-identity check; a failing check carries
/// the first falsifying assignment (element names keyed by variable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub witness: Option<BTreeMap<String, String>>,
}

impl IdentityCheck {
    fn valid() -> IdentityCheck {
        IdentityCheck {
            holds: true,
            witness: None,
        }
    }
}

fn term_signature_check(a: &FiniteAlgebra, terms: &[&Formula]) -> Result<(), AlgebraError> {
    if terms.iter().any(|t| !a.admits(t)) {
        return Err(AlgebraError::UnknownSymbol("nabla"));
    }
    Ok(())
}

fn assignments_over(
    a: &FiniteAlgebra,
    vars: &[String],
    mut visit: impl FnMut(&BTreeMap<String, usize>) -> Result<bool, AlgebraError>,
) -> Result<IdentityCheck, AlgebraError> {
    let n = a.size();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let env: BTreeMap<String, usize> =
            vars.iter().cloned().zip(idx.iter().copied()).collect();
        if !visit(&env)? {
            let witness = env
                .into_iter()
                .map(|(v, e)| (v, a.element_name(e).to_string()))
                .collect();
            return Ok(IdentityCheck {
                holds: false,
                witness: Some(witness),
            });
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(IdentityCheck::valid());
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// True iff `lhs ≈ rhs` holds under every assignment of the term variables
/// to carrier elements (plain exhaustive enumeration with short-circuit).
pub fn check_identity(
    a: &FiniteAlgebra,
    lhs: &Formula,
    rhs: &Formula,
) -> Result<IdentityCheck, AlgebraError> {
    term_signature_check(a, &[lhs, rhs])?;
    let mut vars: BTreeSet<String> = lhs.variables();
    vars.extend(rhs.variables());
    let vars: Vec<String> = vars.into_iter().collect();
    assignments_over(a, &vars, |env| Ok(a.eval(lhs, env)? == a.eval(rhs, env)?))
}

/// True iff every assignment satisfying all premise identities satisfies the
/// conclusion identity.
pub fn check_quasi_identity(
    a: &FiniteAlgebra,
    premises: &[(Formula, Formula)],
    conclusion: (&Formula, &Formula),
    budget: &Budget,
) -> Result<IdentityCheck, AlgebraError> {
    if premises.len() > budget.quasi_premises {
        return Err(AlgebraError::QuasiPremiseCap {
            n: premises.len(),
            cap: budget.quasi_premises,
        });
    }
    let mut terms: Vec<&Formula> = vec![conclusion.0, conclusion.1];
    for (l, r) in premises {
        terms.push(l);
        terms.push(r);
    }
    term_signature_check(a, &terms)?;
    let mut vars = BTreeSet::new();
    for t in &terms {
        vars.extend(t.variables());
    }
    let vars: Vec<String> = vars.into_iter().collect();
    assignments_over(a, &vars, |env| {
        for (l, r) in premises {
            if a.eval(l, env)? != a.eval(r, env)? {
                return Ok(true);
            }
        }
        Ok(a.eval(conclusion.0, env)? == a.eval(conclusion.1, env)?)
    })
}

fn ident(spec: &[(&str, &str, &str)]) -> Vec<(String, Formula, Formula)> {
    spec.iter()
        .map(|(name, l, r)| {
            (
                name.to_string(),
                crate::formula::parse_formula(l).unwrap(),
                crate::formula::parse_formula(r).unwrap(),
            )
        })
        .collect()
}

/// De Morgan axioms plus the bounded distributive lattice axioms and the
/// constant laws for negation.
pub fn de_morgan_identities() -> Vec<(String, Formula, Formula)> {
    ident(&[
        ("DM1", "~(x | y)", "~x & ~y"),
        ("DM2", "~(x & y)", "~x | ~y"),
        ("DM3", "x", "~~x"),
        ("and-comm", "x & y", "y & x"),
        ("or-comm", "x | y", "y | x"),
        ("and-assoc", "x & (y & z)", "(x & y) & z"),
        ("or-assoc", "x | (y | z)", "(x | y) | z"),
        ("and-absorb", "x & (x | y)", "x"),
        ("or-absorb", "x | (x & y)", "x"),
        ("and-idem", "x & x", "x"),
        ("or-idem", "x | x", "x"),
        ("or-unit", "x | 0", "x"),
        ("and-unit", "x & 1", "x"),
        ("and-bot", "x & 0", "0"),
        ("or-top", "x | 1", "1"),
        ("distr-and", "x & (y | z)", "(x & y) | (x & z)"),
        ("distr-or", "x | (y & z)", "(x | y) & (x | z)"),
        ("neg-top", "~1", "0"),
        ("neg-bot", "~0", "1"),
    ])
}

/// The four axioms of the `∇` operator.
pub fn is_identities() -> Vec<(String, Formula, Formula)> {
    ident(&[
        ("IS1", "#0", "0"),
        ("IS2", "x", "x & #x"),
        ("IS3", "#(x & y)", "#x & #y"),
        ("IS4", "~#x & #x", "0"),
    ])
}

/// The Stone identity for the definable pseudo-complement `~#x`.
pub fn stone_identity() -> (String, Formula, Formula) {
    ident(&[("stone", "~#x | ~#~#x", "1")]).pop().unwrap()
}

/// The identity suite appropriate for the algebra's signature: the De Morgan
/// suite, extended by IS1–IS4 and the Stone identity on the `∇` signature.
pub fn identity_suite_for(a: &FiniteAlgebra) -> Vec<(String, Formula, Formula)> {
    let mut suite = de_morgan_identities();
    if a.signature() == Signature::InvolutiveStone {
        suite.extend(is_identities());
        suite.push(stone_identity());
    }
    suite
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TextError {
    pub line: usize,
    pub message: String,
}

impl TextError {
    pub fn new(line: usize, message: impl Into<String>) -> TextError {
        TextError {
            line,
            message: message.into(),
        }
    }
}

/// Serializes to the line-based algebra file format.
pub fn algebra_to_text(a: &FiniteAlgebra) -> String {
    let mut out = String::new();
    out.push_str("[algebra]\n");
    out.push_str(&format!("name = {}\n", a.name()));
    out.push_str(&format!("signature = {}\n", a.signature().token()));
    out.push_str(&format!("elements = {}\n", a.elements().join(",")));
    for &sym in a.signature().symbols() {
        let table = a.table(sym).unwrap();
        let entries: Vec<&str> = table.iter().map(|&e| a.element_name(e as usize)).collect();
        out.push_str(&format!("op {} = {}\n", sym.name(), entries.join(",")));
    }
    out
}

/// Strict parser for the algebra file format: unknown keys, missing or
/// duplicated tables and wrong table lengths are errors. Blank lines and
/// lines starting with `#` in column 0 are ignored.
pub fn algebra_from_text(text: &str) -> Result<FiniteAlgebra, TextError> {
    let mut lines = preprocess(text);
    parse_algebra_section(&mut lines)
}

pub(crate) type Lines<'a> = std::iter::Peekable<std::vec::IntoIter<(usize, &'a str)>>;

pub(crate) fn preprocess(text: &str) -> Lines<'_> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .collect::<Vec<_>>()
        .into_iter()
        .peekable()
}

pub(crate) fn parse_algebra_section(lines: &mut Lines<'_>) -> Result<FiniteAlgebra, TextError> {
    match lines.next() {
        Some((_, l)) if l.trim() == "[algebra]" => {}
        Some((n, l)) => return Err(TextError::new(n, format!("expected [algebra], got '{l}'"))),
        None => return Err(TextError::new(0, "empty input")),
    }
    let mut name: Option<String> = None;
    let mut signature: Option<Signature> = None;
    let mut elements: Option<Vec<String>> = None;
    let mut ops: BTreeMap<Sym, (usize, Vec<String>)> = BTreeMap::new();
    while let Some(&(lineno, line)) = lines.peek() {
        if line.trim().starts_with('[') {
            break;
        }
        lines.next();
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| TextError::new(lineno, "expected 'key = value'"))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "name" => {
                if name.replace(value.to_string()).is_some() {
                    return Err(TextError::new(lineno, "duplicate key 'name'"));
                }
            }
            "signature" => {
                let sig = Signature::from_token(value)
                    .ok_or_else(|| TextError::new(lineno, format!("unknown signature '{value}'")))?;
                if signature.replace(sig).is_some() {
                    return Err(TextError::new(lineno, "duplicate key 'signature'"));
                }
            }
            "elements" => {
                let es: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
                if elements.replace(es).is_some() {
                    return Err(TextError::new(lineno, "duplicate key 'elements'"));
                }
            }
            _ => {
                let sym_name = key
                    .strip_prefix("op ")
                    .map(str::trim)
                    .ok_or_else(|| TextError::new(lineno, format!("unknown key '{key}'")))?;
                let sym = Sym::from_name(sym_name)
                    .ok_or_else(|| TextError::new(lineno, format!("unknown operation '{sym_name}'")))?;
                let entries: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
                if ops.insert(sym, (lineno, entries)).is_some() {
                    return Err(TextError::new(lineno, format!("duplicate table for '{sym_name}'")));
                }
            }
        }
    }
    let name = name.ok_or_else(|| TextError::new(0, "missing 'name'"))?;
    let signature = signature.ok_or_else(|| TextError::new(0, "missing 'signature'"))?;
    let elements = elements.ok_or_else(|| TextError::new(0, "missing 'elements'"))?;
    let index: BTreeMap<&str, u16> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_str(), i as u16))
        .collect();
    let mut tables = Vec::new();
    for &sym in signature.symbols() {
        let (lineno, entries) = ops
            .remove(&sym)
            .ok_or_else(|| TextError::new(0, format!("missing table for '{}'", sym.name())))?;
        let want = elements.len().pow(sym.arity() as u32);
        if entries.len() != want {
            return Err(TextError::new(
                lineno,
                format!(
                    "table for '{}' has {} entries, expected {}",
                    sym.name(),
                    entries.len(),
                    want
                ),
            ));
        }
        let mut table = Vec::with_capacity(entries.len());
        for e in &entries {
            table.push(*index.get(e.as_str()).ok_or_else(|| {
                TextError::new(lineno, format!("unknown element '{e}'"))
            })?);
        }
        tables.push(table);
    }
    if let Some((sym, (lineno, _))) = ops.into_iter().next() {
        return Err(TextError::new(
            lineno,
            format!("table for '{}' is not in the signature", sym.name()),
        ));
    }
    FiniteAlgebra::new(name, signature, elements, tables)
        .map_err(|e| TextError::new(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn fm(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn is6() -> FiniteAlgebra {
        make_named_algebra(AlgebraName::Is6)
    }

    fn el(a: &FiniteAlgebra, name: &str) -> usize {
        a.element_index(name).unwrap()
    }

    #[test]
    fn is6_matches_its_diagram() {
        let a = is6();
        assert_eq!(a.elements(), ["B", "0", "a", "b", "1", "T"]);
        // nabla sends everything but the bottom to the top
        assert_eq!(a.op1(Sym::Nabla, el(&a, "0")), Some(el(&a, "T")));
        assert_eq!(a.op1(Sym::Nabla, el(&a, "B")), Some(el(&a, "B")));
        // the two incomparable middle elements are negation fixpoints
        assert_eq!(a.negate(el(&a, "a")), el(&a, "a"));
        assert_eq!(a.negate(el(&a, "b")), el(&a, "b"));
        assert_eq!(a.negate(el(&a, "0")), el(&a, "1"));
        assert_eq!(a.negate(el(&a, "B")), el(&a, "T"));
        // order: B < 0 < a,b < 1 < T with a,b incomparable
        assert!(a.leq(el(&a, "B"), el(&a, "0")));
        assert!(a.leq(el(&a, "0"), el(&a, "a")));
        assert!(a.leq(el(&a, "b"), el(&a, "1")));
        assert!(!a.leq(el(&a, "a"), el(&a, "b")));
        assert_eq!(a.meet(el(&a, "a"), el(&a, "b")), el(&a, "0"));
        assert_eq!(a.join(el(&a, "a"), el(&a, "b")), el(&a, "1"));
    }

    #[test]
    fn is2_has_identity_nabla() {
        let a = make_named_algebra(AlgebraName::Is2);
        for x in 0..a.size() {
            assert_eq!(a.op1(Sym::Nabla, x), Some(x));
        }
    }

    #[test]
    fn identity_suites_hold_on_all_builtins() {
        for name in AlgebraName::ALL {
            let a = make_named_algebra(name);
            for (id, lhs, rhs) in identity_suite_for(&a) {
                let check = check_identity(&a, &lhs, &rhs).unwrap();
                assert!(check.holds, "{id} fails on {}: {:?}", a.name(), check.witness);
            }
        }
    }

    #[test]
    fn excluded_middle_fails_on_is6_with_witness() {
        let a = is6();
        let check = check_identity(&a, &fm("x | ~x"), &fm("1")).unwrap();
        assert!(!check.holds);
        let witness = check.witness.unwrap();
        // Re-validate the witness against the tables.
        let x = el(&a, &witness["x"]);
        assert_ne!(a.join(x, a.negate(x)), a.top());
    }

    #[test]
    fn nabla_terms_are_rejected_on_de_morgan_algebras() {
        let a = make_named_algebra(AlgebraName::Dm4);
        assert_eq!(
            check_identity(&a, &fm("#x"), &fm("x")),
            Err(AlgebraError::UnknownSymbol("nabla"))
        );
    }

    #[test]
    fn quasi_identity_examples() {
        let a = is6();
        let budget = Budget::default();
        let tauto = check_quasi_identity(
            &a,
            &[(fm("g"), fm("1"))],
            (&fm("g"), &fm("1")),
            &budget,
        )
        .unwrap();
        assert!(tauto.holds);
        let nabla_top = check_quasi_identity(
            &a,
            &[(fm("x"), fm("1"))],
            (&fm("#x"), &fm("1")),
            &budget,
        )
        .unwrap();
        assert!(nabla_top.holds);
        let converse = check_quasi_identity(
            &a,
            &[(fm("#x"), fm("1"))],
            (&fm("x"), &fm("1")),
            &budget,
        )
        .unwrap();
        assert!(!converse.holds);
        let w = converse.witness.unwrap();
        let x = el(&a, &w["x"]);
        assert_eq!(a.op1(Sym::Nabla, x), Some(a.top()));
        assert_ne!(x, a.top());
        // premise count is capped
        let many: Vec<(Formula, Formula)> = (0..5).map(|_| (fm("x"), fm("x"))).collect();
        assert_eq!(
            check_quasi_identity(&a, &many, (&fm("x"), &fm("x")), &budget),
            Err(AlgebraError::QuasiPremiseCap { n: 5, cap: 4 })
        );
    }

    #[test]
    fn lift_of_b2_behaves_at_the_new_bounds() {
        let b2 = make_named_algebra(AlgebraName::B2);
        let lifted = nabla_lift(&b2).unwrap();
        assert_eq!(lifted.signature(), Signature::InvolutiveStone);
        assert_eq!(lifted.elements(), ["0", "1", "B", "T"]);
        let one = el(&lifted, "1");
        let top = el(&lifted, "T");
        let bot = el(&lifted, "B");
        // new top is a unit for meet over old elements
        assert_eq!(lifted.meet(top, one), one);
        assert_eq!(lifted.join(bot, one), one);
        assert_eq!(lifted.constant(Sym::Top), Some(top));
        assert_eq!(lifted.constant(Sym::Bot), Some(bot));
        // the lift of a De Morgan algebra satisfies the nabla axioms
        for (id, lhs, rhs) in identity_suite_for(&lifted) {
            assert!(check_identity(&lifted, &lhs, &rhs).unwrap().holds, "{id}");
        }
    }

    #[test]
    fn lifts_of_random_de_morgan_subalgebras_satisfy_the_nabla_axioms() {
        // Draw subalgebras of DM4 x DM4 from seeded generators; whenever the
        // De Morgan suite holds, the lift must satisfy the nabla axioms.
        let budget = Budget::default();
        let dm4 = make_named_algebra(AlgebraName::Dm4);
        let square = product(&[&dm4, &dm4], &budget).unwrap();
        let mut rng = crate::rng::SplitMix64::new(0xA1FA);
        for round in 0..25 {
            let mut seed = BTreeSet::new();
            for _ in 0..(1 + rng.below(3)) {
                seed.insert(rng.below(square.size() as u64) as usize);
            }
            let universe = subuniverse_generated(&square, &seed);
            let sub = subalgebra(&square, &universe, format!("sub{round}")).unwrap();
            for (id, lhs, rhs) in de_morgan_identities() {
                assert!(
                    check_identity(&sub, &lhs, &rhs).unwrap().holds,
                    "{id} fails on a subalgebra of a De Morgan product"
                );
            }
            let lifted = nabla_lift(&sub).unwrap();
            for (id, lhs, rhs) in identity_suite_for(&lifted) {
                assert!(
                    check_identity(&lifted, &lhs, &rhs).unwrap().holds,
                    "{id} fails on the lift"
                );
            }
        }
    }

    #[test]
    fn coordinate_projections_of_products_are_homomorphisms() {
        let budget = Budget::default();
        let k3 = make_named_algebra(AlgebraName::K3);
        let b2 = make_named_algebra(AlgebraName::B2);
        let prod = product(&[&k3, &b2], &budget).unwrap();
        for (coord, factor) in [(0usize, &k3), (1usize, &b2)] {
            let projection: Vec<usize> = (0..prod.size())
                .map(|idx| {
                    let name = prod.element_name(idx);
                    let part = name.split('.').nth(coord).unwrap();
                    factor.element_index(part).unwrap()
                })
                .collect();
            assert_eq!(is_homomorphism(&projection, &prod, factor), Ok(true));
        }
    }

    #[test]
    fn subuniverse_generation_is_monotone_in_the_seed() {
        let a = is6();
        let small = BTreeSet::from([el(&a, "0")]);
        let large = BTreeSet::from([el(&a, "0"), el(&a, "a")]);
        let small_closure = subuniverse_generated(&a, &small);
        let large_closure = subuniverse_generated(&a, &large);
        assert!(small_closure.is_subset(&large_closure));
    }

    #[test]
    fn lift_primes_colliding_names() {
        let odd = FiniteAlgebra::new(
            "odd",
            Signature::DeMorgan,
            vec!["B".into(), "T".into()],
            vec![
                vec![0, 0, 0, 1],
                vec![0, 1, 1, 1],
                vec![1, 0],
                vec![0],
                vec![1],
            ],
        )
        .unwrap();
        let lifted = nabla_lift(&odd).unwrap();
        assert_eq!(lifted.elements(), ["B", "T", "B'", "T'"]);
    }

    #[test]
    fn hat_reduct_projects_the_tables() {
        let a = is6();
        let hat = hat_reduct(&a).unwrap();
        assert_eq!(hat.signature(), Signature::DeMorgan);
        assert_eq!(hat.elements(), a.elements());
        assert_eq!(hat.table(Sym::And), a.table(Sym::And));
        assert_eq!(hat.table(Sym::Nabla), None);
        let k3ish = hat_reduct(&make_named_algebra(AlgebraName::Is3)).unwrap();
        assert_eq!(k3ish.size(), 3);
        // the middle element stays a negation fixpoint
        assert_eq!(k3ish.negate(1), 1);
    }

    #[test]
    fn products_are_componentwise() {
        let budget = Budget::default();
        let b2 = make_named_algebra(AlgebraName::B2);
        let four = product(&[&b2, &b2], &budget).unwrap();
        assert_eq!(four.size(), 4);
        assert_eq!(four.elements(), ["0.0", "0.1", "1.0", "1.1"]);
        let a = is6();
        assert_eq!(product(&[&a, &a], &budget).unwrap().size(), 36);
        let k3 = make_named_algebra(AlgebraName::K3);
        let unary = product(&[&k3], &budget).unwrap();
        assert_eq!(unary.table(Sym::And), k3.table(Sym::And));
        assert_eq!(unary.table(Sym::Neg), k3.table(Sym::Neg));
    }

    #[test]
    fn product_cap_is_enforced() {
        let budget = Budget {
            product_elements: 30,
            ..Budget::default()
        };
        let a = is6();
        assert_eq!(
            product(&[&a, &a], &budget),
            Err(AlgebraError::ProductCap { size: 36, cap: 30 })
        );
    }

    #[test]
    fn generated_subuniverses_match_hand_closures() {
        let a = is6();
        let names = |s: &BTreeSet<usize>| -> Vec<&str> {
            s.iter().map(|&i| a.element_name(i)).collect()
        };
        // constants alone close to the two-element Boolean subalgebra
        let empty = subuniverse_generated(&a, &BTreeSet::new());
        assert_eq!(names(&empty), ["B", "T"]);
        // a alone is a negation fixpoint, so it closes to a three-element chain
        let from_a = subuniverse_generated(&a, &BTreeSet::from([el(&a, "a")]));
        assert_eq!(names(&from_a), ["B", "a", "T"]);
        // a and b meet at 0 and join at 1, generating everything
        let from_ab = subuniverse_generated(&a, &BTreeSet::from([el(&a, "a"), el(&a, "b")]));
        assert_eq!(from_ab.len(), 6);
    }

    #[test]
    fn subuniverse_generation_is_monotone_and_idempotent() {
        let a = is6();
        for seed in [
            BTreeSet::new(),
            BTreeSet::from([el(&a, "0")]),
            BTreeSet::from([el(&a, "a"), el(&a, "1")]),
        ] {
            let closure = subuniverse_generated(&a, &seed);
            assert!(closure.is_superset(&seed));
            assert_eq!(subuniverse_generated(&a, &closure), closure);
        }
    }

    #[test]
    fn is6_has_exactly_seven_subuniverses() {
        let a = is6();
        let subs = all_subuniverses(&a).unwrap();
        assert_eq!(subs.len(), 7);
        let sizes: Vec<usize> = subs.iter().map(|s| s.len()).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, [2, 3, 3, 4, 5, 5, 6]);
    }

    #[test]
    fn homomorphism_examples() {
        let a = is6();
        let identity: Vec<usize> = (0..6).collect();
        assert_eq!(is_homomorphism(&identity, &a, &a), Ok(true));
        // swapping the two incomparable middle elements is an automorphism
        let swap = vec![0, 1, 3, 2, 4, 5];
        assert_eq!(is_homomorphism(&swap, &a, &a), Ok(true));
        // collapsing 0 onto the bottom breaks nabla
        let collapse = vec![0, 0, 2, 3, 4, 5];
        assert_eq!(is_homomorphism(&collapse, &a, &a), Ok(false));
    }

    #[test]
    fn file_format_round_trips_builtins() {
        for name in AlgebraName::ALL {
            let a = make_named_algebra(name);
            let text = algebra_to_text(&a);
            assert_eq!(algebra_from_text(&text).unwrap(), a);
        }
    }

    #[test]
    fn file_format_is_strict() {
        let a = make_named_algebra(AlgebraName::B2);
        let good = algebra_to_text(&a);
        let unknown_key = good.clone() + "color = red\n";
        assert!(algebra_from_text(&unknown_key).is_err());
        let short_table = good.replace("op neg = 1,0", "op neg = 1");
        assert!(algebra_from_text(&short_table).is_err());
        let missing = good.replace("op neg = 1,0\n", "");
        assert!(algebra_from_text(&missing).is_err());
        let bad_element = good.replace("op neg = 1,0", "op neg = 1,2");
        assert!(algebra_from_text(&bad_element).is_err());
    }
}
