//! Exact commutative differential algebra of chart functions.
//!
//! The ring is generated by declared function symbols (each depending on a
//! subset of the chart coordinates), the coordinates themselves, declared
//! transcendental constants, and the imaginary unit.  Coefficients are exact
//! Gaussian rationals; there is no floating point anywhere, so equality of
//! normal forms is decidable and exact.
//!
//! Constraints on the symbols (harmonicity of a potential, for instance)
//! enter only as oriented rewrite rules on derivative monomials.  Rules are
//! validated at registration: the right-hand side must be strictly smaller
//! than the left-hand side in a fixed monomial order, which makes exhaustive
//! rule application terminating and keeps normal forms canonical.

mod gauss;

pub use gauss::GaussRat;

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Index of a chart coordinate in its [`RingContext`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CoordId(pub u16);

/// Index of a declared function symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SymId(pub u16);

/// Index of a declared transcendental constant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConstId(pub u16);

#[derive(Error, Debug, PartialEq, Eq)]
pub enum RingError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("rewrite rule left-hand side must be a derivative monomial of positive order")]
    RuleNotDerivative,
    #[error("rewrite rule left-hand side differentiates outside the symbol's dependencies")]
    RuleOutsideDeps,
    #[error("rewrite rule is not oriented: right-hand side is not strictly smaller")]
    RuleNotOriented,
    #[error("symbol `{0}` is not declared invertible")]
    NotInvertible(String),
}

#[derive(Clone, Debug)]
struct SymbolDecl {
    name: String,
    /// `deps[c]` is true when the symbol may depend on coordinate `c`.
    deps: Vec<bool>,
    invertible: bool,
}

#[derive(Clone, Debug)]
struct Rule {
    sym: SymId,
    /// Derivative multi-index of the left-hand side, one entry per coordinate.
    orders: Vec<u16>,
    rhs: ScalarExpr,
}

/// Declaration context: coordinates, symbols, constants and rewrite rules.
///
/// A context is built once (declarations first, then rules) and treated as
/// immutable while expressions are being computed; expressions constructed
/// against a context are only meaningful together with it.
#[derive(Clone, Debug)]
pub struct RingContext {
    coords: Vec<String>,
    /// For a complex chart, the number `n` with coordinate layout
    /// `z_1..z_n, zbar_1..zbar_n`.
    n_complex: Option<usize>,
    symbols: Vec<SymbolDecl>,
    consts: Vec<String>,
    rules: Vec<Rule>,
}

impl RingContext {
    /// A context with an explicit list of coordinate names.
    pub fn new(coords: Vec<String>) -> Self {
        RingContext {
            coords,
            n_complex: None,
            symbols: Vec::new(),
            consts: Vec::new(),
            rules: Vec::new(),
        }
    }

    /// A complex chart of dimension `n`, with coordinates
    /// `z1..zn, zb1..zbn` (holomorphic first, conjugates second).
    pub fn new_complex(n: usize) -> Self {
        let mut coords = Vec::with_capacity(2 * n);
        for j in 1..=n {
            coords.push(format!("z{j}"));
        }
        for j in 1..=n {
            coords.push(format!("zb{j}"));
        }
        RingContext {
            coords,
            n_complex: Some(n),
            symbols: Vec::new(),
            consts: Vec::new(),
            rules: Vec::new(),
        }
    }

    /// A context over a point (no coordinates): every symbol is constant.
    pub fn new_point() -> Self {
        Self::new(Vec::new())
    }

    pub fn n_coords(&self) -> usize {
        self.coords.len()
    }

    /// Complex dimension, when the chart was created with [`RingContext::new_complex`].
    pub fn complex_dim(&self) -> Option<usize> {
        self.n_complex
    }

    /// Holomorphic coordinate `z_{j+1}` (0-based `j`).
    pub fn holo(&self, j: usize) -> CoordId {
        let n = self.n_complex.expect("not a complex chart");
        assert!(j < n);
        CoordId(j as u16)
    }

    /// Antiholomorphic coordinate `zbar_{j+1}` (0-based `j`).
    pub fn anti(&self, j: usize) -> CoordId {
        let n = self.n_complex.expect("not a complex chart");
        assert!(j < n);
        CoordId((n + j) as u16)
    }

    pub fn coord_name(&self, c: CoordId) -> &str {
        &self.coords[c.0 as usize]
    }

    pub fn coord_id(&self, name: &str) -> Result<CoordId, RingError> {
        self.coords
            .iter()
            .position(|c| c == name)
            .map(|i| CoordId(i as u16))
            .ok_or_else(|| RingError::UnknownCoordinate(name.to_string()))
    }

    pub fn sym_name(&self, s: SymId) -> &str {
        &self.symbols[s.0 as usize].name
    }

    pub fn sym_id(&self, name: &str) -> Option<SymId> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(|i| SymId(i as u16))
    }

    pub fn const_name(&self, c: ConstId) -> &str {
        &self.consts[c.0 as usize]
    }

    pub fn const_id(&self, name: &str) -> Option<ConstId> {
        self.consts
            .iter()
            .position(|c| c == name)
            .map(|i| ConstId(i as u16))
    }

    pub fn is_invertible(&self, s: SymId) -> bool {
        self.symbols[s.0 as usize].invertible
    }

    fn name_taken(&self, name: &str) -> bool {
        self.coords.iter().any(|c| c == name)
            || self.symbols.iter().any(|s| s.name == name)
            || self.consts.iter().any(|c| c == name)
    }

    /// Declare a transcendental constant (e.g. `pi`).  Constants are
    /// invertible and killed by every derivative.
    pub fn declare_const(&mut self, name: &str) -> Result<ConstId, RingError> {
        if self.name_taken(name) {
            return Err(RingError::DuplicateName(name.to_string()));
        }
        self.consts.push(name.to_string());
        Ok(ConstId((self.consts.len() - 1) as u16))
    }

    /// Declare a function symbol depending on the given coordinates.
    pub fn declare_symbol(&mut self, name: &str, deps: &[CoordId]) -> Result<SymId, RingError> {
        self.declare(name, deps, false)
    }

    /// Declare a symbol depending on all coordinates.
    pub fn declare_symbol_all(&mut self, name: &str) -> Result<SymId, RingError> {
        let deps: Vec<CoordId> = (0..self.coords.len()).map(|i| CoordId(i as u16)).collect();
        self.declare(name, &deps, false)
    }

    /// Declare an invertible symbol (nowhere-vanishing function); negative
    /// powers are then admissible and differentiate by the power rule.
    pub fn declare_invertible(&mut self, name: &str, deps: &[CoordId]) -> Result<SymId, RingError> {
        self.declare(name, deps, true)
    }

    pub fn declare_invertible_all(&mut self, name: &str) -> Result<SymId, RingError> {
        let deps: Vec<CoordId> = (0..self.coords.len()).map(|i| CoordId(i as u16)).collect();
        self.declare(name, &deps, true)
    }

    fn declare(&mut self, name: &str, deps: &[CoordId], invertible: bool) -> Result<SymId, RingError> {
        if self.name_taken(name) {
            return Err(RingError::DuplicateName(name.to_string()));
        }
        let mut dv = vec![false; self.coords.len()];
        for d in deps {
            if d.0 as usize >= self.coords.len() {
                return Err(RingError::UnknownCoordinate(format!("#{}", d.0)));
            }
            dv[d.0 as usize] = true;
        }
        self.symbols.push(SymbolDecl {
            name: name.to_string(),
            deps: dv,
            invertible,
        });
        Ok(SymId((self.symbols.len() - 1) as u16))
    }

    /// Register the oriented rewrite rule `D^orders(sym) -> rhs`.
    ///
    /// The left-hand side must be a derivative monomial of positive total
    /// order, taken inside the symbol's dependencies, and every derivative
    /// atom occurring in `rhs` must be strictly smaller in the fixed
    /// monomial order `(total order, multi-index lex, symbol index)`.  The
    /// orientation check is what guarantees that exhaustive application of
    /// the rule set terminates.
    pub fn add_rule(&mut self, sym: SymId, orders: &[u16], rhs: ScalarExpr) -> Result<(), RingError> {
        if orders.len() != self.coords.len() || orders.iter().all(|&o| o == 0) {
            return Err(RingError::RuleNotDerivative);
        }
        let decl = &self.symbols[sym.0 as usize];
        for (c, &o) in orders.iter().enumerate() {
            if o > 0 && !decl.deps[c] {
                return Err(RingError::RuleOutsideDeps);
            }
        }
        let lhs_measure = atom_measure(sym, orders);
        for mono in rhs.terms.keys() {
            for (atom, _) in mono.iter() {
                if let Atom::Deriv { sym: s, orders: o } = atom {
                    if atom_measure(*s, o) >= lhs_measure {
                        return Err(RingError::RuleNotOriented);
                    }
                }
            }
        }
        self.rules.push(Rule {
            sym,
            orders: orders.to_vec(),
            rhs,
        });
        Ok(())
    }

    fn dep(&self, sym: SymId, coord: CoordId) -> bool {
        self.symbols[sym.0 as usize].deps[coord.0 as usize]
    }

    /// Normal form of the derivative monomial `D^orders(sym)`.
    fn reduce_atom(&self, sym: SymId, orders: &[u16]) -> ScalarExpr {
        for (c, &o) in orders.iter().enumerate() {
            if o > 0 && !self.symbols[sym.0 as usize].deps[c] {
                return ScalarExpr::zero();
            }
        }
        for rule in &self.rules {
            if rule.sym == sym && rule.orders.iter().zip(orders).all(|(a, b)| a <= b) {
                let mut e = rule.rhs.clone();
                for (c, (&ro, &o)) in rule.orders.iter().zip(orders).enumerate() {
                    for _ in ro..o {
                        e = e.differentiate(self, CoordId(c as u16));
                    }
                }
                return e;
            }
        }
        if orders.iter().all(|&o| o == 0) {
            ScalarExpr::from_atom(Atom::Sym(sym), 1)
        } else {
            ScalarExpr::from_atom(
                Atom::Deriv {
                    sym,
                    orders: orders.to_vec(),
                },
                1,
            )
        }
    }
}

/// A multiplicative generator of the ring.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    /// A chart coordinate.
    Coord(CoordId),
    /// A declared transcendental constant.
    Const(ConstId),
    /// An underived function symbol.
    Sym(SymId),
    /// A derivative monomial `D^orders(sym)` with at least one positive order.
    Deriv { sym: SymId, orders: Vec<u16> },
}

fn atom_measure(sym: SymId, orders: &[u16]) -> (u32, Vec<u16>, u16) {
    (
        orders.iter().map(|&o| o as u32).sum(),
        orders.to_vec(),
        sym.0,
    )
}

/// A normalized monomial: atoms with nonzero integer exponents, sorted.
type Monomial = Vec<(Atom, i32)>;

/// A normalized element of the ring: a finite sum of monomials with nonzero
/// Gaussian-rational coefficients.  Construction keeps normal form, so
/// structural equality is ring equality and the zero test is trivial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ScalarExpr {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_gauss(GaussRat::one())
    }

    pub fn i() -> Self {
        Self::from_gauss(GaussRat::i())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(GaussRat::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_gauss(GaussRat::from_ratio(num, den))
    }

    pub fn from_gauss(c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        ScalarExpr { terms }
    }

    fn from_atom(atom: Atom, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(atom, exp)], GaussRat::one());
        ScalarExpr { terms }
    }

    pub fn coord(c: CoordId) -> Self {
        Self::from_atom(Atom::Coord(c), 1)
    }

    pub fn constant(c: ConstId) -> Self {
        Self::from_atom(Atom::Const(c), 1)
    }

    /// `c^exp` for a declared constant; constants are invertible.
    pub fn constant_pow(c: ConstId, exp: i32) -> Self {
        if exp == 0 {
            Self::one()
        } else {
            Self::from_atom(Atom::Const(c), exp)
        }
    }

    pub fn symbol(s: SymId) -> Self {
        Self::from_atom(Atom::Sym(s), 1)
    }

    /// `s^{-1}` for an invertible symbol.
    pub fn symbol_inv(ctx: &RingContext, s: SymId) -> Result<Self, RingError> {
        if !ctx.is_invertible(s) {
            return Err(RingError::NotInvertible(ctx.sym_name(s).to_string()));
        }
        Ok(Self::from_atom(Atom::Sym(s), -1))
    }

    /// The normal form of the derivative monomial `D^orders(sym)`; rewrite
    /// rules are applied exhaustively.
    pub fn deriv(ctx: &RingContext, sym: SymId, orders: &[u16]) -> Self {
        assert_eq!(orders.len(), ctx.n_coords());
        ctx.reduce_atom(sym, orders)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the expression involves no coordinates and no function
    /// symbols (it may involve declared constants and `i`).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|mono| {
            mono.iter()
                .all(|(atom, _)| matches!(atom, Atom::Const(_)))
        })
    }

    /// The coefficient of the empty monomial, when the expression is a pure
    /// Gaussian-rational constant; `None` otherwise.
    pub fn as_gauss(&self) -> Option<GaussRat> {
        if self.terms.is_empty() {
            return Some(GaussRat::zero());
        }
        if self.terms.len() == 1 {
            if let Some((mono, c)) = self.terms.iter().next() {
                if mono.is_empty() {
                    return Some(c.clone());
                }
            }
        }
        None
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            add_term(&mut out.terms, mono.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        ScalarExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mono = mul_monomials(ma, mb);
                add_term(&mut out, mono, ca * cb);
            }
        }
        ScalarExpr { terms: out }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&GaussRat::from_int(n))
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&GaussRat::from_ratio(num, den))
    }

    /// Multiplicative inverse, when the expression is a single monomial
    /// whose atoms are all invertible (declared constants, or symbols
    /// declared invertible).  `None` otherwise; in particular sums,
    /// coordinates and derivative atoms are never inverted.
    pub fn try_invert(&self, ctx: &RingContext) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (mono, coeff) = self.terms.iter().next().unwrap();
        let mut inv = Vec::with_capacity(mono.len());
        for (atom, exp) in mono {
            match atom {
                Atom::Const(_) => {}
                Atom::Sym(s) if ctx.is_invertible(*s) => {}
                _ => return None,
            }
            inv.push((atom.clone(), -exp));
        }
        let mut terms = BTreeMap::new();
        terms.insert(inv, coeff.inv());
        Some(ScalarExpr { terms })
    }

    /// Nonnegative power.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative; Leibniz over every atom, rewrite rules
    /// applied to the resulting derivative monomials.
    pub fn differentiate(&self, ctx: &RingContext, coord: CoordId) -> Self {
        let mut out = Self::zero();
        for (mono, coeff) in &self.terms {
            for (i, (atom, exp)) in mono.iter().enumerate() {
                let datom = match atom {
                    Atom::Coord(c) => {
                        if *c == coord {
                            Self::one()
                        } else {
                            continue;
                        }
                    }
                    Atom::Const(_) => continue,
                    Atom::Sym(s) => {
                        if !ctx.dep(*s, coord) {
                            continue;
                        }
                        let mut orders = vec![0u16; ctx.n_coords()];
                        orders[coord.0 as usize] = 1;
                        ctx.reduce_atom(*s, &orders)
                    }
                    Atom::Deriv { sym, orders } => {
                        if !ctx.dep(*sym, coord) {
                            continue;
                        }
                        let mut o = orders.clone();
                        o[coord.0 as usize] += 1;
                        ctx.reduce_atom(*sym, &o)
                    }
                };
                // d(atom^k) = k * atom^(k-1) * d(atom), times the other atoms.
                let mut rest: Monomial = Vec::with_capacity(mono.len());
                for (j, (a, e)) in mono.iter().enumerate() {
                    if i == j {
                        if *e != 1 {
                            rest.push((a.clone(), e - 1));
                        }
                    } else {
                        rest.push((a.clone(), *e));
                    }
                }
                let mut piece = ScalarExpr {
                    terms: BTreeMap::from([(rest, coeff.scale_int(*exp as i64))]),
                };
                piece = piece.mul(&datom);
                out = out.add(&piece);
            }
        }
        out
    }

    /// Number of terms in the normal form.
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn display<'a>(&'a self, ctx: &'a RingContext) -> ScalarDisplay<'a> {
        ScalarDisplay { expr: self, ctx }
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, GaussRat>, mono: Monomial, c: GaussRat) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(mono) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: Monomial = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0.clone(), e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub struct ScalarDisplay<'a> {
    expr: &'a ScalarExpr,
    ctx: &'a RingContext,
}

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (mono, coeff)) in self.expr.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if mono.is_empty() {
                write!(f, "{coeff}")?;
                continue;
            }
            if !coeff.is_one() {
                write!(f, "{coeff}*")?;
            }
            for (j, (atom, exp)) in mono.iter().enumerate() {
                if j > 0 {
                    write!(f, "*")?;
                }
                match atom {
                    Atom::Coord(c) => write!(f, "{}", self.ctx.coord_name(*c))?,
                    Atom::Const(c) => write!(f, "{}", self.ctx.const_name(*c))?,
                    Atom::Sym(s) => write!(f, "{}", self.ctx.sym_name(*s))?,
                    Atom::Deriv { sym, orders } => {
                        write!(f, "d[")?;
                        let mut first = true;
                        for (c, &o) in orders.iter().enumerate() {
                            for _ in 0..o {
                                if !first {
                                    write!(f, ",")?;
                                }
                                first = false;
                                write!(f, "{}", self.ctx.coord_name(CoordId(c as u16)))?;
                            }
                        }
                        write!(f, "]{}", self.ctx.sym_name(*sym))?;
                    }
                }
                if *exp != 1 {
                    write!(f, "^{exp}")?;
                }
            }
        }
        Ok(())
    }
}
