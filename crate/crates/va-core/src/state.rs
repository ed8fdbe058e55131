//! Canonical states: sums of right-nested normally ordered monomials.

use algebroid::SecId;
use scalar_ring::{GaussRat, RingContext, ScalarExpr};
use std::collections::BTreeMap;
use std::fmt;

/// One normally ordered factor: `T^t S^s` applied to an (odd) basis
/// section generator.  The factor is odd exactly when `s` is false.
///
/// The derive order of the fields fixes the canonical factor order:
/// generator index first, then `T`-power, then `S`-flag.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Factor {
    pub sec: SecId,
    pub t: u32,
    pub s: bool,
}

impl Factor {
    pub fn bare(sec: SecId) -> Self {
        Factor { sec, t: 0, s: false }
    }

    pub fn is_bare(&self) -> bool {
        self.t == 0 && !self.s
    }

    /// Parity: the underlying shifted section is odd, `S` flips parity,
    /// `T` preserves it.
    pub fn odd(&self) -> bool {
        !self.s
    }

    /// The factor with one more `S` applied (`S² = T`).
    pub fn s_applied(&self) -> Self {
        if self.s {
            Factor {
                sec: self.sec,
                t: self.t + 1,
                s: false,
            }
        } else {
            Factor {
                sec: self.sec,
                t: self.t,
                s: true,
            }
        }
    }
}

pub(crate) fn factors_parity(fs: &[Factor]) -> bool {
    fs.iter().filter(|f| f.odd()).count() % 2 == 1
}

/// A normalized element of the vertex algebra: a finite sum of monomials
/// `c · :F_1 : F_2 : ⋯ : F_k : ⋯ ::` (right-nested), with scalar
/// coefficients and sorted factor lists.  Zero coefficients are dropped,
/// so structural equality is equality of states.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct State {
    pub(crate) terms: BTreeMap<Vec<Factor>, ScalarExpr>,
}

impl State {
    pub fn zero() -> Self {
        State {
            terms: BTreeMap::new(),
        }
    }

    /// The vacuum `ι(1)`.
    pub fn vacuum() -> Self {
        Self::scalar(ScalarExpr::one())
    }

    /// An embedded scalar `ι(f)`.
    pub fn scalar(f: ScalarExpr) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(Vec::new(), f);
        }
        State { terms }
    }

    /// A single monomial.  The factor list is trusted to be canonical.
    pub(crate) fn monomial(coeff: ScalarExpr, factors: Vec<Factor>) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(factors, coeff);
        }
        State { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the state is a pure multiple of the vacuum.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|k| k.is_empty())
    }

    /// The scalar part (coefficient of the vacuum monomial).
    pub fn scalar_part(&self) -> ScalarExpr {
        self.terms
            .get(&Vec::new())
            .cloned()
            .unwrap_or_else(ScalarExpr::zero)
    }

    /// Parity of a homogeneous state; `None` if parities are mixed or the
    /// state is zero.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|k| factors_parity(k));
        let first = it.next()?;
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        State {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, f: &ScalarExpr) -> Self {
        if f.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.mul(f));
        }
        out
    }

    pub fn scale_gauss(&self, g: &GaussRat) -> Self {
        self.scale(&ScalarExpr::from_gauss(g.clone()))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&ScalarExpr::from_int(n))
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&ScalarExpr::from_ratio(num, den))
    }

    pub(crate) fn add_term(&mut self, k: Vec<Factor>, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Factor>, &ScalarExpr)> {
        self.terms.iter()
    }

    pub fn display<'a, F>(&'a self, ctx: &'a RingContext, name: F) -> StateDisplay<'a, F>
    where
        F: Fn(SecId) -> &'a str,
    {
        StateDisplay {
            state: self,
            ctx,
            name,
        }
    }
}

pub struct StateDisplay<'a, F> {
    state: &'a State,
    ctx: &'a RingContext,
    name: F,
}

impl<'a, F> fmt::Display for StateDisplay<'a, F>
where
    F: Fn(SecId) -> &'a str,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.state.is_zero() {
            return write!(f, "0");
        }
        for (k, (factors, coeff)) in self.state.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", coeff.display(self.ctx))?;
            for fac in factors {
                write!(f, ":")?;
                for _ in 0..fac.t {
                    write!(f, "T.")?;
                }
                if fac.s {
                    write!(f, "S.")?;
                }
                write!(f, "{}", (self.name)(fac.sec))?;
            }
        }
        Ok(())
    }
}
