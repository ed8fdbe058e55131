//! Linear combinations of backend basis sections, and chart vector fields.

use scalar_ring::{CoordId, RingContext, ScalarExpr};
use std::collections::BTreeMap;

/// Index of a basis section in its backend.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SecId(pub u16);

/// A finite linear combination of basis sections with scalar coefficients.
/// Zero coefficients are never stored, so structural equality is equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SectionExpr {
    coeffs: BTreeMap<SecId, ScalarExpr>,
}

impl SectionExpr {
    pub fn zero() -> Self {
        SectionExpr {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(i: SecId) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, ScalarExpr::one());
        SectionExpr { coeffs }
    }

    pub fn term(i: SecId, c: ScalarExpr) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(i, c);
        }
        SectionExpr { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: SecId) -> ScalarExpr {
        self.coeffs.get(&i).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SecId, &ScalarExpr)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = SecId> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &rhs.coeffs {
            out.add_term(*i, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, i: SecId, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(i) {
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

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        SectionExpr {
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| (*i, c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, f: &ScalarExpr) -> Self {
        if f.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (i, c) in &self.coeffs {
            out.add_term(*i, c.mul(f));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&ScalarExpr::from_int(n))
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&ScalarExpr::from_ratio(num, den))
    }
}

/// A chart vector field: scalar coefficients on coordinate derivations.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VectorField {
    comps: BTreeMap<CoordId, ScalarExpr>,
}

impl VectorField {
    pub fn zero() -> Self {
        VectorField {
            comps: BTreeMap::new(),
        }
    }

    pub fn coordinate(c: CoordId) -> Self {
        Self::term(c, ScalarExpr::one())
    }

    pub fn term(c: CoordId, e: ScalarExpr) -> Self {
        let mut comps = BTreeMap::new();
        if !e.is_zero() {
            comps.insert(c, e);
        }
        VectorField { comps }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comp(&self, c: CoordId) -> ScalarExpr {
        self.comps.get(&c).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (CoordId, &ScalarExpr)> {
        self.comps.iter().map(|(k, v)| (*k, v))
    }

    pub fn add_term(&mut self, c: CoordId, e: ScalarExpr) {
        if e.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.comps.entry(c) {
            Entry::Vacant(v) => {
                v.insert(e);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&e);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (c, e) in &rhs.comps {
            out.add_term(*c, e.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        VectorField {
            comps: self.comps.iter().map(|(c, e)| (*c, e.neg())).collect(),
        }
    }

    pub fn scale(&self, f: &ScalarExpr) -> Self {
        let mut out = Self::zero();
        for (c, e) in &self.comps {
            out.add_term(*c, e.mul(f));
        }
        out
    }

    /// The derivation applied to a scalar.
    pub fn apply(&self, ctx: &RingContext, f: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (c, e) in &self.comps {
            out = out.add(&e.mul(&f.differentiate(ctx, *c)));
        }
        out
    }

    /// Lie bracket of vector fields.
    pub fn lie(&self, ctx: &RingContext, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (c, e) in &rhs.comps {
            out.add_term(*c, self.apply(ctx, e));
        }
        for (c, e) in &self.comps {
            out.add_term(*c, rhs.apply(ctx, e).neg());
        }
        out
    }
}
