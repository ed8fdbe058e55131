//! Exterior forms on a chart, stored componentwise in the coordinate
//! coframe with exact scalar components.

use crate::section::VectorField;
use scalar_ring::{CoordId, RingContext, ScalarExpr};
use std::collections::BTreeMap;

/// A differential form (possibly of mixed degree): scalar components
/// indexed by strictly increasing coordinate index lists.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Form {
    comps: BTreeMap<Vec<u16>, ScalarExpr>,
}

impl Form {
    pub fn zero() -> Self {
        Form {
            comps: BTreeMap::new(),
        }
    }

    pub fn scalar(e: ScalarExpr) -> Self {
        let mut f = Form::zero();
        f.add_comp(&[], e);
        f
    }

    /// The coordinate one-form `dx_c`.
    pub fn dx(c: CoordId) -> Self {
        let mut f = Form::zero();
        f.add_comp(&[c.0], ScalarExpr::one());
        f
    }

    pub fn one_form(comps: impl IntoIterator<Item = (CoordId, ScalarExpr)>) -> Self {
        let mut f = Form::zero();
        for (c, e) in comps {
            f.add_comp(&[c.0], e);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Component on a strictly increasing index list.
    pub fn comp(&self, idx: &[u16]) -> ScalarExpr {
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        self.comps.get(idx).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u16>, &ScalarExpr)> {
        self.comps.iter()
    }

    /// Add `e` on the (not necessarily sorted, duplicate-free) index list,
    /// with the sorting sign.
    pub fn add_comp_signed(&mut self, idx: &[u16], e: ScalarExpr) {
        if e.is_zero() {
            return;
        }
        let mut v: Vec<u16> = idx.to_vec();
        // parity of the sorting permutation by counting inversions
        let mut sign = 1i64;
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                match v[i].cmp(&v[j]) {
                    std::cmp::Ordering::Greater => sign = -sign,
                    std::cmp::Ordering::Equal => return,
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        v.sort_unstable();
        self.add_comp(&v, if sign == 1 { e } else { e.neg() });
    }

    fn add_comp(&mut self, idx: &[u16], e: ScalarExpr) {
        if e.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.comps.entry(idx.to_vec()) {
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
        for (idx, e) in &rhs.comps {
            out.add_comp(idx, e.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Form {
            comps: self.comps.iter().map(|(i, e)| (i.clone(), e.neg())).collect(),
        }
    }

    pub fn scale(&self, f: &ScalarExpr) -> Self {
        let mut out = Form::zero();
        for (idx, e) in &self.comps {
            out.add_comp(idx, e.mul(f));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&ScalarExpr::from_int(n))
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&ScalarExpr::from_ratio(num, den))
    }

    pub fn wedge(&self, rhs: &Self) -> Self {
        let mut out = Form::zero();
        for (ia, ea) in &self.comps {
            for (ib, eb) in &rhs.comps {
                if ia.iter().any(|x| ib.contains(x)) {
                    continue;
                }
                let mut idx = ia.clone();
                idx.extend_from_slice(ib);
                out.add_comp_signed(&idx, ea.mul(eb));
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self, ctx: &RingContext) -> Self {
        self.d_partial(ctx, 0, ctx.n_coords())
    }

    /// Dolbeault operator on a complex chart: derivatives in the
    /// holomorphic coordinates only.
    pub fn del(&self, ctx: &RingContext) -> Self {
        let n = ctx.complex_dim().expect("del requires a complex chart");
        self.d_partial(ctx, 0, n)
    }

    /// Conjugate Dolbeault operator: antiholomorphic derivatives only.
    pub fn delbar(&self, ctx: &RingContext) -> Self {
        let n = ctx.complex_dim().expect("delbar requires a complex chart");
        self.d_partial(ctx, n, 2 * n)
    }

    /// `d^c = i (delbar - del)`, so that `d d^c = -d^c d` and
    /// `d^c f = i(delbar f - del f)` on functions.
    pub fn dc(&self, ctx: &RingContext) -> Self {
        self.delbar(ctx).sub(&self.del(ctx)).scale(&ScalarExpr::i())
    }

    fn d_partial(&self, ctx: &RingContext, lo: usize, hi: usize) -> Self {
        let mut out = Form::zero();
        for (idx, e) in &self.comps {
            for c in lo..hi {
                let de = e.differentiate(ctx, CoordId(c as u16));
                if de.is_zero() || idx.contains(&(c as u16)) {
                    continue;
                }
                let mut nidx = vec![c as u16];
                nidx.extend_from_slice(idx);
                out.add_comp_signed(&nidx, de);
            }
        }
        out
    }

    /// Interior product with a vector field.
    pub fn contract(&self, x: &VectorField) -> Self {
        let mut out = Form::zero();
        for (idx, e) in &self.comps {
            for (p, &c) in idx.iter().enumerate() {
                let xc = x.comp(CoordId(c));
                if xc.is_zero() {
                    continue;
                }
                let mut nidx = idx.clone();
                nidx.remove(p);
                let val = xc.mul(e);
                out.add_comp(&nidx, if p % 2 == 0 { val } else { val.neg() });
            }
        }
        out
    }

    /// Evaluation of a two-form on a pair of vector fields.
    pub fn eval2(&self, x: &VectorField, y: &VectorField) -> ScalarExpr {
        self.contract(x).contract(y).comp(&[])
    }

    /// Lie derivative along a vector field (Cartan's formula).
    pub fn lie(&self, ctx: &RingContext, x: &VectorField) -> Self {
        self.d(ctx).contract(x).add(&self.contract(x).d(ctx))
    }

    /// Maximal degree with a nonzero component (0 for the zero form).
    pub fn top_degree(&self) -> usize {
        self.comps.keys().map(|k| k.len()).max().unwrap_or(0)
    }
}
