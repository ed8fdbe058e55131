//! Tagged tensor fields on a chart: antisymmetric component maps with an
//! explicit variance tag, so that a covariant two-form and a bivector of
//! the same rank cannot be confused.

use algebroid::Form;
use scalar_ring::ScalarExpr;
use std::collections::BTreeMap;

/// Variance/type tag of a [`TensorField`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TensorTag {
    /// Covariant antisymmetric tensor of the given degree; indices range
    /// over all chart coordinates (holomorphic first, then conjugate).
    Form(usize),
    /// Antisymmetric contravariant tensor of type (0, q): indices are the
    /// antiholomorphic frame directions (0-based).
    BivectorAnti(usize),
}

/// An antisymmetric tensor field: exact scalar components indexed by
/// strictly increasing index lists, with a variance tag.  Components are
/// evaluations on the corresponding frame vectors, which for covariant
/// tensors coincide with coefficients in the sorted coframe monomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorField {
    tag: TensorTag,
    comps: BTreeMap<Vec<u16>, ScalarExpr>,
}

impl TensorField {
    pub fn zero(tag: TensorTag) -> Self {
        TensorField {
            tag,
            comps: BTreeMap::new(),
        }
    }

    pub fn tag(&self) -> TensorTag {
        self.tag
    }

    pub fn degree(&self) -> usize {
        match self.tag {
            TensorTag::Form(d) | TensorTag::BivectorAnti(d) => d,
        }
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

    /// Add a component on a (not necessarily sorted, duplicate-free) index
    /// list, with the sign of the sorting permutation.
    pub fn add_comp_signed(&mut self, idx: &[u16], e: ScalarExpr) {
        assert_eq!(idx.len(), self.degree(), "index rank mismatch");
        if e.is_zero() {
            return;
        }
        let mut v = idx.to_vec();
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
        let e = if sign == 1 { e } else { e.neg() };
        use std::collections::btree_map::Entry;
        match self.comps.entry(v) {
            Entry::Vacant(slot) => {
                slot.insert(e);
            }
            Entry::Occupied(mut slot) => {
                let s = slot.get().add(&e);
                if s.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.tag, rhs.tag, "tensor tag mismatch");
        let mut out = self.clone();
        for (idx, e) in &rhs.comps {
            out.add_comp_signed(idx, e.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        TensorField {
            tag: self.tag,
            comps: self
                .comps
                .iter()
                .map(|(i, e)| (i.clone(), e.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, f: &ScalarExpr) -> Self {
        let mut out = TensorField::zero(self.tag);
        for (idx, e) in &self.comps {
            out.add_comp_signed(idx, e.mul(f));
        }
        out
    }

    /// View a covariant tensor field as an exterior form.
    pub fn to_form(&self) -> Form {
        assert!(matches!(self.tag, TensorTag::Form(_)));
        let mut out = Form::zero();
        for (idx, e) in &self.comps {
            out.add_comp_signed(idx, e.clone());
        }
        out
    }

    /// Wrap a homogeneous exterior form as a covariant tensor field.
    pub fn from_form(degree: usize, f: &Form) -> Self {
        let mut out = TensorField::zero(TensorTag::Form(degree));
        for (idx, e) in f.iter() {
            assert_eq!(idx.len(), degree, "form degree mismatch");
            out.add_comp_signed(idx, e.clone());
        }
        out
    }
}
