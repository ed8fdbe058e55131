//! Polynomials in the odd/even bracket variables with state coefficients.
//!
//! A `LambdaPoly` is a finite sum `Σ λ^m χ^ε v_{m,ε}` (variables on the
//! left, `χ²=−λ`).  A `BiPoly` carries two variable pairs for the Jacobi
//! identity, in the canonical order `λ^a γ^b χ^ε η^δ` with `χ²=−λ`,
//! `η²=−γ`, `χη=−ηχ`.

use crate::state::State;
use std::collections::BTreeMap;

/// Key: (λ-power, χ-flag).
pub type LKey = (u32, bool);

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LambdaPoly {
    pub(crate) coeffs: BTreeMap<LKey, State>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(v: State) -> Self {
        let mut p = Self::zero();
        p.add_term((0, false), v);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: u32, chi: bool) -> State {
        self.coeffs.get(&(m, chi)).cloned().unwrap_or_else(State::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (LKey, &State)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn add_term(&mut self, key: LKey, v: State) {
        if v.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(key) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&v);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in rhs.iter() {
            out.add_term(k, v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        LambdaPoly {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        LambdaPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (*k, v.scale_int(n)))
                .collect(),
        }
    }

    /// Left multiplication by `λ`.
    pub fn mul_lambda(&self) -> Self {
        LambdaPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|((m, e), v)| ((*m + 1, *e), v.clone()))
                .collect(),
        }
    }

    /// Left multiplication by `χ` (`χ·λ^mχ = −λ^{m+1}`).
    pub fn mul_chi(&self) -> Self {
        let mut out = Self::zero();
        for ((m, e), v) in self.coeffs.iter() {
            if *e {
                out.add_term((*m + 1, false), v.neg());
            } else {
                out.add_term((*m, true), v.clone());
            }
        }
        out
    }
}

/// Key: (λ-power, γ-power, χ-flag, η-flag), canonical order
/// `λ^a γ^b χ^ε η^δ`.
pub type BKey = (u32, u32, bool, bool);

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPoly {
    pub(crate) coeffs: BTreeMap<BKey, State>,
}

/// Multiply the variable monomials of two keys (first on the left);
/// returns the combined key and the reordering sign.
pub fn mul_bkeys(a: BKey, b: BKey) -> (BKey, i64) {
    let (a1, b1, e1, d1) = a;
    let (a2, b2, e2, d2) = b;
    // χ^{e1} η^{d1} · λ^{a2} γ^{b2} χ^{e2} η^{d2}: even variables commute
    // through; moving χ^{e2} left past η^{d1} costs a sign.
    let mut sign = if d1 && e2 { -1 } else { 1 };
    let mut la = a1 + a2;
    let mut ga = b1 + b2;
    let e = if e1 && e2 {
        // χχ = −λ
        sign = -sign;
        la += 1;
        false
    } else {
        e1 || e2
    };
    let d = if d1 && d2 {
        // ηη = −γ
        sign = -sign;
        ga += 1;
        false
    } else {
        d1 || d2
    };
    ((la, ga, e, d), sign)
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (BKey, &State)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, key: BKey) -> State {
        self.coeffs.get(&key).cloned().unwrap_or_else(State::zero)
    }

    pub fn add_term(&mut self, key: BKey, v: State) {
        if v.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(key) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&v);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in rhs.iter() {
            out.add_term(k, v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in rhs.iter() {
            out.add_term(k, v.neg());
        }
        out
    }
}
