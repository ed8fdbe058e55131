//! The normalization and Λ-bracket engine.
//!
//! States are kept permanently in canonical form (sorted right-nested
//! monomials); every operation returns canonical output.  The rewrite
//! rules used are: the odd derivation law for `S` (with `T = S²`), the
//! quasicommutativity correction when two factors are swapped or an equal
//! odd pair collides, the quasiassociativity correction when a composite
//! left factor is multiplied, and the bracket calculus (base brackets from
//! the backend, sesquilinearity in the first slot, skew-symmetry, and the
//! non-commutative Wick formula for composite second slots).
//!
//! A step budget bounds the total number of elementary rewrites; running
//! out signals a blow-up, not a wrong answer.

use crate::lpoly::{mul_bkeys, BiPoly, LambdaPoly};
use crate::state::{Factor, State};
use algebroid::{Backend, SecId, SectionExpr};
use scalar_ring::{GaussRat, ScalarExpr};
use std::cell::Cell;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VaError {
    #[error("rewrite step budget exceeded")]
    BudgetExceeded,
    #[error("parity-inhomogeneous state where a homogeneous one is required")]
    MixedParity,
}

pub type VaResult<T> = Result<T, VaError>;

/// One computation context: a backend plus a rewrite budget.
pub struct Engine<'a> {
    backend: &'a Backend,
    budget: Cell<u64>,
}

/// A single multiplicative unit of a monomial: the scalar prefix or one
/// normally ordered factor.
#[derive(Clone, Debug)]
enum Unit {
    Sc(ScalarExpr),
    Fac(Factor),
}

fn unit_parity(u: &Unit) -> bool {
    match u {
        Unit::Sc(_) => false,
        Unit::Fac(f) => f.odd(),
    }
}

fn units_parity(us: &[Unit]) -> bool {
    us.iter().filter(|u| unit_parity(u)).count() % 2 == 1
}

fn binom(n: u32, k: u32) -> i64 {
    let mut out: i64 = 1;
    for j in 0..k {
        out = out * (n - j) as i64 / (j + 1) as i64;
    }
    out
}

impl<'a> Engine<'a> {
    pub fn new(backend: &'a Backend, budget: u64) -> Self {
        Engine {
            backend,
            budget: Cell::new(budget),
        }
    }

    /// A generous default budget.
    pub fn with_default_budget(backend: &'a Backend) -> Self {
        Self::new(backend, 200_000_000)
    }

    pub fn backend(&self) -> &Backend {
        self.backend
    }

    pub fn remaining_budget(&self) -> u64 {
        self.budget.get()
    }

    fn spend(&self) -> VaResult<()> {
        let b = self.budget.get();
        if b == 0 {
            return Err(VaError::BudgetExceeded);
        }
        self.budget.set(b - 1);
        Ok(())
    }

    // -- embeddings ------------------------------------------------------

    pub fn vacuum(&self) -> State {
        State::vacuum()
    }

    /// `ι(f)`.
    pub fn embed_scalar(&self, f: &ScalarExpr) -> State {
        State::scalar(f.clone())
    }

    /// `ȷ(Πa)` for a backend section.
    pub fn embed_section(&self, a: &SectionExpr) -> State {
        let mut out = State::zero();
        for (i, c) in a.iter() {
            out.add_term(vec![Factor::bare(i)], c.clone());
        }
        out
    }

    pub fn basis_state(&self, i: SecId) -> State {
        State::monomial(ScalarExpr::one(), vec![Factor::bare(i)])
    }

    // -- derivations -----------------------------------------------------

    /// The odd derivation `S`; on scalars `S ι(f) = ½ ȷ(Df)`.
    pub fn s_deriv(&self, a: &State) -> VaResult<State> {
        let mut out = State::zero();
        for (fs, c) in a.iter() {
            let dc = self.backend.dee(c);
            if !dc.is_zero() {
                let head = self.embed_section(&dc).scale_ratio(1, 2);
                let rest = State::monomial(ScalarExpr::one(), fs.clone());
                out = out.add(&self.mul_state(&head, &rest)?);
            }
            let mut sign = 1i64;
            for i in 0..fs.len() {
                let mut nf = fs.clone();
                nf[i] = nf[i].s_applied();
                let renorm = self.renormalize_factors(&nf)?;
                out = out.add(&renorm.scale(c).scale_int(sign));
                if fs[i].odd() {
                    sign = -sign;
                }
            }
        }
        Ok(out)
    }

    /// The even derivation `T = S²`.
    pub fn t_deriv(&self, a: &State) -> VaResult<State> {
        let s = self.s_deriv(a)?;
        self.s_deriv(&s)
    }

    fn t_pow(&self, a: &State, k: u32) -> VaResult<State> {
        let mut out = a.clone();
        for _ in 0..k {
            out = self.t_deriv(&out)?;
        }
        Ok(out)
    }

    // -- normally ordered product ---------------------------------------

    /// The normally ordered product `:a b:`, fully normalized.
    pub fn nop(&self, a: &State, b: &State) -> VaResult<State> {
        self.mul_state(a, b)
    }

    fn mul_state(&self, a: &State, b: &State) -> VaResult<State> {
        let mut out = State::zero();
        for (fa, ca) in a.iter() {
            let (us, g) = make_units(ca, fa);
            let prod = self.mul_units_onto(&us, b)?;
            out = out.add(&prod.scale_gauss(&g));
        }
        Ok(out)
    }

    /// `:u b:` for a single unit.
    fn mul_unit(&self, u: &Unit, b: &State) -> VaResult<State> {
        match u {
            Unit::Sc(c) => self.sc_mul(c, b),
            Unit::Fac(f) => self.mul_factor(*f, b),
        }
    }

    /// `:ι(c) b:`.  On a canonical monomial `:ι(c') N:` this reassociates
    /// to `:ι(cc') N:` minus the two quasiassociativity corrections.
    fn sc_mul(&self, c: &ScalarExpr, b: &State) -> VaResult<State> {
        if c.as_gauss().is_some() {
            return Ok(b.scale(c));
        }
        let cstate = State::scalar(c.clone());
        let mut out = State::zero();
        for (fs, cp) in b.iter() {
            out = out.add(&State::monomial(c.mul(cp), fs.clone()));
            let n = State::monomial(ScalarExpr::one(), fs.clone());
            let cpstate = State::scalar(cp.clone());
            let p1 = self.lambda_bracket(&cpstate, &n)?;
            out = out.sub(&self.qa_correction(&cstate, &p1)?);
            let p2 = self.lambda_bracket(&cstate, &n)?;
            out = out.sub(&self.qa_correction(&cpstate, &p2)?);
        }
        Ok(out)
    }

    /// `:(u_1 ⋯ u_k) b:` for a canonical unit list, by right-nesting
    /// with quasiassociativity corrections.
    fn mul_units_onto(&self, us: &[Unit], b: &State) -> VaResult<State> {
        if us.is_empty() {
            return Ok(b.clone());
        }
        if us.len() == 1 {
            return self.mul_unit(&us[0], b);
        }
        let x = &us[0];
        let ys = &us[1..];
        let inner = self.mul_units_onto(ys, b)?;
        let mut out = self.mul_unit(x, &inner)?;
        // ::x y: b: = :x:yb:: + :(∫₀^∇ x)[y_Λ b]: + (−1)^{|x||y|}:(∫₀^∇ y)[x_Λ b]:
        let xstate = unit_state(x);
        let ystate = units_state(ys);
        let p_yb = self.lambda_bracket(&ystate, b)?;
        out = out.add(&self.qa_correction(&xstate, &p_yb)?);
        let p_xb = self.lambda_bracket(&xstate, b)?;
        let sign = if unit_parity(x) && units_parity(ys) {
            -1
        } else {
            1
        };
        out = out.add(&self.qa_correction(&ystate, &p_xb)?.scale_int(sign));
        Ok(out)
    }

    /// The quasiassociativity correction `:(∫₀^∇ dΛ left) p:`: the
    /// `λ^m χ` coefficient `v` of `p` contributes `:(T^{m+1}left/(m+1)) v:`.
    fn qa_correction(&self, left: &State, p: &LambdaPoly) -> VaResult<State> {
        let mut out = State::zero();
        for ((m, chi), v) in p.iter() {
            if !chi {
                continue;
            }
            let l = self.t_pow(left, m + 1)?.scale_ratio(1, (m + 1) as i64);
            out = out.add(&self.mul_state(&l, v)?);
        }
        Ok(out)
    }

    /// `:F b:` for a single factor.
    fn mul_factor(&self, f: Factor, b: &State) -> VaResult<State> {
        let mut out = State::zero();
        for (fs, c) in b.iter() {
            let ins = self.insert_factor(f, fs)?;
            out = out.add(&self.sc_mul(c, &ins)?);
            // Scalar-pull correction: moving F past the scalar prefix
            // ι(c) costs the quasicommutator with ι(c), which is nonzero
            // only when F carries an S.
            if f.s {
                let pc = self
                    .backend
                    .anchor_apply(&SectionExpr::basis(f.sec), c);
                if !pc.is_zero() {
                    let delta = self
                        .t_pow(&State::scalar(pc), f.t + 1)?
                        .scale_ratio(1, (f.t + 1) as i64);
                    let rest = State::monomial(ScalarExpr::one(), fs.clone());
                    out = out.add(&self.mul_state(&delta, &rest)?);
                }
            }
        }
        Ok(out)
    }

    /// Insert a factor in front of a canonical (coefficient-one) factor
    /// list, restoring the canonical order with quasicommutativity
    /// corrections.
    fn insert_factor(&self, f: Factor, gs: &[Factor]) -> VaResult<State> {
        self.spend()?;
        if gs.is_empty() {
            return Ok(State::monomial(ScalarExpr::one(), vec![f]));
        }
        let g = gs[0];
        if f < g || (f == g && !f.odd()) {
            let mut nf = Vec::with_capacity(gs.len() + 1);
            nf.push(f);
            nf.extend_from_slice(gs);
            return Ok(State::monomial(ScalarExpr::one(), nf));
        }
        let rest = State::monomial(ScalarExpr::one(), gs[1..].to_vec());
        if f == g {
            // Equal odd factors: 2·:F:F M:: = :(∫_{−∇}^0 [F_Λ F]) M:.
            let qc = self.quasi_commutator(f, g)?;
            return Ok(self.mul_state(&qc, &rest)?.scale_ratio(1, 2));
        }
        // f > g: swap, collecting the quasicommutator correction.
        let sign = if f.odd() && g.odd() { -1 } else { 1 };
        let swapped = self.insert_factor(f, &gs[1..])?;
        let mut out = self.mul_factor(g, &swapped)?.scale_int(sign);
        let qc = self.quasi_commutator(f, g)?;
        out = out.add(&self.mul_state(&qc, &rest)?);
        Ok(out)
    }

    /// `∫_{−∇}^0 dΛ [F_Λ G]`.
    fn quasi_commutator(&self, f: Factor, g: Factor) -> VaResult<State> {
        let p = self.bracket_base(&Unit::Fac(f), &Unit::Fac(g))?;
        self.int_minus_nabla(&p)
    }

    /// `∫_{−∇}^0 dΛ p`: the `λ^m χ` coefficient `v` contributes
    /// `(−1)^m T^{m+1} v/(m+1)`; χ-free terms vanish.
    pub fn int_minus_nabla(&self, p: &LambdaPoly) -> VaResult<State> {
        let mut out = State::zero();
        for ((m, chi), v) in p.iter() {
            if !chi {
                continue;
            }
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let x = self.t_pow(v, m + 1)?;
            out = out.add(&x.scale_ratio(sign, (m + 1) as i64));
        }
        Ok(out)
    }

    /// Rebuild the normalized state of a (possibly non-canonical) factor
    /// sequence by folding from the right.
    fn renormalize_factors(&self, fs: &[Factor]) -> VaResult<State> {
        let mut acc = State::vacuum();
        for f in fs.iter().rev() {
            acc = self.mul_factor(*f, &acc)?;
        }
        Ok(acc)
    }

    // -- Λ-bracket -------------------------------------------------------

    pub fn lambda_bracket(&self, a: &State, b: &State) -> VaResult<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for (fa, ca) in a.iter() {
            for (fb, cb) in b.iter() {
                let (ua, ga) = make_units(ca, fa);
                let (ub, gb) = make_units(cb, fb);
                let p = self.bracket_units(&ua, &ub)?;
                out = out.add(&p.scale_gauss(&(&ga * &gb)));
            }
        }
        Ok(out)
    }

    fn bracket_units(&self, a: &[Unit], b: &[Unit]) -> VaResult<LambdaPoly> {
        self.spend()?;
        // Brackets with the vacuum vanish.
        if a.is_empty() || b.is_empty() {
            return Ok(LambdaPoly::zero());
        }
        if b.len() >= 2 {
            // Non-commutative Wick formula, peeling the second slot:
            // [a_Λ :w r:] = :[a_Λ w] r: + (−1)^{(|a|+1)|w|} :w [a_Λ r]:
            //              + ∫₀^Λ dΓ [[a_Λ w]_Γ r].
            let w = &b[0];
            let rest = &b[1..];
            let pw = unit_parity(w);
            let pa = units_parity(a);
            let p_aw = self.bracket_units(a, std::slice::from_ref(w))?;
            let p_ar = self.bracket_units(a, rest)?;
            let rest_state = units_state(rest);
            let w_state = unit_state(w);
            let mut out = LambdaPoly::zero();
            for ((m, chi), v) in p_aw.iter() {
                out.add_term((m, chi), self.mul_state(v, &rest_state)?);
            }
            let koszul = (!pa) && pw; // (|a|+1)|w| odd
            for ((m, chi), v) in p_ar.iter() {
                // moving the χ of the coefficient past w costs (−1)^{|w|}
                let mut sign = if koszul { -1 } else { 1 };
                if chi && pw {
                    sign = -sign;
                }
                out.add_term((m, chi), self.mul_state(&w_state, v)?.scale_int(sign));
            }
            for ((m, chi), v) in p_aw.iter() {
                let q = self.lambda_bracket(v, &rest_state)?;
                for ((p, eta), x) in q.iter() {
                    if !eta {
                        continue;
                    }
                    // Berezin in η, then ∫₀^λ γ^p dγ.
                    out.add_term((m + p + 1, chi), x.scale_ratio(1, (p + 1) as i64));
                }
            }
            return Ok(out);
        }
        if a.len() >= 2 {
            // Skew-symmetry: [a_Λ w] = (−1)^{|a||w|} [w_{−Λ−∇} a].
            let inner = self.bracket_units(b, a)?;
            let shifted = self.shift_minus(&inner)?;
            let sign = if units_parity(a) && unit_parity(&b[0]) {
                -1
            } else {
                1
            };
            return Ok(shifted.scale_int(sign));
        }
        self.bracket_base(&a[0], &b[0])
    }

    /// Base brackets on single units.
    fn bracket_base(&self, u: &Unit, w: &Unit) -> VaResult<LambdaPoly> {
        match (u, w) {
            (Unit::Sc(_), Unit::Sc(_)) => Ok(LambdaPoly::zero()),
            (Unit::Fac(f), Unit::Sc(c)) => {
                // [T^t S^s e _Λ ι(c)] = (−λ)^t χ^s ι(π(e)c).
                let pc = self
                    .backend
                    .anchor_apply(&SectionExpr::basis(f.sec), c);
                let mut p = LambdaPoly::constant(State::scalar(pc));
                if f.s {
                    p = p.mul_chi();
                }
                for _ in 0..f.t {
                    p = p.mul_lambda().neg();
                }
                Ok(p)
            }
            (Unit::Sc(_), Unit::Fac(_)) => {
                // Skew-symmetry; the scalar unit is even, so no sign.
                let inner = self.bracket_base(w, u)?;
                self.shift_minus(&inner)
            }
            (Unit::Fac(f1), Unit::Fac(f2)) => {
                if f2.is_bare() {
                    // Strip the first slot by sesquilinearity onto the
                    // backend base bracket
                    // [e_Λ e'] = ȷ([e,e']) + 2χ ι(⟨e,e'⟩).
                    let b1 = SectionExpr::basis(f1.sec);
                    let b2 = SectionExpr::basis(f2.sec);
                    let d = self.backend.dorfman(&b1, &b2);
                    let pr = self.backend.pairing(&b1, &b2);
                    let mut p = LambdaPoly::zero();
                    p.add_term((0, false), self.embed_section(&d));
                    p.add_term((0, true), State::scalar(pr.scale_int(2)));
                    if f1.s {
                        p = p.mul_chi();
                    }
                    for _ in 0..f1.t {
                        p = p.mul_lambda().neg();
                    }
                    Ok(p)
                } else if f1.is_bare() {
                    // Skew-symmetry flips the derived factor into the
                    // first slot, where sesquilinearity strips it.
                    let inner = self.bracket_base(w, u)?;
                    let shifted = self.shift_minus(&inner)?;
                    let sign = if f1.odd() && f2.odd() { -1 } else { 1 };
                    Ok(shifted.scale_int(sign))
                } else {
                    // Strip the first slot, then recurse.
                    let inner = self.bracket_base(&Unit::Fac(Factor::bare(f1.sec)), w)?;
                    let mut p = inner;
                    if f1.s {
                        p = p.mul_chi();
                    }
                    for _ in 0..f1.t {
                        p = p.mul_lambda().neg();
                    }
                    Ok(p)
                }
            }
        }
    }

    /// The substitution `Λ → −Λ−∇`: the entry `λ^m χ^ε v` becomes
    /// `(−λ−T)^m (−χ−S)^ε v`, with `T`, `S` expanded onto the coefficient.
    pub fn shift_minus(&self, p: &LambdaPoly) -> VaResult<LambdaPoly> {
        let mut out = LambdaPoly::zero();
        for ((m, chi), v) in p.iter() {
            // (−χ−S)^ε v first
            let mut parts: Vec<(bool, State)> = Vec::new();
            if chi {
                parts.push((true, v.neg()));
                parts.push((false, self.s_deriv(v)?.neg()));
            } else {
                parts.push((false, v.clone()));
            }
            // then (−λ−T)^m = (−1)^m Σ_j C(m,j) λ^j T^{m−j}
            let outer_sign = if m % 2 == 0 { 1 } else { -1 };
            for j in 0..=m {
                let c = binom(m, j) * outer_sign;
                for (flag, x) in &parts {
                    let y = self.t_pow(x, m - j)?;
                    out.add_term((j, *flag), y.scale_int(c));
                }
            }
        }
        Ok(out)
    }

    /// The substitution `Λ → Λ+Γ` into the second variable pair of a
    /// bivariate polynomial: `λ^p χ^δ v ↦ (λ+γ)^p (χ+η)^δ v`.
    pub fn shift_plus_gamma(&self, p: &LambdaPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((pw, delta), x) in p.iter() {
            for j in 0..=pw {
                let c = binom(pw, j);
                if delta {
                    out.add_term((j, pw - j, true, false), x.scale_int(c));
                    out.add_term((j, pw - j, false, true), x.scale_int(c));
                } else {
                    out.add_term((j, pw - j, false, false), x.scale_int(c));
                }
            }
        }
        out
    }

    // -- Jacobi ----------------------------------------------------------

    /// The residual of the Jacobi identity
    /// `[a_Λ[b_Γ c]] − (−1)^{|a|+1}[[a_Λ b]_{Λ+Γ} c]
    ///  − (−1)^{(|a|+1)(|b|+1)}[b_Γ[a_Λ c]]`
    /// as a bivariate polynomial; zero when the identity holds.
    pub fn jacobi_residual(&self, a: &State, b: &State, c: &State) -> VaResult<BiPoly> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Ok(BiPoly::zero());
        }
        let pa = a.parity().ok_or(VaError::MixedParity)?;
        let pb = b.parity().ok_or(VaError::MixedParity)?;

        // [a_Λ [b_Γ c]]
        let mut term_a = BiPoly::zero();
        let q_bc = self.lambda_bracket(b, c)?;
        for ((p, eta), v) in q_bc.iter() {
            let inner = self.lambda_bracket(a, v)?;
            for ((m, chi), x) in inner.iter() {
                // pull γ^p η^δ through the odd bracket [a_Λ ·], then
                // reorder γ^p η^δ λ^m χ^ε into canonical order
                let mut sign = 1i64;
                if eta && !pa {
                    // |[a_Λ ·]| = |a|+1
                    sign = -sign;
                }
                if eta && chi {
                    sign = -sign;
                }
                term_a.add_term((m, p, chi, eta), x.scale_int(sign));
            }
        }

        // [b_Γ [a_Λ c]]
        let mut term_b = BiPoly::zero();
        let q_ac = self.lambda_bracket(a, c)?;
        for ((m, chi), v) in q_ac.iter() {
            let inner = self.lambda_bracket(b, v)?;
            for ((p, eta), x) in inner.iter() {
                let mut sign = 1i64;
                if chi && !pb {
                    sign = -sign;
                }
                term_b.add_term((m, p, chi, eta), x.scale_int(sign));
            }
        }

        // [[a_Λ b]_{Λ+Γ} c]: the constant χ^ε of the outer coefficient is
        // pulled out of the odd first slot with a sign (−1)^ε.
        let mut term_c = BiPoly::zero();
        let q_ab = self.lambda_bracket(a, b)?;
        for ((m, chi), v) in q_ab.iter() {
            let inner = self.lambda_bracket(v, c)?;
            let sub = self.shift_plus_gamma(&inner);
            let pull = if chi { -1 } else { 1 };
            for (key, x) in sub.iter() {
                let (nk, sign) = mul_bkeys((m, 0, chi, false), key);
                term_c.add_term(nk, x.scale_int(sign * pull));
            }
        }

        let sign_a = if pa { 1 } else { -1 }; // (−1)^{|a|+1}
        let sign_ab = if !pa && !pb { -1 } else { 1 }; // (−1)^{(|a|+1)(|b|+1)}
        Ok(term_a
            .sub(&term_c.scale_sign(sign_a))
            .sub(&term_b.scale_sign(sign_ab)))
    }

    // -- convenience -----------------------------------------------------

    pub fn equals(&self, a: &State, b: &State) -> bool {
        a.sub(b).is_zero()
    }
}

impl BiPoly {
    fn scale_sign(&self, sign: i64) -> BiPoly {
        let mut out = BiPoly::zero();
        for (k, v) in self.iter() {
            out.add_term(k, v.scale_int(sign));
        }
        out
    }
}

impl LambdaPoly {
    pub fn scale_gauss(&self, g: &GaussRat) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (k, v) in self.iter() {
            out.add_term(k, v.scale_gauss(g));
        }
        out
    }
}

fn make_units(c: &ScalarExpr, fs: &[Factor]) -> (Vec<Unit>, GaussRat) {
    if let Some(g) = c.as_gauss() {
        (fs.iter().map(|f| Unit::Fac(*f)).collect(), g)
    } else {
        let mut us = Vec::with_capacity(fs.len() + 1);
        us.push(Unit::Sc(c.clone()));
        us.extend(fs.iter().map(|f| Unit::Fac(*f)));
        (us, GaussRat::one())
    }
}

fn unit_state(u: &Unit) -> State {
    match u {
        Unit::Sc(c) => State::scalar(c.clone()),
        Unit::Fac(f) => State::monomial(ScalarExpr::one(), vec![*f]),
    }
}

fn units_state(us: &[Unit]) -> State {
    let mut coeff = ScalarExpr::one();
    let mut fs = Vec::new();
    for u in us {
        match u {
            Unit::Sc(c) => coeff = coeff.mul(c),
            Unit::Fac(f) => fs.push(*f),
        }
    }
    State::monomial(coeff, fs)
}
