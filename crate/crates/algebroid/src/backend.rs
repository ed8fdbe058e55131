//! Courant-algebroid backends: constant structure tables over a point,
//! the transitive chart model `T + ad P + T*`, and adapted-basis views.

use crate::form::Form;
use crate::section::{SecId, SectionExpr, VectorField};
use scalar_ring::{CoordId, RingContext, ScalarExpr};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum AlgebroidError {
    #[error("pairing table is not square/symmetric over the basis")]
    BadPairingTable,
    #[error("pairing is degenerate")]
    DegeneratePairing,
    #[error("pairing table entries must be constants for a structure backend")]
    NonConstantPairing,
    #[error("bracket table is not square over the basis")]
    BadBracketTable,
    #[error("bracket leaves the span of the basis: section index {0} out of range")]
    BracketOutOfSpan(u16),
    #[error("metric inverse check failed at ({0},{1})")]
    BadMetricInverse(usize, usize),
    #[error("bundle pairing must be symmetric")]
    BundlePairingNotSymmetric,
    #[error("bundle pairing is degenerate")]
    BundlePairingDegenerate,
    #[error("patch component tables have inconsistent dimensions")]
    BadPatchShape,
    #[error("basis change is not invertible: composition differs from identity at ({0},{1})")]
    BasisChangeNotInverse(usize, usize),
    #[error("adapted basis has wrong cardinality")]
    BadAdaptedBasis,
    #[error("unknown section `{0}`")]
    UnknownSection(String),
}

/// Isotropic-splitting tag of a basis section.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tag {
    /// Holomorphic half of `V_+ ⊗ C`.
    Ell,
    /// Antiholomorphic half of `V_+ ⊗ C`.
    EllBar,
    /// `V_- ⊗ C`.
    Minus,
}

/// Chart data for the transitive backend: Hermitian metric, three-form
/// flux, principal connection and the quadratic form on the bundle Lie
/// algebra.
#[derive(Clone, Debug)]
pub struct PatchData {
    pub ctx: RingContext,
    /// `g[j][k] = g_{j k̄}` in the coordinate frame.
    pub g: Vec<Vec<ScalarExpr>>,
    /// `ginv[j][k] = g^{j k̄}`, with `sum_j ginv[j][k] * g[j][l] = δ_{kl}`.
    pub ginv: Vec<Vec<ScalarExpr>>,
    /// Three-form flux.
    pub h_flux: Form,
    /// Connection one-forms, one per bundle Lie-algebra generator.
    pub a_conn: Vec<Form>,
    /// Constant symmetric pairing on the bundle Lie algebra.
    pub k_pairing: Vec<Vec<ScalarExpr>>,
    /// Structure constants: `k_struct[b][c][a]` is the coefficient of the
    /// generator `a` in the bracket of generators `b, c`.  Empty = abelian.
    pub k_struct: Vec<Vec<Vec<ScalarExpr>>>,
}

impl PatchData {
    /// A patch with the given metric and no flux, no bundle.
    pub fn metric_only(ctx: RingContext, g: Vec<Vec<ScalarExpr>>, ginv: Vec<Vec<ScalarExpr>>) -> Self {
        PatchData {
            ctx,
            g,
            ginv,
            h_flux: Form::zero(),
            a_conn: Vec::new(),
            k_pairing: Vec::new(),
            k_struct: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn bundle_rank(&self) -> usize {
        self.a_conn.len()
    }

    pub fn validate(&self) -> Result<(), AlgebroidError> {
        let n = self.ctx.complex_dim().ok_or(AlgebroidError::BadPatchShape)?;
        if self.g.len() != n
            || self.ginv.len() != n
            || self.g.iter().any(|r| r.len() != n)
            || self.ginv.iter().any(|r| r.len() != n)
        {
            return Err(AlgebroidError::BadPatchShape);
        }
        // sum_j ginv[j][k] g[j][l] = δ_{kl}
        for k in 0..n {
            for l in 0..n {
                let mut s = ScalarExpr::zero();
                for j in 0..n {
                    s = s.add(&self.ginv[j][k].mul(&self.g[j][l]));
                }
                let expected = if k == l {
                    ScalarExpr::one()
                } else {
                    ScalarExpr::zero()
                };
                if !s.sub(&expected).is_zero() {
                    return Err(AlgebroidError::BadMetricInverse(k, l));
                }
            }
        }
        let m = self.bundle_rank();
        if self.k_pairing.len() != m || self.k_pairing.iter().any(|r| r.len() != m) {
            return Err(AlgebroidError::BadPatchShape);
        }
        for a in 0..m {
            for b in 0..m {
                if !self.k_pairing[a][b].sub(&self.k_pairing[b][a]).is_zero() {
                    return Err(AlgebroidError::BundlePairingNotSymmetric);
                }
            }
        }
        if m > 0 && symbolic_det(&self.k_pairing).is_zero() {
            return Err(AlgebroidError::BundlePairingDegenerate);
        }
        if !self.k_struct.is_empty()
            && (self.k_struct.len() != m
                || self
                    .k_struct
                    .iter()
                    .any(|r| r.len() != m || r.iter().any(|v| v.len() != m)))
        {
            return Err(AlgebroidError::BadPatchShape);
        }
        Ok(())
    }

    /// Curvature forms `F^a = dA^a + ½ [A ∧ A]^a`.
    pub fn curvature(&self) -> Vec<Form> {
        let m = self.bundle_rank();
        let mut out = Vec::with_capacity(m);
        for a in 0..m {
            let mut f = self.a_conn[a].d(&self.ctx);
            if !self.k_struct.is_empty() {
                for b in 0..m {
                    for c in 0..m {
                        let coef = &self.k_struct[b][c][a];
                        if coef.is_zero() {
                            continue;
                        }
                        f = f.add(
                            &self.a_conn[b]
                                .wedge(&self.a_conn[c])
                                .scale(coef)
                                .scale_ratio(1, 2),
                        );
                    }
                }
            }
            out.push(f);
        }
        out
    }

    /// `⟨F_A ∧ F_A⟩`, the Chern–Weil four-form.
    pub fn f_wedge_f(&self) -> Form {
        let f = self.curvature();
        let m = self.bundle_rank();
        let mut out = Form::zero();
        for a in 0..m {
            for b in 0..m {
                if self.k_pairing[a][b].is_zero() {
                    continue;
                }
                out = out.add(&f[a].wedge(&f[b]).scale(&self.k_pairing[a][b]));
            }
        }
        out
    }
}

/// `dH − ⟨F_A ∧ F_A⟩`, the chart-level anomaly residual.
pub fn bianchi_residual(patch: &PatchData) -> Form {
    patch.h_flux.d(&patch.ctx).sub(&patch.f_wedge_f())
}

/// Determinant by cofactor expansion; exact, intended for small matrices.
fn symbolic_det(m: &[Vec<ScalarExpr>]) -> ScalarExpr {
    let n = m.len();
    if n == 0 {
        return ScalarExpr::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = ScalarExpr::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<ScalarExpr>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&k| k != j)
                    .map(|k| m[i][k].clone())
                    .collect()
            })
            .collect();
        let c = m[0][j].mul(&symbolic_det(&minor));
        det = if j % 2 == 0 { det.add(&c) } else { det.sub(&c) };
    }
    det
}

enum BackendKind {
    /// Constant structure tables, zero anchor (algebroid over a point).
    Table {
        pairing: Vec<Vec<ScalarExpr>>,
        bracket: Vec<Vec<SectionExpr>>,
    },
    /// The transitive chart model with basis
    /// `∂_1..∂_n, ∂̄_1..∂̄_n, k_1..k_m, dz_1..dz_n, dz̄_1..dz̄_n`.
    Chart { patch: PatchData, f_curv: Vec<Form> },
    /// A new basis for an existing backend, with verified inverse.
    Adapted {
        base: Box<Backend>,
        /// `new_i = sum_j p[i][j] base_j`
        p: Vec<Vec<ScalarExpr>>,
        /// `base_j = sum_i q[j][i] new_i`
        q: Vec<Vec<ScalarExpr>>,
    },
}

/// A Courant-algebroid backend: an ordered basis of section symbols with
/// pairing, Dorfman bracket and anchor, immutable after construction.
pub struct Backend {
    ctx: RingContext,
    names: Vec<String>,
    tags: Vec<Tag>,
    kind: BackendKind,
}

impl Backend {
    /// Constant structure data over the given (typically coordinate-free)
    /// ring context; the anchor is zero.
    pub fn build_struct(
        ctx: RingContext,
        names: Vec<String>,
        tags: Vec<Tag>,
        pairing: Vec<Vec<ScalarExpr>>,
        bracket: Vec<Vec<SectionExpr>>,
    ) -> Result<Self, AlgebroidError> {
        let nb = names.len();
        if tags.len() != nb {
            return Err(AlgebroidError::BadAdaptedBasis);
        }
        if pairing.len() != nb || pairing.iter().any(|r| r.len() != nb) {
            return Err(AlgebroidError::BadPairingTable);
        }
        for i in 0..nb {
            for j in 0..nb {
                if !pairing[i][j].sub(&pairing[j][i]).is_zero() {
                    return Err(AlgebroidError::BadPairingTable);
                }
                if pairing[i][j].as_gauss().is_none() && !pairing[i][j].is_constant() {
                    return Err(AlgebroidError::NonConstantPairing);
                }
            }
        }
        if symbolic_det(&pairing).is_zero() {
            return Err(AlgebroidError::DegeneratePairing);
        }
        if bracket.len() != nb || bracket.iter().any(|r| r.len() != nb) {
            return Err(AlgebroidError::BadBracketTable);
        }
        for row in &bracket {
            for s in row {
                if let Some(bad) = s.support().find(|i| i.0 as usize >= nb) {
                    return Err(AlgebroidError::BracketOutOfSpan(bad.0));
                }
            }
        }
        Ok(Backend {
            ctx,
            names,
            tags,
            kind: BackendKind::Table { pairing, bracket },
        })
    }

    /// The transitive chart backend attached to patch data.
    pub fn build_string(patch: PatchData) -> Result<Self, AlgebroidError> {
        patch.validate()?;
        let n = patch.dim();
        let m = patch.bundle_rank();
        let mut names = Vec::with_capacity(4 * n + m);
        let mut tags = Vec::with_capacity(4 * n + m);
        for j in 1..=n {
            names.push(format!("d{}", patch.ctx.coord_name(CoordId((j - 1) as u16))));
            tags.push(Tag::Minus);
        }
        for j in 1..=n {
            names.push(format!(
                "d{}",
                patch.ctx.coord_name(CoordId((n + j - 1) as u16))
            ));
            tags.push(Tag::Minus);
        }
        for a in 1..=m {
            names.push(format!("k{a}"));
            tags.push(Tag::Minus);
        }
        for j in 1..=n {
            names.push(format!("dz{j}^"));
            tags.push(Tag::Minus);
        }
        for j in 1..=n {
            names.push(format!("dzb{j}^"));
            tags.push(Tag::Minus);
        }
        let ctx = patch.ctx.clone();
        let f_curv = patch.curvature();
        Ok(Backend {
            ctx,
            names,
            tags,
            kind: BackendKind::Chart { patch, f_curv },
        })
    }

    /// View an existing backend in a new basis.  `new` lists the new basis
    /// sections in base coordinates; `inverse[j]` expresses base section
    /// `j` in the new basis.  The two matrices are verified to compose to
    /// the identity exactly.
    pub fn adapted(
        base: Backend,
        new: Vec<(String, Tag, SectionExpr)>,
        inverse: Vec<SectionExpr>,
    ) -> Result<Self, AlgebroidError> {
        let nb = base.n_sections();
        if new.len() != nb || inverse.len() != nb {
            return Err(AlgebroidError::BadAdaptedBasis);
        }
        let mut names = Vec::with_capacity(nb);
        let mut tags = Vec::with_capacity(nb);
        let mut p = vec![vec![ScalarExpr::zero(); nb]; nb];
        let mut q = vec![vec![ScalarExpr::zero(); nb]; nb];
        for (i, (name, tag, sec)) in new.iter().enumerate() {
            names.push(name.clone());
            tags.push(*tag);
            for (j, c) in sec.iter() {
                p[i][j.0 as usize] = c.clone();
            }
        }
        for (j, sec) in inverse.iter().enumerate() {
            for (i, c) in sec.iter() {
                q[j][i.0 as usize] = c.clone();
            }
        }
        // sum_i q[j][i] p[i][k] = δ_{jk}
        for j in 0..nb {
            for k in 0..nb {
                let mut s = ScalarExpr::zero();
                for i in 0..nb {
                    s = s.add(&q[j][i].mul(&p[i][k]));
                }
                let expected = if j == k {
                    ScalarExpr::one()
                } else {
                    ScalarExpr::zero()
                };
                if !s.sub(&expected).is_zero() {
                    return Err(AlgebroidError::BasisChangeNotInverse(j, k));
                }
            }
        }
        let ctx = base.ctx.clone();
        Ok(Backend {
            ctx,
            names,
            tags,
            kind: BackendKind::Adapted {
                base: Box::new(base),
                p,
                q,
            },
        })
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    pub fn n_sections(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: SecId) -> &str {
        &self.names[i.0 as usize]
    }

    pub fn tag(&self, i: SecId) -> Tag {
        self.tags[i.0 as usize]
    }

    pub fn section_by_name(&self, name: &str) -> Result<SectionExpr, AlgebroidError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| SectionExpr::basis(SecId(i as u16)))
            .ok_or_else(|| AlgebroidError::UnknownSection(name.to_string()))
    }

    /// Projection to the sections tagged `tag`.
    pub fn project(&self, a: &SectionExpr, tag: Tag) -> SectionExpr {
        let mut out = SectionExpr::zero();
        for (i, c) in a.iter() {
            if self.tags[i.0 as usize] == tag {
                out.add_term(i, c.clone());
            }
        }
        out
    }

    /// Projection to `V_+ ⊗ C = ℓ + ℓ̄`.
    pub fn plus_part(&self, a: &SectionExpr) -> SectionExpr {
        self.project(a, Tag::Ell).add(&self.project(a, Tag::EllBar))
    }

    /// The complex structure of `V_+`: `i` on `ℓ`, `−i` on `ℓ̄`, zero on
    /// the minus part.
    pub fn i_plus(&self, a: &SectionExpr) -> SectionExpr {
        let l = self.project(a, Tag::Ell).scale(&ScalarExpr::i());
        let lb = self
            .project(a, Tag::EllBar)
            .scale(&ScalarExpr::i())
            .neg();
        l.add(&lb)
    }

    /// Symmetric pairing, bilinear over scalars.
    pub fn pairing(&self, a: &SectionExpr, b: &SectionExpr) -> ScalarExpr {
        match &self.kind {
            BackendKind::Table { pairing, .. } => {
                let mut out = ScalarExpr::zero();
                for (i, ca) in a.iter() {
                    for (j, cb) in b.iter() {
                        let p = &pairing[i.0 as usize][j.0 as usize];
                        if !p.is_zero() {
                            out = out.add(&ca.mul(cb).mul(p));
                        }
                    }
                }
                out
            }
            BackendKind::Chart { patch, .. } => {
                let (x, r, xi) = self.chart_split(a);
                let (y, t, eta) = self.chart_split(b);
                let mut out = xi.contract(&y).comp(&[]).add(&eta.contract(&x).comp(&[]));
                out = out.scale_ratio(1, 2);
                for ai in 0..r.len() {
                    for bi in 0..t.len() {
                        let k = &patch.k_pairing[ai][bi];
                        if !k.is_zero() {
                            out = out.add(&r[ai].mul(&t[bi]).mul(k));
                        }
                    }
                }
                out
            }
            BackendKind::Adapted { base, .. } => {
                base.pairing(&self.to_base(a), &self.to_base(b))
            }
        }
    }

    /// The anchor of a section, as a chart vector field.
    pub fn anchor_vf(&self, a: &SectionExpr) -> VectorField {
        match &self.kind {
            BackendKind::Table { .. } => VectorField::zero(),
            BackendKind::Chart { .. } => self.chart_split(a).0,
            BackendKind::Adapted { base, .. } => base.anchor_vf(&self.to_base(a)),
        }
    }

    /// The anchor applied to a scalar: `π(a)(f)`.
    pub fn anchor_apply(&self, a: &SectionExpr, f: &ScalarExpr) -> ScalarExpr {
        self.anchor_vf(a).apply(&self.ctx, f)
    }

    /// The derivation `D f`, characterized by `⟨Df, a⟩ = π(a)(f)`.
    pub fn dee(&self, f: &ScalarExpr) -> SectionExpr {
        match &self.kind {
            BackendKind::Table { .. } => SectionExpr::zero(),
            BackendKind::Chart { patch, .. } => {
                // With the polarized pairing, D f = 2 df.
                let n = patch.dim();
                let m = patch.bundle_rank();
                let mut out = SectionExpr::zero();
                for c in 0..2 * n {
                    let df = f.differentiate(&self.ctx, CoordId(c as u16));
                    out.add_term(SecId((2 * n + m + c) as u16), df.scale_int(2));
                }
                out
            }
            BackendKind::Adapted { base, .. } => {
                let d = base.dee(f);
                self.from_base(&d)
            }
        }
    }

    /// Dorfman bracket, with the axioms' scaling behavior in both slots.
    pub fn dorfman(&self, a: &SectionExpr, b: &SectionExpr) -> SectionExpr {
        match &self.kind {
            BackendKind::Table { bracket, .. } => {
                // Anchor and D vanish, so the bracket is scalar-bilinear.
                let mut out = SectionExpr::zero();
                for (i, ca) in a.iter() {
                    for (j, cb) in b.iter() {
                        let base = &bracket[i.0 as usize][j.0 as usize];
                        if base.is_zero() {
                            continue;
                        }
                        out = out.add(&base.scale(&ca.mul(cb)));
                    }
                }
                out
            }
            BackendKind::Chart { patch, f_curv } => self.chart_dorfman(patch, f_curv, a, b),
            BackendKind::Adapted { base, .. } => {
                let r = base.dorfman(&self.to_base(a), &self.to_base(b));
                self.from_base(&r)
            }
        }
    }

    // -- chart-kind internals -------------------------------------------

    /// Split a section of the chart backend into vector, bundle and
    /// one-form parts.
    fn chart_split(&self, a: &SectionExpr) -> (VectorField, Vec<ScalarExpr>, Form) {
        let (patch, _) = match &self.kind {
            BackendKind::Chart { patch, f_curv } => (patch, f_curv),
            _ => unreachable!("chart_split on non-chart backend"),
        };
        let n = patch.dim();
        let m = patch.bundle_rank();
        let mut x = VectorField::zero();
        let mut r = vec![ScalarExpr::zero(); m];
        let mut xi = Form::zero();
        for (i, c) in a.iter() {
            let i = i.0 as usize;
            if i < 2 * n {
                x.add_term(CoordId(i as u16), c.clone());
            } else if i < 2 * n + m {
                r[i - 2 * n] = r[i - 2 * n].add(c);
            } else {
                let coord = CoordId((i - 2 * n - m) as u16);
                xi = xi.add(&Form::dx(coord).scale(c));
            }
        }
        (x, r, xi)
    }

    fn chart_join(&self, x: &VectorField, r: &[ScalarExpr], xi: &Form) -> SectionExpr {
        let (n, m) = match &self.kind {
            BackendKind::Chart { patch, .. } => (patch.dim(), patch.bundle_rank()),
            _ => unreachable!(),
        };
        let mut out = SectionExpr::zero();
        for (c, e) in x.iter() {
            out.add_term(SecId(c.0), e.clone());
        }
        for (a, e) in r.iter().enumerate() {
            out.add_term(SecId((2 * n + a) as u16), e.clone());
        }
        for (idx, e) in xi.iter() {
            assert_eq!(idx.len(), 1, "one-form part of a chart section");
            out.add_term(SecId(2 * n as u16 + m as u16 + idx[0]), e.clone());
        }
        out
    }

    /// The defining bracket of the transitive chart model, applied to
    /// arbitrary scalar-coefficient sections.
    fn chart_dorfman(
        &self,
        patch: &PatchData,
        f_curv: &[Form],
        a: &SectionExpr,
        b: &SectionExpr,
    ) -> SectionExpr {
        let ctx = &self.ctx;
        let m = patch.bundle_rank();
        let (x, r, xi) = self.chart_split(a);
        let (y, t, eta) = self.chart_split(b);

        // Vector part: the Lie bracket.
        let vec_part = x.lie(ctx, &y);

        // Bundle part: −F_A(X,Y) + d^A_X t − d^A_Y r − [r,t].
        let a_of = |v: &VectorField, gen: usize| patch.a_conn[gen].contract(v).comp(&[]);
        let mut bundle = vec![ScalarExpr::zero(); m];
        for g in 0..m {
            let mut acc = f_curv[g].eval2(&x, &y).neg();
            acc = acc.add(&x.apply(ctx, &t[g]));
            acc = acc.sub(&y.apply(ctx, &r[g]));
            if !patch.k_struct.is_empty() {
                for bb in 0..m {
                    for cc in 0..m {
                        let s = &patch.k_struct[bb][cc][g];
                        if s.is_zero() {
                            continue;
                        }
                        // [A(X), t] − [A(Y), r] − [r, t]
                        let term = a_of(&x, bb)
                            .mul(&t[cc])
                            .sub(&a_of(&y, bb).mul(&r[cc]))
                            .sub(&r[bb].mul(&t[cc]));
                        acc = acc.add(&term.mul(s));
                    }
                }
            }
            bundle[g] = acc;
        }

        // One-form part:
        //   L_X η − ι_Y dξ + ι_Y ι_X H
        //   + 2⟨d^A r, t⟩ + 2⟨ι_X F_A, t⟩ − 2⟨ι_Y F_A, r⟩.
        let mut form = eta.lie(ctx, &x);
        form = form.sub(&xi.d(ctx).contract(&y));
        // contract applies its vector in the first slot, so the double
        // contraction below is ι_Y ι_X H.
        form = form.add(&patch.h_flux.contract(&x).contract(&y));
        for ga in 0..m {
            for gb in 0..m {
                let k = &patch.k_pairing[ga][gb];
                if k.is_zero() {
                    continue;
                }
                // (d^A r)^{ga} = dr^{ga} + [A, r]^{ga}
                let mut dar = Form::scalar(r[ga].clone()).d(ctx);
                if !patch.k_struct.is_empty() {
                    for bb in 0..m {
                        for cc in 0..m {
                            let s = &patch.k_struct[bb][cc][ga];
                            if s.is_zero() {
                                continue;
                            }
                            dar = dar.add(&patch.a_conn[bb].scale(&r[cc].mul(s)));
                        }
                    }
                }
                form = form.add(&dar.scale(&t[gb]).scale(k).scale_int(2));
                form = form.add(
                    &f_curv[ga]
                        .contract(&x)
                        .scale(&t[gb])
                        .scale(k)
                        .scale_int(2),
                );
                form = form.sub(
                    &f_curv[ga]
                        .contract(&y)
                        .scale(&r[gb])
                        .scale(k)
                        .scale_int(2),
                );
            }
        }

        self.chart_join(&vec_part, &bundle, &form)
    }

    // -- adapted-kind internals -----------------------------------------

    fn to_base(&self, a: &SectionExpr) -> SectionExpr {
        let p = match &self.kind {
            BackendKind::Adapted { p, .. } => p,
            _ => unreachable!(),
        };
        let mut out = SectionExpr::zero();
        for (i, c) in a.iter() {
            for (j, pij) in p[i.0 as usize].iter().enumerate() {
                if !pij.is_zero() {
                    out.add_term(SecId(j as u16), c.mul(pij));
                }
            }
        }
        out
    }

    fn from_base(&self, a: &SectionExpr) -> SectionExpr {
        let q = match &self.kind {
            BackendKind::Adapted { q, .. } => q,
            _ => unreachable!(),
        };
        let mut out = SectionExpr::zero();
        for (j, c) in a.iter() {
            for (i, qji) in q[j.0 as usize].iter().enumerate() {
                if !qji.is_zero() {
                    out.add_term(SecId(i as u16), c.mul(qji));
                }
            }
        }
        out
    }

    /// Express a section of this (adapted) backend in its base backend.
    pub fn into_base_section(&self, a: &SectionExpr) -> SectionExpr {
        match &self.kind {
            BackendKind::Adapted { .. } => self.to_base(a),
            _ => a.clone(),
        }
    }

    /// Express a base-backend section in this (adapted) basis.
    pub fn from_base_section(&self, a: &SectionExpr) -> SectionExpr {
        match &self.kind {
            BackendKind::Adapted { .. } => self.from_base(a),
            _ => a.clone(),
        }
    }

    /// For chart backends: the basis section of the coordinate vector
    /// `∂_c`; for others, none.
    pub fn coordinate_vector(&self, c: CoordId) -> Option<SectionExpr> {
        match &self.kind {
            BackendKind::Chart { patch, .. } => {
                let _ = patch;
                Some(SectionExpr::basis(SecId(c.0)))
            }
            _ => None,
        }
    }

    /// For chart backends: the basis section of the coordinate one-form
    /// `dx_c`.
    pub fn coordinate_form(&self, c: CoordId) -> Option<SectionExpr> {
        match &self.kind {
            BackendKind::Chart { patch, .. } => {
                let off = 2 * patch.dim() + patch.bundle_rank();
                Some(SectionExpr::basis(SecId((off + c.0 as usize) as u16)))
            }
            _ => None,
        }
    }

    /// For chart backends: the bundle generator section `k_{a+1}`.
    pub fn bundle_section(&self, a: usize) -> Option<SectionExpr> {
        match &self.kind {
            BackendKind::Chart { patch, .. } => {
                Some(SectionExpr::basis(SecId((2 * patch.dim() + a) as u16)))
            }
            _ => None,
        }
    }

    /// The chart one-form corresponding to the `T*`-components of a
    /// section (chart backends only).
    pub fn one_form_part(&self, a: &SectionExpr) -> Option<Form> {
        match &self.kind {
            BackendKind::Chart { .. } => Some(self.chart_split(a).2),
            _ => None,
        }
    }

    /// Patch data of a chart backend.
    pub fn patch(&self) -> Option<&PatchData> {
        match &self.kind {
            BackendKind::Chart { patch, .. } => Some(patch),
            BackendKind::Adapted { base, .. } => base.patch(),
            _ => None,
        }
    }

    /// The base backend of an adapted view (self otherwise).
    pub fn base_backend(&self) -> &Backend {
        match &self.kind {
            BackendKind::Adapted { base, .. } => base,
            _ => self,
        }
    }
}
