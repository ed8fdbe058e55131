//! Supersymmetry generator builders: the sections `w`, `J`, `H`, the
//! central charge, and the obstruction functions `R`, `F^{ij}`, `F_{ij}`,
//! constructed over an isotropic frame pair of a Courant backend.

use algebroid::{Backend, SectionExpr};
use scalar_ring::{GaussRat, ScalarExpr};
use thiserror::Error;
use va_core::VaExpr;

pub use hermitian_geometry::frames::{build_frames, section_of_form, FrameSet};

#[derive(Error, Debug)]
pub enum GenError {
    #[error("operation requires a chart backend with metric data")]
    ChartBackendRequired,
    #[error(transparent)]
    Geometry(#[from] hermitian_geometry::HgError),
}

pub type GenResult<T> = Result<T, GenError>;

/// Projection of a section onto the span of the `e^j` frame, using frame
/// duality: `a_ℓ = Σ_k ⟨a, e_k⟩ e^k`.
pub fn project_ell(fr: &FrameSet, a: &SectionExpr) -> SectionExpr {
    let mut out = SectionExpr::zero();
    for k in 0..fr.n {
        let c = fr.backend.pairing(a, &fr.e_dn[k]);
        if !c.is_zero() {
            out = out.add(&fr.e_up[k].scale(&c));
        }
    }
    out
}

/// Projection onto the span of the `e_j` frame: `a_ℓ̄ = Σ_k ⟨a, e^k⟩ e_k`.
pub fn project_ellbar(fr: &FrameSet, a: &SectionExpr) -> SectionExpr {
    let mut out = SectionExpr::zero();
    for k in 0..fr.n {
        let c = fr.backend.pairing(a, &fr.e_up[k]);
        if !c.is_zero() {
            out = out.add(&fr.e_dn[k].scale(&c));
        }
    }
    out
}

/// `a₊ = a_ℓ + a_ℓ̄`.
pub fn plus_part(fr: &FrameSet, a: &SectionExpr) -> SectionExpr {
    project_ell(fr, a).add(&project_ellbar(fr, a))
}

/// `a₋ = a − a₊`.
pub fn minus_part(fr: &FrameSet, a: &SectionExpr) -> SectionExpr {
    a.sub(&plus_part(fr, a))
}

/// `I₊ a₊ = a_ℓ̄ − a_ℓ`, the reflection of the positive part.
pub fn i_plus(fr: &FrameSet, a: &SectionExpr) -> SectionExpr {
    project_ellbar(fr, a).sub(&project_ell(fr, a))
}

/// `w = Σ_j [e^j, e_j]_ℓ̄ − Σ_j [e^j, e_j]_ℓ` as a section.
pub fn w_section(fr: &FrameSet) -> SectionExpr {
    let mut sum = SectionExpr::zero();
    for j in 0..fr.n {
        sum = sum.add(&fr.backend.dorfman(&fr.e_up[j], &fr.e_dn[j]));
    }
    i_plus(fr, &sum)
}

/// `w` as a vertex-algebra expression.
pub fn build_w(fr: &FrameSet) -> VaExpr {
    VaExpr::Section(w_section(fr))
}

/// Which dilaton section `J` is built from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JMode {
    /// Use the frame's own dilaton section `ε`.
    General,
    /// Use `ε = −θ_ω` recomputed from the chart metric.
    Global,
}

/// `J = (i/2) Σ_j :e^j e_j: − S(iu)`, with `u = Πε`.
pub fn build_j(fr: &FrameSet, mode: JMode) -> GenResult<VaExpr> {
    let mut terms = Vec::with_capacity(fr.n + 1);
    for j in 0..fr.n {
        terms.push(VaExpr::scale(
            GaussRat::from_parts(0, 1, 2),
            VaExpr::nop(
                VaExpr::Section(fr.e_up[j].clone()),
                VaExpr::Section(fr.e_dn[j].clone()),
            ),
        ));
    }
    let eps = epsilon_for(fr, mode)?;
    if !eps.is_zero() {
        terms.push(VaExpr::scale(
            GaussRat::i().scale_int(-1),
            VaExpr::s(VaExpr::Section(eps)),
        ));
    }
    Ok(VaExpr::Sum(terms))
}

fn epsilon_for(fr: &FrameSet, mode: JMode) -> GenResult<SectionExpr> {
    match mode {
        JMode::General => Ok(fr.epsilon.clone()),
        JMode::Global => {
            let patch = fr
                .backend
                .patch()
                .ok_or(GenError::ChartBackendRequired)?;
            let theta = if patch.dim() >= 2 {
                hermitian_geometry::lee_form_raw(patch)
            } else {
                algebroid::Form::zero()
            };
            Ok(section_of_form(&fr.backend, &theta).neg())
        }
    }
}

/// Which form of `H` to construct.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HMode {
    /// The full expression, valid under the F-term condition alone.
    General,
    /// Drops the `S`-terms; requires `[ε, ·] = 0`.
    Reduced,
    /// Replaces the `w`/`u` tail with `T u_ℓ`; additionally requires the
    /// moment-map equation for `ε`.
    Exact,
}

/// The supersymmetry generator `H` in the chosen form.
pub fn build_h(fr: &FrameSet, mode: HMode) -> VaExpr {
    let n = fr.n;
    let mut terms = Vec::new();
    // ½ Σ_j (:e_j (Se^j): + :e^j (Se_j):)
    for j in 0..n {
        terms.push(VaExpr::scale(
            GaussRat::from_ratio(1, 2),
            VaExpr::nop(
                VaExpr::Section(fr.e_dn[j].clone()),
                VaExpr::s(VaExpr::Section(fr.e_up[j].clone())),
            ),
        ));
        terms.push(VaExpr::scale(
            GaussRat::from_ratio(1, 2),
            VaExpr::nop(
                VaExpr::Section(fr.e_up[j].clone()),
                VaExpr::s(VaExpr::Section(fr.e_dn[j].clone())),
            ),
        ));
    }
    // ¼ Σ_{j,k} (:e_j :e^k [e^j,e_k]:: + :e^j :e_k [e_j,e^k]::
    //            − :e_j :e_k [e^j,e^k]:: − :e^j :e^k [e_j,e_k]::)
    let quarter = GaussRat::from_ratio(1, 4);
    for j in 0..n {
        for k in 0..n {
            let br = |a: &SectionExpr, b: &SectionExpr| fr.backend.dorfman(a, b);
            let quad = |outer: &SectionExpr, mid: &SectionExpr, inner: SectionExpr| {
                VaExpr::nop(
                    VaExpr::Section(outer.clone()),
                    VaExpr::nop(VaExpr::Section(mid.clone()), VaExpr::Section(inner)),
                )
            };
            terms.push(VaExpr::scale(
                quarter.clone(),
                quad(&fr.e_dn[j], &fr.e_up[k], br(&fr.e_up[j], &fr.e_dn[k])),
            ));
            terms.push(VaExpr::scale(
                quarter.clone(),
                quad(&fr.e_up[j], &fr.e_dn[k], br(&fr.e_dn[j], &fr.e_up[k])),
            ));
            terms.push(VaExpr::scale(
                quarter.scale_int(-1),
                quad(&fr.e_dn[j], &fr.e_dn[k], br(&fr.e_up[j], &fr.e_up[k])),
            ));
            terms.push(VaExpr::scale(
                quarter.scale_int(-1),
                quad(&fr.e_up[j], &fr.e_up[k], br(&fr.e_dn[j], &fr.e_dn[k])),
            ));
        }
    }
    match mode {
        HMode::Exact => {
            // + T u_ℓ
            let ul = project_ell(fr, &fr.epsilon);
            if !ul.is_zero() {
                terms.push(VaExpr::t(VaExpr::Section(ul)));
            }
        }
        HMode::General | HMode::Reduced => {
            // + (T/2) w − T I₊ u₊
            let w = w_section(fr);
            if !w.is_zero() {
                terms.push(VaExpr::scale(
                    GaussRat::from_ratio(1, 2),
                    VaExpr::t(VaExpr::Section(w)),
                ));
            }
            let ipu = i_plus(fr, &fr.epsilon);
            if !ipu.is_zero() {
                terms.push(VaExpr::scale(
                    GaussRat::from_int(-1),
                    VaExpr::t(VaExpr::Section(ipu)),
                ));
            }
            if mode == HMode::General {
                // + (S/2) Σ_j (:[u,e^j] e_j: + :e^j [u,e_j]: − 2T⟨[u,e^j],e_j⟩)
                let mut s_arg = Vec::new();
                for j in 0..n {
                    let ue_up = fr.backend.dorfman(&fr.epsilon, &fr.e_up[j]);
                    let ue_dn = fr.backend.dorfman(&fr.epsilon, &fr.e_dn[j]);
                    if !ue_up.is_zero() {
                        s_arg.push(VaExpr::nop(
                            VaExpr::Section(ue_up.clone()),
                            VaExpr::Section(fr.e_dn[j].clone()),
                        ));
                        let pair = fr.backend.pairing(&ue_up, &fr.e_dn[j]);
                        if !pair.is_zero() {
                            s_arg.push(VaExpr::scale(
                                GaussRat::from_int(-2),
                                VaExpr::t(VaExpr::Scalar(pair)),
                            ));
                        }
                    }
                    if !ue_dn.is_zero() {
                        s_arg.push(VaExpr::nop(
                            VaExpr::Section(fr.e_up[j].clone()),
                            VaExpr::Section(ue_dn),
                        ));
                    }
                }
                if !s_arg.is_empty() {
                    terms.push(VaExpr::scale(
                        GaussRat::from_ratio(1, 2),
                        VaExpr::s(VaExpr::Sum(s_arg)),
                    ));
                }
            }
        }
    }
    VaExpr::Sum(terms)
}

/// The central charge `c = 3(n − 2(Σ_j ⟨[u,e^j],e_j⟩ − ⟨u,u⟩))`.
pub fn central_charge(fr: &FrameSet) -> ScalarExpr {
    let mut acc = ScalarExpr::zero();
    for j in 0..fr.n {
        let br = fr.backend.dorfman(&fr.epsilon, &fr.e_up[j]);
        acc = acc.add(&fr.backend.pairing(&br, &fr.e_dn[j]));
    }
    acc = acc.sub(&fr.backend.pairing(&fr.epsilon, &fr.epsilon));
    ScalarExpr::from_int(3).mul(&ScalarExpr::from_int(1).scale_int(fr.n as i64).sub(&acc.scale_int(2)))
}

/// The obstruction data: the function `R`, the matrices `F^{ij}` and
/// `F_{ij}`, and the residuals of their rewritten forms (which vanish
/// exactly under the F-term condition).
pub struct RfData {
    pub r: ScalarExpr,
    pub f_upper: Vec<Vec<ScalarExpr>>,
    pub f_lower: Vec<Vec<ScalarExpr>>,
    /// The moment-map specialization `Σ_k ⟨D⟨[e^i,e^j],e_k⟩,e^k⟩`, which
    /// agrees with `f_upper` when the moment-map equation holds and
    /// computes the torsion bivector in volume-normalized coordinates.
    pub f_upper_special: Vec<Vec<ScalarExpr>>,
    pub rewrite_residual_upper: Vec<Vec<ScalarExpr>>,
    pub rewrite_residual_lower: Vec<Vec<ScalarExpr>>,
}

/// `R = Σ_{j,k} (3⟨[e^j,e_j]₋,[e^k,e_k]₋⟩ − ⟨[e^j,e_k]₋,[e^k,e_j]₋⟩)` and
/// the obstruction matrices
/// `F^{ij} = tr(π_ℓ̄ ∘ ad_{[e^i,e^j]}|_ℓ̄)
///          + Σ_k (⟨D⟨e^i,[e_k,e^k]⟩,e^j⟩ − ⟨D⟨e^j,[e_k,e^k]⟩,e^i⟩)`
/// (and the mirror `F_{ij}`), together with the residuals of the
/// bracket-rewritten forms.
pub fn build_r_f(fr: &FrameSet) -> RfData {
    let n = fr.n;
    let b: &Backend = &fr.backend;
    let br = |x: &SectionExpr, y: &SectionExpr| b.dorfman(x, y);

    // R
    let mut r = ScalarExpr::zero();
    let diag: Vec<SectionExpr> = (0..n)
        .map(|j| minus_part(fr, &br(&fr.e_up[j], &fr.e_dn[j])))
        .collect();
    for j in 0..n {
        for k in 0..n {
            r = r.add(&b.pairing(&diag[j], &diag[k]).scale_int(3));
            let jk = minus_part(fr, &br(&fr.e_up[j], &fr.e_dn[k]));
            let kj = minus_part(fr, &br(&fr.e_up[k], &fr.e_dn[j]));
            r = r.sub(&b.pairing(&jk, &kj));
        }
    }

    // Shared contractions Σ_k [e_k, e^k] and Σ_k [e^k, e_k].
    let mut sum_dn_up = SectionExpr::zero();
    let mut sum_up_dn = SectionExpr::zero();
    for k in 0..n {
        sum_dn_up = sum_dn_up.add(&br(&fr.e_dn[k], &fr.e_up[k]));
        sum_up_dn = sum_up_dn.add(&br(&fr.e_up[k], &fr.e_dn[k]));
    }

    let zeros = vec![vec![ScalarExpr::zero(); n]; n];
    let mut f_upper = zeros.clone();
    let mut f_lower = zeros.clone();
    let mut f_special = zeros.clone();
    let mut res_upper = zeros.clone();
    let mut res_lower = zeros;
    for i in 0..n {
        for j in 0..n {
            // F^{ij}
            let bij = br(&fr.e_up[i], &fr.e_up[j]);
            let mut trace = ScalarExpr::zero();
            for k in 0..n {
                trace = trace.add(&b.pairing(&br(&bij, &fr.e_dn[k]), &fr.e_up[k]));
            }
            let mut val = trace.clone();
            val = val.add(&b.pairing(
                &b.dee(&b.pairing(&fr.e_up[i], &sum_dn_up)),
                &fr.e_up[j],
            ));
            val = val.sub(&b.pairing(
                &b.dee(&b.pairing(&fr.e_up[j], &sum_dn_up)),
                &fr.e_up[i],
            ));
            f_upper[i][j] = val.clone();
            // Rewritten: ⟨[[e_k,e^k],e^i],e^j⟩ + ⟨D⟨[e^i,e^j],e_k⟩,e^k⟩.
            let mut special = ScalarExpr::zero();
            for k in 0..n {
                special = special.add(&b.pairing(
                    &b.dee(&b.pairing(&bij, &fr.e_dn[k])),
                    &fr.e_up[k],
                ));
            }
            let alt = b
                .pairing(&br(&sum_dn_up, &fr.e_up[i]), &fr.e_up[j])
                .add(&special);
            f_special[i][j] = special;
            res_upper[i][j] = alt.sub(&val);

            // F_{ij}
            let bij_l = br(&fr.e_dn[i], &fr.e_dn[j]);
            let mut trace_l = ScalarExpr::zero();
            for k in 0..n {
                trace_l = trace_l.add(&b.pairing(&br(&bij_l, &fr.e_up[k]), &fr.e_dn[k]));
            }
            let mut val_l = trace_l;
            val_l = val_l.add(&b.pairing(
                &b.dee(&b.pairing(&fr.e_dn[i], &sum_up_dn)),
                &fr.e_dn[j],
            ));
            val_l = val_l.sub(&b.pairing(
                &b.dee(&b.pairing(&fr.e_dn[j], &sum_up_dn)),
                &fr.e_dn[i],
            ));
            f_lower[i][j] = val_l.clone();
            let mut alt_l = b.pairing(&br(&sum_up_dn, &fr.e_dn[i]), &fr.e_dn[j]);
            for k in 0..n {
                alt_l = alt_l.add(&b.pairing(
                    &b.dee(&b.pairing(&bij_l, &fr.e_up[k])),
                    &fr.e_dn[k],
                ));
            }
            res_lower[i][j] = alt_l.sub(&val_l);
        }
    }
    RfData {
        r,
        f_upper,
        f_lower,
        f_upper_special: f_special,
        rewrite_residual_upper: res_upper,
        rewrite_residual_lower: res_lower,
    }
}

/// The moment-map specialization `R = −4 Σ_j ⟨[e^j,u],e_j⟩ + 8⟨u₋,u₋⟩`.
pub fn r_specialized(fr: &FrameSet) -> ScalarExpr {
    let mut acc = ScalarExpr::zero();
    for j in 0..fr.n {
        let br = fr.backend.dorfman(&fr.e_up[j], &fr.epsilon);
        acc = acc.add(&fr.backend.pairing(&br, &fr.e_dn[j]));
    }
    let um = minus_part(fr, &fr.epsilon);
    fr.backend
        .pairing(&um, &um)
        .scale_int(8)
        .sub(&acc.scale_int(4))
}

/// Swap the roles of the two frames (and their span projections).
pub fn swap_frames(fr: FrameSet) -> FrameSet {
    FrameSet::from_parts(fr.n, fr.backend, fr.e_dn, fr.e_up, fr.epsilon)
}
