//! Adapted isotropic frames of the string backend attached to a Hermitian
//! patch, and the dilaton section candidates.

use crate::geometry::{
    codifferential_omega, hermitian_form, inv_metric_vector, j_one_form, lambda_f, lee_form_raw,
    metric_flat, vf_anti, HgError, HgResult,
};
use algebroid::{Backend, Form, PatchData, SectionExpr, VectorField};
use scalar_ring::{CoordId, ScalarExpr};

/// Lift a one-form to the `T*`-part of a chart-backend section.
pub fn section_of_form(backend: &Backend, a: &Form) -> SectionExpr {
    let mut out = SectionExpr::zero();
    for (idx, e) in a.iter() {
        assert_eq!(idx.len(), 1, "only one-forms embed as sections");
        let s = backend
            .coordinate_form(CoordId(idx[0]))
            .expect("chart backend");
        out = out.add(&s.scale(e));
    }
    out
}

/// Lift a vector field to the `T`-part of a chart-backend section.
pub fn section_of_vector(backend: &Backend, x: &VectorField) -> SectionExpr {
    let mut out = SectionExpr::zero();
    for (c, e) in x.iter() {
        let s = backend.coordinate_vector(c).expect("chart backend");
        out = out.add(&s.scale(e));
    }
    out
}

/// `σ_±(X) = X ± gX`.
pub fn sigma_pm(backend: &Backend, patch: &PatchData, x: &VectorField, plus: bool) -> SectionExpr {
    let vx = section_of_vector(backend, x);
    let gx = section_of_form(backend, &metric_flat(patch, x));
    if plus {
        vx.add(&gx)
    } else {
        vx.sub(&gx)
    }
}

/// An ordered pair of isotropic frames of `ℓ` and `ℓ̄`, together with the
/// dilaton section, over an owned backend.
pub struct FrameSet {
    pub n: usize,
    pub backend: Backend,
    /// The `ℓ`-frame `e^1..e^n`.
    pub e_up: Vec<SectionExpr>,
    /// The `ℓ̄`-frame `e_1..e_n`.
    pub e_dn: Vec<SectionExpr>,
    /// The dilaton section.
    pub epsilon: SectionExpr,
}

impl FrameSet {
    /// Wrap explicitly given frames (e.g. on a structure-table backend).
    pub fn from_parts(
        n: usize,
        backend: Backend,
        e_up: Vec<SectionExpr>,
        e_dn: Vec<SectionExpr>,
        epsilon: SectionExpr,
    ) -> Self {
        assert_eq!(e_up.len(), n);
        assert_eq!(e_dn.len(), n);
        FrameSet {
            n,
            backend,
            e_up,
            e_dn,
            epsilon,
        }
    }

    /// Structural defects of the frames: failures of duality
    /// `⟨e^j, e_k⟩ = δ_{jk}`, of isotropy within each frame, and of the
    /// involutivity `[e_j, e_k] = 0` of the `ℓ̄`-frame.  Empty means all
    /// conditions hold exactly.
    pub fn defects(&self) -> Vec<String> {
        let mut out = Vec::new();
        for j in 0..self.n {
            for k in 0..self.n {
                let p = self.backend.pairing(&self.e_up[j], &self.e_dn[k]);
                let expect = if j == k {
                    ScalarExpr::one()
                } else {
                    ScalarExpr::zero()
                };
                if !p.sub(&expect).is_zero() {
                    out.push(format!("duality <e^{}, e_{}>", j + 1, k + 1));
                }
                if !self.backend.pairing(&self.e_up[j], &self.e_up[k]).is_zero() {
                    out.push(format!("isotropy <e^{}, e^{}>", j + 1, k + 1));
                }
                if !self.backend.pairing(&self.e_dn[j], &self.e_dn[k]).is_zero() {
                    out.push(format!("isotropy <e_{}, e_{}>", j + 1, k + 1));
                }
                if k > j && !self.backend.dorfman(&self.e_dn[j], &self.e_dn[k]).is_zero() {
                    out.push(format!("involutivity [e_{}, e_{}]", j + 1, k + 1));
                }
            }
        }
        out
    }
}

/// Build the adapted isotropic frames
/// `e^j = g⁻¹dz̄_j + dz̄_j` and `e_j = ∂̄_j + g ∂̄_j`
/// over the string backend of the patch, with the dilaton section
/// `ε = −θ_ω` of the twisted theory.
pub fn build_frames(patch: &PatchData) -> HgResult<FrameSet> {
    let n = patch.dim();
    let backend = Backend::build_string(patch.clone())?;
    let mut e_up = Vec::with_capacity(n);
    let mut e_dn = Vec::with_capacity(n);
    for j in 0..n {
        let up = section_of_vector(&backend, &inv_metric_vector(patch, j)).add(
            &backend
                .coordinate_form(patch.ctx.anti(j))
                .expect("chart backend"),
        );
        let anti = vf_anti(patch, j);
        let dn = section_of_vector(&backend, &anti)
            .add(&section_of_form(&backend, &metric_flat(patch, &anti)));
        e_up.push(up);
        e_dn.push(dn);
    }
    let theta = if n >= 2 {
        lee_form_raw(patch)
    } else {
        Form::zero()
    };
    let epsilon = section_of_form(&backend, &theta).neg();
    Ok(FrameSet {
        n,
        backend,
        e_up,
        e_dn,
        epsilon,
    })
}

/// The dilaton section of the coupled theory for the holomorphic volume
/// `Ω = ψ dz_1∧⋯∧dz_n` with real nowhere-vanishing coefficient `ψ`:
/// `ε = d log‖Ω‖_ω + i(d*ω − d^c log‖Ω‖_ω) − (i/2) Λ_ω F_A`.
pub fn coupled_epsilon(
    backend: &Backend,
    patch: &PatchData,
    psi: &ScalarExpr,
) -> HgResult<SectionExpr> {
    let ctx = &patch.ctx;
    let psi_inv = psi.try_invert(ctx).ok_or(HgError::NonInvertibleVolume)?;
    // log‖Ω‖_ω = log ψ − ½ log det g, differentiated.
    let n = patch.dim();
    let dpsi = Form::scalar(psi.clone()).d(ctx).scale(&psi_inv);
    let mut dlogdet = Form::zero();
    for c in 0..2 * n {
        let mut acc = ScalarExpr::zero();
        for j in 0..n {
            for l in 0..n {
                if patch.ginv[j][l].is_zero() {
                    continue;
                }
                acc = acc.add(
                    &patch.ginv[j][l].mul(&patch.g[j][l].differentiate(ctx, CoordId(c as u16))),
                );
            }
        }
        dlogdet = dlogdet.add(&Form::dx(CoordId(c as u16)).scale(&acc));
    }
    let dlog_norm = dpsi.sub(&dlogdet.scale_ratio(1, 2));
    // d^c log‖Ω‖ = −J d log‖Ω‖.
    let dc_log_norm = j_one_form(patch, &dlog_norm).neg();
    let dstar = codifferential_omega(patch);
    let form_part = dlog_norm.add(
        &dstar
            .sub(&dc_log_norm)
            .scale(&ScalarExpr::i()),
    );
    let mut out = section_of_form(backend, &form_part);
    let lf = lambda_f(patch)?;
    for (a, v) in lf.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let k = backend.bundle_section(a).expect("chart backend");
        out = out.add(&k.scale(&v.mul(&ScalarExpr::i()).scale_ratio(-1, 2)));
    }
    Ok(out)
}

/// `ε_ℓ − ε` for a one-form-plus-bundle dilaton section, per the explicit
/// type decomposition of a one-form in `E ⊗ C`:
/// `ε_ℓ = ½ σ₊(g⁻¹ ε^{0,1})`.
pub fn ell_projection_defect(
    backend: &Backend,
    patch: &PatchData,
    epsilon: &SectionExpr,
) -> SectionExpr {
    let n = patch.dim();
    // Split the section: one-form part and bundle part; the vector part
    // must be zero for a dilaton candidate.
    let form = backend
        .one_form_part(epsilon)
        .expect("chart backend");
    let mut eps01_vec = VectorField::zero();
    for (idx, e) in form.iter() {
        let c = idx[0] as usize;
        if c >= n {
            // g⁻¹ dz̄_{c−n}
            let v = inv_metric_vector(patch, c - n);
            for (vc, ve) in v.iter() {
                eps01_vec.add_term(vc, ve.mul(e));
            }
        }
    }
    let ell = sigma_pm(backend, patch, &eps01_vec, true).scale(&ScalarExpr::from_ratio(1, 2));
    ell.sub(epsilon)
}

/// `ω` of the patch, re-exported at the frame level for convenience.
pub fn patch_hermitian_form(patch: &PatchData) -> Form {
    hermitian_form(patch)
}
