//! Chart-level tensor computations attached to a Hermitian patch: the
//! Hermitian form, Lee form, torsion bivector, Bismut Ricci form and the
//! trace of the bundle curvature.

use crate::tensor::{TensorField, TensorTag};
use algebroid::{AlgebroidError, Form, PatchData, VectorField};
use scalar_ring::{CoordId, ScalarExpr};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum HgError {
    #[error("operation requires complex dimension at least 2")]
    DimensionTooSmall,
    #[error("volume factor is not an invertible monomial; supply a block metric")]
    NonInvertibleVolume,
    #[error("twisted system residuals require the holomorphic volume coefficient")]
    MissingVolumeCoefficient,
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
}

pub type HgResult<T> = Result<T, HgError>;

/// `ω = i Σ g_{j k̄} dz_j ∧ dz̄_k`.
pub fn hermitian_form(patch: &PatchData) -> Form {
    let n = patch.dim();
    let mut w = Form::zero();
    for j in 0..n {
        for k in 0..n {
            if patch.g[j][k].is_zero() {
                continue;
            }
            w.add_comp_signed(
                &[j as u16, (n + k) as u16],
                patch.g[j][k].mul(&ScalarExpr::i()),
            );
        }
    }
    w
}

pub(crate) fn vf_holo(patch: &PatchData, j: usize) -> VectorField {
    VectorField::coordinate(patch.ctx.holo(j))
}

pub(crate) fn vf_anti(patch: &PatchData, j: usize) -> VectorField {
    VectorField::coordinate(patch.ctx.anti(j))
}

/// The (1,0) vector field `g⁻¹ dz̄_k = Σ_m g^{m k̄} ∂_m`.
pub fn inv_metric_vector(patch: &PatchData, k: usize) -> VectorField {
    let mut v = VectorField::zero();
    for m in 0..patch.dim() {
        v.add_term(patch.ctx.holo(m), patch.ginv[m][k].clone());
    }
    v
}

/// The (0,1) vector field `g⁻¹ dz_k = Σ_m g^{k m̄} ∂̄_m`.
pub fn inv_metric_vector_conj(patch: &PatchData, k: usize) -> VectorField {
    let mut v = VectorField::zero();
    for m in 0..patch.dim() {
        v.add_term(patch.ctx.anti(m), patch.ginv[k][m].clone());
    }
    v
}

/// The metric musical map on a vector field: `X ↦ g(X, ·)` as a one-form.
pub fn metric_flat(patch: &PatchData, x: &VectorField) -> Form {
    let n = patch.dim();
    let mut out = Form::zero();
    for (c, e) in x.iter() {
        let c = c.0 as usize;
        if c < n {
            // g(∂_c, ∂̄_k) = g_{c k̄}
            for k in 0..n {
                out = out.add(&Form::dx(patch.ctx.anti(k)).scale(&e.mul(&patch.g[c][k])));
            }
        } else {
            // g(∂̄_{c−n}, ∂_k) = g_{k (c−n)‾}
            for k in 0..n {
                out = out.add(&Form::dx(patch.ctx.holo(k)).scale(&e.mul(&patch.g[k][c - n])));
            }
        }
    }
    out
}

/// The complex structure on one-forms: `i` on the (1,0) part, `−i` on the
/// (0,1) part, so that `d^c f = −J df` on functions.
pub fn j_one_form(patch: &PatchData, a: &Form) -> Form {
    let n = patch.dim();
    let mut out = Form::zero();
    for (idx, e) in a.iter() {
        assert_eq!(idx.len(), 1, "J acts on one-forms");
        let s = if (idx[0] as usize) < n {
            ScalarExpr::i()
        } else {
            ScalarExpr::i().neg()
        };
        out.add_comp_signed(idx, e.mul(&s));
    }
    out
}

/// The Lee form as an exterior one-form; identically zero when `n = 1`.
pub fn lee_form_raw(patch: &PatchData) -> Form {
    let n = patch.dim();
    let ctx = &patch.ctx;
    let dw = hermitian_form(patch).d(ctx);
    // θ(X) = i Σ_{k,l} g^{k l̄} (dω)(∂_k, X, ∂̄_l)
    //      = −i Σ_{k,l} g^{k l̄} (ι_{∂̄_l} ι_{∂_k} dω)(X).
    let mut theta = Form::zero();
    for k in 0..n {
        for l in 0..n {
            if patch.ginv[k][l].is_zero() {
                continue;
            }
            let c = dw.contract(&vf_holo(patch, k)).contract(&vf_anti(patch, l));
            theta = theta.add(&c.scale(&patch.ginv[k][l].mul(&ScalarExpr::i()).neg()));
        }
    }
    theta
}

/// The Lee form `θ_ω`, characterized by `dω^{n−1} = θ_ω ∧ ω^{n−1}`.
pub fn lee_form(patch: &PatchData) -> HgResult<TensorField> {
    if patch.dim() < 2 {
        return Err(HgError::DimensionTooSmall);
    }
    Ok(TensorField::from_form(1, &lee_form_raw(patch)))
}

/// Residual of the structure equation: `d(ω^{n−1}) − θ_ω ∧ ω^{n−1}`.
pub fn lee_structure_residual(patch: &PatchData) -> HgResult<Form> {
    if patch.dim() < 2 {
        return Err(HgError::DimensionTooSmall);
    }
    let w = hermitian_form(patch);
    let mut wp = Form::scalar(ScalarExpr::one());
    for _ in 0..patch.dim() - 1 {
        wp = wp.wedge(&w);
    }
    let theta = lee_form_raw(patch);
    Ok(wp.d(&patch.ctx).sub(&theta.wedge(&wp)))
}

/// The torsion bivector `σ_ω`, with components
/// `(σ_ω)_{p̄ q̄} = i Σ_k g⁻¹dz̄_k( ∂ω(g⁻¹dz̄_p, g⁻¹dz̄_q, ∂̄_k) )`.
pub fn torsion_sigma(patch: &PatchData) -> TensorField {
    let n = patch.dim();
    let ctx = &patch.ctx;
    let del_w = hermitian_form(patch).del(ctx);
    let mut sigma = TensorField::zero(TensorTag::BivectorAnti(2));
    for p in 0..n {
        for q in (p + 1)..n {
            let vp = inv_metric_vector(patch, p);
            let vq = inv_metric_vector(patch, q);
            let mut comp = ScalarExpr::zero();
            for k in 0..n {
                let inner = del_w
                    .contract(&vp)
                    .contract(&vq)
                    .contract(&vf_anti(patch, k))
                    .comp(&[]);
                if inner.is_zero() {
                    continue;
                }
                comp = comp.add(&inv_metric_vector(patch, k).apply(ctx, &inner));
            }
            sigma.add_comp_signed(&[p as u16, q as u16], comp.mul(&ScalarExpr::i()));
        }
    }
    sigma
}

/// Evaluation `(∂ω)(∂_j, ∂_k, ∂̄_l)` from the stored components.
fn del_w_eval(del_w: &Form, n: usize, j: usize, k: usize, l: usize) -> ScalarExpr {
    if j == k {
        return ScalarExpr::zero();
    }
    let (a, b, sign) = if j < k { (j, k, 1) } else { (k, j, -1) };
    let c = del_w.comp(&[a as u16, b as u16, (n + l) as u16]);
    if sign == 1 {
        c
    } else {
        c.neg()
    }
}

/// The (2,0) part of the Bismut Ricci form, via the Chern-connection
/// divergence of the torsion:
/// `(ρ_B^{2,0})_{jk} = −i g^{p l̄} ∇^C_p (∂ω)_{j k l̄}`.
pub fn bismut_ricci20(patch: &PatchData) -> TensorField {
    let n = patch.dim();
    let ctx = &patch.ctx;
    let del_w = hermitian_form(patch).del(ctx);
    // Chern Christoffel symbols Γ^s_{p j} = Σ_l g^{s l̄} ∂_p g_{j l̄}.
    let gamma = |p: usize, j: usize, s: usize| -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for l in 0..n {
            if patch.ginv[s][l].is_zero() {
                continue;
            }
            let dg = patch.g[j][l].differentiate(ctx, CoordId(p as u16));
            acc = acc.add(&patch.ginv[s][l].mul(&dg));
        }
        acc
    };
    let mut rho = TensorField::zero(TensorTag::Form(2));
    for j in 0..n {
        for k in (j + 1)..n {
            let mut comp = ScalarExpr::zero();
            for p in 0..n {
                for l in 0..n {
                    if patch.ginv[p][l].is_zero() {
                        continue;
                    }
                    // ∇^C_p (∂ω)_{j k l̄} = ∂_p α_{jkl̄} − Γ^s_{pj} α_{skl̄}
                    //                      − Γ^s_{pk} α_{jsl̄}
                    let mut nabla = del_w_eval(&del_w, n, j, k, l)
                        .differentiate(ctx, CoordId(p as u16));
                    for s in 0..n {
                        nabla = nabla.sub(&gamma(p, j, s).mul(&del_w_eval(&del_w, n, s, k, l)));
                        nabla = nabla.sub(&gamma(p, k, s).mul(&del_w_eval(&del_w, n, j, s, l)));
                    }
                    comp = comp.add(&patch.ginv[p][l].mul(&nabla));
                }
            }
            rho.add_comp_signed(&[j as u16, k as u16], comp.mul(&ScalarExpr::i()).neg());
        }
    }
    rho
}

/// Residual of the relation `σ_ω = −(g⁻¹ ⊗ g⁻¹) ρ_B^{2,0}`, computed from
/// the two independent code paths; a (0,2)-bivector, zero for every
/// Hermitian metric.
pub fn sigma_rho_residual(patch: &PatchData) -> TensorField {
    let n = patch.dim();
    let sigma = torsion_sigma(patch);
    let rho = bismut_ricci20(patch);
    let mut out = sigma;
    for p in 0..n {
        for q in (p + 1)..n {
            let mut transported = ScalarExpr::zero();
            for j in 0..n {
                for k in (j + 1)..n {
                    let r = rho.comp(&[j as u16, k as u16]);
                    if r.is_zero() {
                        continue;
                    }
                    let coef = patch.ginv[j][p]
                        .mul(&patch.ginv[k][q])
                        .sub(&patch.ginv[k][p].mul(&patch.ginv[j][q]));
                    transported = transported.add(&coef.mul(&r));
                }
            }
            // out = σ + (g⁻¹⊗g⁻¹)ρ
            out.add_comp_signed(&[p as u16, q as u16], transported);
        }
    }
    out
}

/// `∂ log det g = Σ_{j,l} g^{j l̄} ∂ g_{j l̄}` as a (1,0)-form.
fn del_log_det(patch: &PatchData) -> Form {
    let n = patch.dim();
    let ctx = &patch.ctx;
    let mut out = Form::zero();
    for c in 0..n {
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
        out = out.add(&Form::dx(patch.ctx.holo(c)).scale(&acc));
    }
    out
}

/// Split a one-form into its (1,0) and (0,1) parts.
pub fn split_types(patch: &PatchData, a: &Form) -> (Form, Form) {
    let n = patch.dim();
    let mut p10 = Form::zero();
    let mut p01 = Form::zero();
    for (idx, e) in a.iter() {
        assert_eq!(idx.len(), 1, "type split of a one-form");
        if (idx[0] as usize) < n {
            p10.add_comp_signed(idx, e.clone());
        } else {
            p01.add_comp_signed(idx, e.clone());
        }
    }
    (p10, p01)
}

/// `d*ω`, recovered from the Lee form via the complex structure.
pub fn codifferential_omega(patch: &PatchData) -> Form {
    let theta = if patch.dim() >= 2 {
        lee_form_raw(patch)
    } else {
        Form::zero()
    };
    j_one_form(patch, &theta)
}

/// The full Bismut Ricci form `ρ_B`, as the curvature of the connection
/// induced on the anti-canonical bundle; its local connection form is
/// `∂ log det g + i d*ω`.  The normalization is fixed so that the
/// holomorphic part agrees with [`bismut_ricci20`] exactly.
pub fn bismut_ricci(patch: &PatchData) -> Form {
    let gamma = del_log_det(patch)
        .add(&codifferential_omega(patch).scale(&ScalarExpr::i()));
    gamma.d(&patch.ctx)
}

/// `ω^k / k!`.
pub fn omega_power(patch: &PatchData, k: usize) -> Form {
    let w = hermitian_form(patch);
    let mut out = Form::scalar(ScalarExpr::one());
    for _ in 0..k {
        out = out.wedge(&w);
    }
    let mut fact = 1i64;
    for i in 2..=k as i64 {
        fact *= i;
    }
    out.scale_ratio(1, fact)
}

/// The trace `Λ_ω F_A` of each curvature form, defined by
/// `F_A ∧ ω^{n−1}/(n−1)! = Λ_ω F_A · ωⁿ/n!`.
pub fn lambda_f(patch: &PatchData) -> HgResult<Vec<ScalarExpr>> {
    let n = patch.dim();
    let top: Vec<u16> = (0..2 * n as u16).collect();
    let vol = omega_power(patch, n).comp(&top);
    let vol_inv = vol
        .try_invert(&patch.ctx)
        .ok_or(HgError::NonInvertibleVolume)?;
    let wn1 = omega_power(patch, n - 1);
    let mut out = Vec::with_capacity(patch.bundle_rank());
    for f in patch.curvature() {
        out.push(f.wedge(&wn1).comp(&top).mul(&vol_inv));
    }
    Ok(out)
}

/// `⟨Λ_ω F_A, Λ_ω F_A⟩` in the bundle pairing.
pub fn lambda_f_norm(patch: &PatchData) -> HgResult<ScalarExpr> {
    let lf = lambda_f(patch)?;
    let m = patch.bundle_rank();
    let mut out = ScalarExpr::zero();
    for a in 0..m {
        for b in 0..m {
            if patch.k_pairing[a][b].is_zero() {
                continue;
            }
            out = out.add(&lf[a].mul(&lf[b]).mul(&patch.k_pairing[a][b]));
        }
    }
    Ok(out)
}
