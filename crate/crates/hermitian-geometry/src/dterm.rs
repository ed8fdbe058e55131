//! The moment-map section `μ` of an adapted frame pair, computed two ways:
//! directly from the bracket, and from its closed-form expression in the
//! geometry, together with the defect against a dilaton candidate.

use crate::frames::{ell_projection_defect, section_of_form, sigma_pm, FrameSet};
use crate::geometry::{codifferential_omega, inv_metric_vector, split_types};
use algebroid::{Form, PatchData, SectionExpr, VectorField};
use scalar_ring::ScalarExpr;

/// `μ = ½ Σ_j [e_j, e^j]` computed directly from the Dorfman bracket.
pub fn mu_direct(frames: &FrameSet) -> SectionExpr {
    let mut out = SectionExpr::zero();
    for j in 0..frames.n {
        out = out.add(&frames.backend.dorfman(&frames.e_dn[j], &frames.e_up[j]));
    }
    out.scale_ratio(1, 2)
}

/// The same section in closed form: with `φ = −d log‖Ω‖ − i(d*ω − d^c log‖Ω‖)`
/// specialised to the untwisted local volume (`‖Ω₀‖² = 1/det g`), one has
/// `2μ = σ₊(g⁻¹ φ^{1,0}) − σ₋(g⁻¹ φ)`.
pub fn mu_closed_form(frames: &FrameSet, patch: &PatchData) -> SectionExpr {
    let phi = phi_form(patch);
    let (phi10, _) = split_types(patch, &phi);
    let x10 = inv_metric_apply(patch, &phi10);
    let xall = inv_metric_apply(patch, &phi);
    let a = sigma_pm(&frames.backend, patch, &x10, true);
    let b = sigma_pm(&frames.backend, patch, &xall, false);
    a.sub(&b).scale_ratio(1, 2)
}

/// `φ_ω = −d log‖Ω₀‖_ω − i(d*ω − d^c log‖Ω₀‖_ω)` for the untwisted local
/// volume form, whose norm is `det g^{-1/2}`.
pub fn phi_form(patch: &PatchData) -> Form {
    let ctx = &patch.ctx;
    let n = patch.dim();
    let mut dlogdet = Form::zero();
    for c in 0..2 * n {
        let mut acc = ScalarExpr::zero();
        for j in 0..n {
            for l in 0..n {
                if patch.ginv[j][l].is_zero() {
                    continue;
                }
                acc = acc.add(&patch.ginv[j][l].mul(&patch.g[j][l].differentiate(
                    ctx,
                    scalar_ring::CoordId(c as u16),
                )));
            }
        }
        dlogdet = dlogdet.add(&Form::dx(scalar_ring::CoordId(c as u16)).scale(&acc));
    }
    // log‖Ω₀‖ = −½ log det g.
    let dlog_norm = dlogdet.scale_ratio(-1, 2);
    let dc_log_norm = crate::geometry::j_one_form(patch, &dlog_norm).neg();
    let dstar = codifferential_omega(patch);
    dlog_norm
        .neg()
        .sub(&dstar.sub(&dc_log_norm).scale(&ScalarExpr::i()))
}

/// Raise a one-form with the inverse metric: `g⁻¹ξ`.
pub fn inv_metric_apply(patch: &PatchData, xi: &Form) -> VectorField {
    let n = patch.dim();
    let mut out = VectorField::zero();
    for (idx, e) in xi.iter() {
        assert_eq!(idx.len(), 1, "one-form expected");
        let c = idx[0] as usize;
        if c < n {
            // g⁻¹ dz_c = Σ_m g^{cm̄} ∂̄_m
            for m in 0..n {
                if patch.ginv[c][m].is_zero() {
                    continue;
                }
                out.add_term(patch.ctx.anti(m), patch.ginv[c][m].mul(e));
            }
        } else {
            for (vc, ve) in inv_metric_vector(patch, c - n).iter() {
                out.add_term(vc, ve.mul(e));
            }
        }
    }
    out
}

/// Residual of the moment-map condition `μ = ε_ℓ − ε` against a dilaton
/// candidate given as a one-form.
pub fn dterm_residual(frames: &FrameSet, patch: &PatchData, epsilon: &Form) -> SectionExpr {
    let eps = section_of_form(&frames.backend, epsilon);
    let target = ell_projection_defect(&frames.backend, patch, &eps);
    mu_direct(frames).sub(&target)
}
