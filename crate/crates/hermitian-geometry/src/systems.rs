//! Residuals of the two coupled geometric PDE systems on a chart, reported
//! equation by equation as exact forms.

use crate::geometry::{
    bismut_ricci, hermitian_form, lambda_f, lambda_f_norm, lee_form_raw, omega_power, HgResult,
};
use algebroid::{Form, PatchData};
use scalar_ring::ScalarExpr;

/// Which system of equations to evaluate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SystemKind {
    /// Conformally balanced metric with closed Lee form, holomorphic
    /// volume, instanton-type curvature, and the anomaly equation.
    TwistedHolomorphic,
    /// Hermitian Yang–Mills-type system coupled to the Bismut Ricci form.
    CoupledHym,
}

/// Residuals of one system on one chart: named exact forms, all of which
/// vanish exactly when the chart solves the system, plus the mean
/// curvature data of the bundle.
pub struct GeoReport {
    pub entries: Vec<(String, Form)>,
    pub lambda_f: Vec<ScalarExpr>,
    pub lambda_f_norm: ScalarExpr,
}

impl GeoReport {
    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|(_, f)| f.is_zero())
    }

    pub fn failing(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(_, f)| !f.is_zero())
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

/// The (0,2)-part of a two-form on a complex chart.
fn part02(patch: &PatchData, f: &Form) -> Form {
    let n = patch.dim() as u16;
    let mut out = Form::zero();
    for (idx, e) in f.iter() {
        assert_eq!(idx.len(), 2);
        if idx[0] >= n && idx[1] >= n {
            out.add_comp_signed(idx, e.clone());
        }
    }
    out
}

/// The untwisted local volume form `dz_1 ∧ ⋯ ∧ dz_n`.
fn omega_naught(patch: &PatchData) -> Form {
    let mut out = Form::scalar(ScalarExpr::one());
    for j in 0..patch.dim() {
        out = out.wedge(&Form::dx(patch.ctx.holo(j)));
    }
    out
}

/// Covariant derivative of the bundle-valued scalar `ΛF`:
/// `(d^A ΛF)^a = d(ΛF)^a + Σ_{b,c} f_{bc}^a A^b (ΛF)^c`.
fn gauge_derivative(patch: &PatchData, lf: &[ScalarExpr]) -> Vec<Form> {
    let m = patch.bundle_rank();
    let mut out = Vec::with_capacity(m);
    for a in 0..m {
        let mut d = Form::scalar(lf[a].clone()).d(&patch.ctx);
        if !patch.k_struct.is_empty() {
            for b in 0..m {
                for c in 0..m {
                    let coef = &patch.k_struct[b][c][a];
                    if coef.is_zero() || lf[c].is_zero() {
                        continue;
                    }
                    d = d.add(&patch.a_conn[b].scale(&coef.mul(&lf[c])));
                }
            }
        }
        out.push(d);
    }
    out
}

/// Evaluate the residuals of the chosen system.  `psi` is the coefficient
/// of the holomorphic volume form against `dz_1 ∧ ⋯ ∧ dz_n`; `None` means
/// the constant 1.
pub fn system_residuals(
    patch: &PatchData,
    kind: SystemKind,
    psi: Option<&ScalarExpr>,
) -> HgResult<GeoReport> {
    let ctx = &patch.ctx;
    let n = patch.dim();
    let m = patch.bundle_rank();
    let omega = hermitian_form(patch);
    let theta = if n >= 2 { lee_form_raw(patch) } else { Form::zero() };
    let curv = patch.curvature();
    let lf = lambda_f(patch)?;
    let lf_norm = lambda_f_norm(patch)?;
    let mut entries: Vec<(String, Form)> = Vec::new();

    // Shared with both systems: the instanton conditions on the curvature.
    for a in 0..m {
        entries.push((
            format!("curvature (0,2) part, generator {}", a + 1),
            part02(patch, &curv[a]),
        ));
    }

    match kind {
        SystemKind::TwistedHolomorphic => {
            let om_n1 = omega_power(patch, n - 1);
            for a in 0..m {
                entries.push((
                    format!("curvature primitivity, generator {}", a + 1),
                    curv[a].wedge(&om_n1),
                ));
            }
            // (dψ − θψ) ∧ Ω₀ for Ψ = ψ Ω₀.
            let one = ScalarExpr::one();
            let psi = psi.unwrap_or(&one);
            let dpsi = Form::scalar(psi.clone()).d(ctx);
            entries.push((
                "holomorphic volume".into(),
                dpsi.sub(&theta.scale(psi)).wedge(&omega_naught(patch)),
            ));
            entries.push(("closed Lee form".into(), theta.d(ctx)));
            entries.push((
                "anomaly".into(),
                omega.dc(ctx).d(ctx).add(&patch.f_wedge_f()),
            ));
        }
        SystemKind::CoupledHym => {
            // ΛF central in the bundle Lie algebra.
            if !patch.k_struct.is_empty() {
                for b in 0..m {
                    for a in 0..m {
                        let mut acc = ScalarExpr::zero();
                        for c in 0..m {
                            acc = acc.add(&patch.k_struct[c][b][a].mul(&lf[c]));
                        }
                        entries.push((
                            format!("mean curvature central, bracket slot {} generator {}", b + 1, a + 1),
                            Form::scalar(acc),
                        ));
                    }
                }
            }
            for (a, d) in gauge_derivative(patch, &lf).into_iter().enumerate() {
                entries.push((format!("mean curvature parallel, generator {}", a + 1), d));
            }
            // ρ_B + ⟨ΛF, F⟩ = 0.
            let mut coupling = Form::zero();
            for a in 0..m {
                for b in 0..m {
                    if patch.k_pairing[a][b].is_zero() || lf[a].is_zero() {
                        continue;
                    }
                    coupling = coupling.add(&curv[b].scale(&patch.k_pairing[a][b].mul(&lf[a])));
                }
            }
            entries.push((
                "Ricci coupling".into(),
                bismut_ricci(patch).scale(&ScalarExpr::i()).add(&coupling),
            ));
            entries.push((
                "anomaly".into(),
                omega.dc(ctx).d(ctx).add(&patch.f_wedge_f()),
            ));
        }
    }
    Ok(GeoReport {
        entries,
        lambda_f: lf,
        lambda_f_norm: lf_norm,
    })
}
