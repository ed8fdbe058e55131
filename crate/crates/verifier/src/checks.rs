//! Structural checks: frame normalization, involutivity of the splitting,
//! the divergence equation, and the superconformal bracket relations.

use crate::render::{render_lpoly, render_section, render_state};
use crate::report::{Outcome, Report};
use algebroid::SectionExpr;
use generators::{minus_part, project_ell, FrameSet};
use hermitian_geometry::mu_direct;
use scalar_ring::ScalarExpr;
use va_core::{Engine, LambdaPoly, State, VaResult};

/// Frame normalization: `⟨e^j, e_k⟩ = δ_jk` with both families isotropic,
/// plus the stronger commutation condition `[e_j, e_k] = [e^j, e^k] = 0`
/// satisfied by special frames (reported separately, since generic frames
/// need not satisfy it).
pub fn check_frames(fr: &FrameSet) -> Report {
    let b = &fr.backend;
    let mut report = Report::new();
    report.record("frame pairing duality", || {
        for j in 0..fr.n {
            for k in 0..fr.n {
                let mut p = b.pairing(&fr.e_up[j], &fr.e_dn[k]);
                if j == k {
                    p = p.sub(&ScalarExpr::one());
                }
                if !p.is_zero() {
                    return Outcome::Fail(format!(
                        "⟨e^{j}, e_{k}⟩ − δ = {}",
                        crate::render::render_scalar(b, &p)
                    ));
                }
            }
        }
        Outcome::Pass
    });
    report.record("frame isotropy", || {
        for j in 0..fr.n {
            for k in 0..fr.n {
                let up = b.pairing(&fr.e_up[j], &fr.e_up[k]);
                let dn = b.pairing(&fr.e_dn[j], &fr.e_dn[k]);
                if !up.is_zero() || !dn.is_zero() {
                    return Outcome::Fail(format!(
                        "⟨e^{j}, e^{k}⟩ = {}, ⟨e_{j}, e_{k}⟩ = {}",
                        crate::render::render_scalar(b, &up),
                        crate::render::render_scalar(b, &dn),
                    ));
                }
            }
        }
        Outcome::Pass
    });
    report.record("special frame commutation", || {
        for j in 0..fr.n {
            for k in 0..fr.n {
                let up = b.dorfman(&fr.e_up[j], &fr.e_up[k]);
                let dn = b.dorfman(&fr.e_dn[j], &fr.e_dn[k]);
                if !up.is_zero() {
                    return Outcome::Fail(format!("[e^{j}, e^{k}] = {}", render_section(b, &up)));
                }
                if !dn.is_zero() {
                    return Outcome::Fail(format!("[e_{j}, e_{k}] = {}", render_section(b, &dn)));
                }
            }
        }
        Outcome::Pass
    });
    report
}

/// Involutivity of the two halves of the splitting: every bracket of two
/// frame sections of the same half lies back in that half.
pub fn check_fterm(fr: &FrameSet) -> Report {
    let b = &fr.backend;
    let mut report = Report::new();
    report.record("holomorphic involutivity", || {
        for j in 0..fr.n {
            for k in 0..fr.n {
                let x = b.dorfman(&fr.e_up[j], &fr.e_up[k]);
                let res = x.sub(&project_ell(fr, &x));
                if !res.is_zero() {
                    return Outcome::Fail(format!(
                        "[e^{j}, e^{k}] off-part = {}",
                        render_section(b, &res)
                    ));
                }
            }
        }
        Outcome::Pass
    });
    report.record("antiholomorphic involutivity", || {
        for j in 0..fr.n {
            for k in 0..fr.n {
                let x = b.dorfman(&fr.e_dn[j], &fr.e_dn[k]);
                let res = x.sub(&generators::project_ellbar(fr, &x));
                if !res.is_zero() {
                    return Outcome::Fail(format!(
                        "[e_{j}, e_{k}] off-part = {}",
                        render_section(b, &res)
                    ));
                }
            }
        }
        Outcome::Pass
    });
    report
}

/// Strength of the divergence equation requested from [`check_dterm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtermMode {
    /// Only the transverse component: `½Σ[e_j, e^j] + ε` has no part
    /// outside the splitting.
    Weak,
    /// The full equation `½Σ[e_j, e^j] = ε_ℓ − ε`.
    Strong,
}

/// The divergence equation relating the frame-trace bracket to the
/// dilaton section.
pub fn check_dterm(fr: &FrameSet, epsilon: &SectionExpr, mode: DtermMode) -> Report {
    let b = &fr.backend;
    let mu = mu_direct(fr);
    let mut report = Report::new();
    match mode {
        DtermMode::Weak => report.record("weak divergence equation", || {
            let res = minus_part(fr, &mu.add(epsilon));
            Outcome::from_residual(res.is_zero(), || render_section(b, &res))
        }),
        DtermMode::Strong => report.record("divergence equation", || {
            let res = mu.sub(&project_ell(fr, epsilon).sub(epsilon));
            Outcome::from_residual(res.is_zero(), || render_section(b, &res))
        }),
    }
    report
}

/// Level of the superconformal check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScLevel {
    /// Neveu–Schwarz vector only: the `[H_Λ H]` relation.
    N1,
    /// Current and Neveu–Schwarz vector: both `J`-relations suffice; the
    /// `[H_Λ H]` relation is still computed as a consistency check.
    N2,
}

fn weight_one_action(eng: &Engine, j: &State) -> VaResult<LambdaPoly> {
    // (2λ + 2T + χS)J
    let mut p = LambdaPoly::zero();
    p.add_term((0, false), eng.t_deriv(j)?.scale_int(2));
    p.add_term((0, true), eng.s_deriv(j)?);
    p.add_term((1, false), j.scale_int(2));
    Ok(p)
}

fn ns_action(eng: &Engine, h: &State, c: &ScalarExpr) -> VaResult<LambdaPoly> {
    // (2T + χS + 3λ)H + (χλ²/3)c
    let mut p = LambdaPoly::zero();
    p.add_term((0, false), eng.t_deriv(h)?.scale_int(2));
    p.add_term((0, true), eng.s_deriv(h)?);
    p.add_term((1, false), h.scale_int(3));
    p.add_term((2, true), State::scalar(c.scale_ratio(1, 3)));
    Ok(p)
}

/// The two (three at level `N1`) defining bracket relations of the
/// superconformal structure generated by a current `J`, a Neveu–Schwarz
/// vector `H` and a constant central charge `c`.
pub fn check_superconformal(
    eng: &Engine,
    j: &State,
    h: &State,
    c: &ScalarExpr,
    level: ScLevel,
) -> Report {
    let b = eng.backend();
    let mut report = Report::new();
    let constant = c.is_constant();
    report.record("central charge constant", || {
        Outcome::from_residual(constant, || crate::render::render_scalar(b, c))
    });
    if !constant {
        for name in [
            "current-current bracket",
            "current primary bracket",
            "Neveu-Schwarz bracket",
        ] {
            report.record(name, || Outcome::Skip("central charge not constant".into()));
        }
        return report;
    }
    report.record("current-current bracket", || {
        // [J_Λ J] + (H + (λχ/3)c) = 0
        let mut rhs = LambdaPoly::constant(h.clone());
        rhs.add_term((1, true), State::scalar(c.scale_ratio(1, 3)));
        let res = match eng.lambda_bracket(j, j) {
            Ok(p) => p.add(&rhs),
            Err(e) => return Outcome::Fail(format!("engine error: {e}")),
        };
        Outcome::from_residual(res.is_zero(), || render_lpoly(b, &res))
    });
    report.record("current primary bracket", || {
        let res = match eng
            .lambda_bracket(h, j)
            .and_then(|p| Ok(p.sub(&weight_one_action(eng, j)?)))
        {
            Ok(r) => r,
            Err(e) => return Outcome::Fail(format!("engine error: {e}")),
        };
        Outcome::from_residual(res.is_zero(), || render_lpoly(b, &res))
    });
    let ns_name = match level {
        ScLevel::N1 => "Neveu-Schwarz bracket",
        ScLevel::N2 => "Neveu-Schwarz bracket (consistency)",
    };
    report.record(ns_name, || {
        let res = match eng
            .lambda_bracket(h, h)
            .and_then(|p| Ok(p.sub(&ns_action(eng, h, c)?)))
        {
            Ok(r) => r,
            Err(e) => return Outcome::Fail(format!("engine error: {e}")),
        };
        Outcome::from_residual(res.is_zero(), || render_lpoly(b, &res))
    });
    report
}

/// Rendered residual of a state, for callers assembling ad-hoc entries.
pub fn state_outcome(eng: &Engine, res: &State) -> Outcome {
    Outcome::from_residual(res.is_zero(), || render_state(eng.backend(), res))
}

/// Rendered residual of a bracket polynomial.
pub fn lpoly_outcome(eng: &Engine, res: &LambdaPoly) -> Outcome {
    Outcome::from_residual(res.is_zero(), || render_lpoly(eng.backend(), res))
}
