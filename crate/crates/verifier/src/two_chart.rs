//! Comparison of the current built from two different frame pairs of the
//! same backend: the quadratic terms differ by the trace of the
//! logarithmic derivative of the transition matrix.

use crate::checks::state_outcome;
use crate::render::render_scalar;
use crate::report::{Outcome, Report};
use generators::FrameSet;
use scalar_ring::ScalarExpr;
use va_core::{Engine, State, VaResult};

/// Check the frame-change behaviour of the quadratic current term between
/// the frames `e` and `f` of the same backend.  When the determinant of
/// the transition matrix and its inverse are supplied, the trace of the
/// logarithmic derivative is additionally matched against it.
pub fn check_two_chart(
    eng: &Engine,
    fr_e: &FrameSet,
    fr_f: &FrameSet,
    det: Option<(&ScalarExpr, &ScalarExpr)>,
) -> Report {
    let b = eng.backend();
    let n = fr_e.n;
    // f_j = Σ_k A^k_j e_k  and  f^j = Σ_k B^j_k e^k, recovered by pairing
    // against the dual frames.
    let a_mat: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| b.pairing(&fr_f.e_dn[j], &fr_e.e_up[k]))
                .collect()
        })
        .collect();
    let b_mat: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| b.pairing(&fr_f.e_up[j], &fr_e.e_dn[k]))
                .collect()
        })
        .collect();
    let mut report = Report::new();
    report.record("transition matrices are inverse", || {
        for i in 0..n {
            for j in 0..n {
                let mut acc = ScalarExpr::zero();
                for k in 0..n {
                    acc = acc.add(&b_mat[j][k].mul(&a_mat[i][k]));
                }
                if i == j {
                    acc = acc.sub(&ScalarExpr::one());
                }
                if !acc.is_zero() {
                    return Outcome::Fail(format!(
                        "(B·A − id)[{j}][{i}] = {}",
                        render_scalar(b, &acc)
                    ));
                }
            }
        }
        Outcome::Pass
    });
    report.record("frame change of the quadratic current term", || {
        let run = || -> VaResult<State> {
            let mut res = State::zero();
            for j in 0..n {
                res = res
                    .add(&eng.nop(
                        &eng.embed_section(&fr_f.e_up[j]),
                        &eng.embed_section(&fr_f.e_dn[j]),
                    )?)
                    .sub(&eng.nop(
                        &eng.embed_section(&fr_e.e_up[j]),
                        &eng.embed_section(&fr_e.e_dn[j]),
                    )?);
                for k in 0..n {
                    if b_mat[j][k].is_zero() || a_mat[j][k].is_constant() {
                        continue;
                    }
                    res = res.sub(&eng.nop(
                        &eng.embed_scalar(&b_mat[j][k]),
                        &eng.t_deriv(&eng.embed_scalar(&a_mat[j][k]))?,
                    )?);
                }
            }
            Ok(res)
        };
        match run() {
            Ok(res) => state_outcome(eng, &res),
            Err(e) => Outcome::Fail(format!("engine error: {e}")),
        }
    });
    report.record("trace of the logarithmic derivative", || {
        let Some((d, dinv)) = det else {
            return Outcome::Skip("transition determinant not supplied".into());
        };
        let run = || -> VaResult<State> {
            let mut res = State::zero();
            for j in 0..n {
                for k in 0..n {
                    if b_mat[j][k].is_zero() || a_mat[j][k].is_constant() {
                        continue;
                    }
                    res = res.add(&eng.nop(
                        &eng.embed_scalar(&b_mat[j][k]),
                        &eng.t_deriv(&eng.embed_scalar(&a_mat[j][k]))?,
                    )?);
                }
            }
            Ok(res.sub(&eng.nop(
                &eng.embed_scalar(dinv),
                &eng.t_deriv(&eng.embed_scalar(d))?,
            )?))
        };
        match run() {
            Ok(res) => state_outcome(eng, &res),
            Err(e) => Outcome::Fail(format!("engine error: {e}")),
        }
    });
    report
}
