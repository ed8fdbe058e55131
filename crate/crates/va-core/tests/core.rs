//! Structural identities of the vertex algebra calculus, checked exactly
//! on flat backends, plus closed-form brackets for the standard conformal
//! and superconformal vectors of the rank-one free system.

use algebroid::{Backend, PatchData, SecId, SectionExpr, Tag};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scalar_ring::{GaussRat, RingContext, ScalarExpr};
use va_core::{Engine, LambdaPoly, State};

/// Flat structure backend over a point: `n` dual pairs of odd generators
/// with all brackets zero.
fn flat_point(n: usize) -> Backend {
    let ctx = RingContext::new_point();
    let mut names = Vec::new();
    let mut tags = Vec::new();
    for j in 1..=n {
        names.push(format!("up{j}"));
        tags.push(Tag::Ell);
    }
    for j in 1..=n {
        names.push(format!("dn{j}"));
        tags.push(Tag::EllBar);
    }
    let nb = 2 * n;
    let mut pairing = vec![vec![ScalarExpr::zero(); nb]; nb];
    for j in 0..n {
        pairing[j][n + j] = ScalarExpr::one();
        pairing[n + j][j] = ScalarExpr::one();
    }
    let bracket = vec![vec![SectionExpr::zero(); nb]; nb];
    Backend::build_struct(ctx, names, tags, pairing, bracket).unwrap()
}

/// Flat chart backend: the string algebroid of the flat metric on `Cⁿ`,
/// so that scalar coefficients and the anchor are exercised.
fn flat_chart(n: usize) -> Backend {
    let ctx = RingContext::new_complex(n);
    let mut g = vec![vec![ScalarExpr::zero(); n]; n];
    let mut ginv = vec![vec![ScalarExpr::zero(); n]; n];
    for j in 0..n {
        g[j][j] = ScalarExpr::from_ratio(1, 2);
        ginv[j][j] = ScalarExpr::from_int(2);
    }
    Backend::build_string(PatchData::metric_only(ctx, g, ginv)).unwrap()
}

fn basis(i: usize) -> SectionExpr {
    SectionExpr::basis(SecId(i as u16))
}

/// Random homogeneous state built from engine operations (so always
/// canonical): section leaves, scalar leaves, `S`, and products.
fn rand_state(eng: &Engine, rng: &mut ChaCha8Rng, depth: u32, scalars: &[ScalarExpr]) -> State {
    if depth == 0 {
        let n = eng.backend().n_sections();
        let pick: u32 = rng.gen_range(0..4);
        let mut s = if pick == 0 && !scalars.is_empty() {
            let f = &scalars[rng.gen_range(0..scalars.len())];
            let i = rng.gen_range(0..n);
            eng.nop(&eng.embed_scalar(f), &eng.basis_state(SecId(i as u16)))
                .unwrap()
        } else {
            let i = rng.gen_range(0..n);
            eng.basis_state(SecId(i as u16))
        };
        for _ in 0..rng.gen_range(0..3u32) {
            s = eng.s_deriv(&s).unwrap();
        }
        return s.scale_int(rng.gen_range(1..4i64));
    }
    match rng.gen_range(0..3u32) {
        0 => rand_state(eng, rng, 0, scalars),
        1 => {
            let a = rand_state(eng, rng, depth - 1, scalars);
            eng.s_deriv(&a).unwrap()
        }
        _ => {
            let a = rand_state(eng, rng, depth - 1, scalars);
            let b = rand_state(eng, rng, 0, scalars);
            eng.nop(&a, &b).unwrap()
        }
    }
}

fn s_on_poly(eng: &Engine, p: &LambdaPoly) -> LambdaPoly {
    // S applied to Σ λ^m χ^ε v: S anticommutes with χ.
    let mut out = LambdaPoly::zero();
    for ((m, chi), v) in p.iter() {
        let sv = eng.s_deriv(v).unwrap();
        out.add_term((m, chi), if chi { sv.neg() } else { sv });
    }
    out
}

fn chart_scalars(b: &Backend) -> Vec<ScalarExpr> {
    let ctx = b.ctx();
    vec![
        ScalarExpr::coord(ctx.holo(0)),
        ScalarExpr::coord(ctx.anti(0)),
    ]
}

// ---------------------------------------------------------------------------

#[test]
fn base_bracket_of_dual_pair() {
    let b = flat_point(1);
    let eng = Engine::with_default_budget(&b);
    let up = eng.embed_section(&basis(0));
    let dn = eng.embed_section(&basis(1));
    let p = eng.lambda_bracket(&up, &dn).unwrap();
    assert_eq!(p.coeff(0, true), State::vacuum().scale_int(2));
    assert_eq!(p.coeff(0, false), State::zero());
    let q = eng.lambda_bracket(&dn, &up).unwrap();
    assert_eq!(q, p);
    assert!(eng.lambda_bracket(&up, &up).unwrap().is_zero());
}

#[test]
fn s_squared_is_t() {
    for (b, scalars) in backends() {
        let eng = Engine::with_default_budget(&b);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = rand_state(&eng, &mut rng, 2, &scalars);
            let ss = eng.s_deriv(&eng.s_deriv(&a).unwrap()).unwrap();
            assert_eq!(ss, eng.t_deriv(&a).unwrap());
        }
    }
}

fn backends() -> Vec<(Backend, Vec<ScalarExpr>)> {
    let chart = flat_chart(1);
    let scalars = chart_scalars(&chart);
    vec![
        (flat_point(2), vec![]),
        (chart, scalars),
    ]
}

#[test]
fn quasicommutativity() {
    for (b, scalars) in backends() {
        let eng = Engine::with_default_budget(&b);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let a = rand_state(&eng, &mut rng, 1, &scalars);
            let c = rand_state(&eng, &mut rng, 1, &scalars);
            let (pa, pc) = (a.parity(), c.parity());
            let sign = if pa == Some(true) && pc == Some(true) {
                -1
            } else {
                1
            };
            let lhs = eng
                .nop(&a, &c)
                .unwrap()
                .sub(&eng.nop(&c, &a).unwrap().scale_int(sign));
            let rhs = eng
                .int_minus_nabla(&eng.lambda_bracket(&a, &c).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn skew_symmetry() {
    for (b, scalars) in backends() {
        let eng = Engine::with_default_budget(&b);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let a = rand_state(&eng, &mut rng, 1, &scalars);
            let c = rand_state(&eng, &mut rng, 1, &scalars);
            let (pa, pc) = (a.parity(), c.parity());
            let sign = if pa == Some(true) && pc == Some(true) {
                -1
            } else {
                1
            };
            let lhs = eng.lambda_bracket(&a, &c).unwrap();
            let rhs = eng
                .shift_minus(&eng.lambda_bracket(&c, &a).unwrap())
                .unwrap()
                .scale_int(sign);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn sesquilinearity_both_slots() {
    for (b, scalars) in backends() {
        let eng = Engine::with_default_budget(&b);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..25 {
            let a = rand_state(&eng, &mut rng, 1, &scalars);
            let c = rand_state(&eng, &mut rng, 1, &scalars);
            let p = eng.lambda_bracket(&a, &c).unwrap();
            // first slot: [Sa_Λ c] = χ[a_Λ c]
            let lhs1 = eng
                .lambda_bracket(&eng.s_deriv(&a).unwrap(), &c)
                .unwrap();
            assert_eq!(lhs1, p.mul_chi());
            // second slot: [a_Λ Sc] = −(−1)^{|a|}(S + (−1)^ε χ)[a_Λ c],
            // with S anticommuting past χ and the χ-multiplication taken
            // with a sign on the χ-part of the polynomial.
            let lhs2 = eng
                .lambda_bracket(&a, &eng.s_deriv(&c).unwrap())
                .unwrap();
            let sign = if a.parity() == Some(true) { 1 } else { -1 };
            let mut chi_part = LambdaPoly::zero();
            for ((m, chi), v) in p.iter() {
                if chi {
                    chi_part.add_term((m + 1, false), v.clone());
                } else {
                    chi_part.add_term((m, true), v.clone());
                }
            }
            let rhs2 = s_on_poly(&eng, &p).add(&chi_part).scale_int(sign);
            assert_eq!(lhs2, rhs2);
        }
    }
}

#[test]
fn jacobi_identity() {
    for (b, scalars) in backends() {
        let eng = Engine::with_default_budget(&b);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..15 {
            let a = rand_state(&eng, &mut rng, 1, &scalars);
            let c = rand_state(&eng, &mut rng, 1, &scalars);
            let d = rand_state(&eng, &mut rng, 1, &scalars);
            let r = eng.jacobi_residual(&a, &c, &d).unwrap();
            assert!(r.is_zero(), "Jacobi residual nonzero");
        }
    }
}

#[test]
fn wick_formula_consistency() {
    // [a_Λ :w r:] computed on the normalized product must agree with the
    // Wick expansion assembled from the three separate pieces.
    for (b, scalars) in backends() {
        let eng = Engine::with_default_budget(&b);
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..15 {
            let a = rand_state(&eng, &mut rng, 1, &scalars);
            let w = rand_state(&eng, &mut rng, 0, &scalars);
            let r = rand_state(&eng, &mut rng, 0, &scalars);
            if a.is_zero() || w.is_zero() || r.is_zero() {
                continue;
            }
            let (pa, pw) = (a.parity().unwrap(), w.parity().unwrap());
            let prod = eng.nop(&w, &r).unwrap();
            let lhs = eng.lambda_bracket(&a, &prod).unwrap();

            let p_aw = eng.lambda_bracket(&a, &w).unwrap();
            let p_ar = eng.lambda_bracket(&a, &r).unwrap();
            let mut rhs = LambdaPoly::zero();
            for ((m, chi), v) in p_aw.iter() {
                rhs.add_term((m, chi), eng.nop(v, &r).unwrap());
            }
            let koszul = !pa && pw;
            for ((m, chi), v) in p_ar.iter() {
                let mut sign = if koszul { -1 } else { 1 };
                if chi && pw {
                    sign = -sign;
                }
                rhs.add_term((m, chi), eng.nop(&w, v).unwrap().scale_int(sign));
            }
            for ((m, chi), v) in p_aw.iter() {
                let q = eng.lambda_bracket(v, &r).unwrap();
                for ((p, eta), x) in q.iter() {
                    if !eta {
                        continue;
                    }
                    rhs.add_term((m + p + 1, chi), x.scale_ratio(1, (p + 1) as i64));
                }
            }
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn budget_exhaustion_reported() {
    let b = flat_point(2);
    let eng = Engine::new(&b, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut last = Ok(State::vacuum());
    for _ in 0..5 {
        let a = eng.basis_state(SecId(rng.gen_range(0..4u16)));
        last = last.and_then(|s| eng.nop(&a, &s));
    }
    assert!(matches!(last, Err(va_core::VaError::BudgetExceeded)));
}

// -- closed-form brackets of the rank-one free system -----------------------

fn free_h_j(eng: &Engine) -> (State, State) {
    // H = ½(:dn S up: + :up S dn:), J = (i/2):up dn:
    let up = eng.basis_state(SecId(0));
    let dn = eng.basis_state(SecId(1));
    let sup = eng.s_deriv(&up).unwrap();
    let sdn = eng.s_deriv(&dn).unwrap();
    let h = eng
        .nop(&dn, &sup)
        .unwrap()
        .add(&eng.nop(&up, &sdn).unwrap())
        .scale_ratio(1, 2);
    let j = eng
        .nop(&up, &dn)
        .unwrap()
        .scale_gauss(&(&GaussRat::i() * &GaussRat::from_ratio(1, 2)));
    (h, j)
}

#[test]
fn current_bracket_recovers_conformal_vector() {
    let b = flat_point(1);
    let eng = Engine::with_default_budget(&b);
    let (h, j) = free_h_j(&eng);
    // [J_Λ J] = −(H + λχ·c/3) with c = 3.
    let p = eng.lambda_bracket(&j, &j).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), h.neg());
    expected.add_term((1, true), State::vacuum().neg());
    assert_eq!(p, expected);
}

#[test]
fn superconformal_bracket_with_central_charge_three() {
    let b = flat_point(1);
    let eng = Engine::with_default_budget(&b);
    let (h, _) = free_h_j(&eng);
    // [H_Λ H] = (2T + χS + 3λ)H + λ²χ·c/3 with c = 3.
    let p = eng.lambda_bracket(&h, &h).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), eng.t_deriv(&h).unwrap().scale_int(2));
    expected.add_term((0, true), eng.s_deriv(&h).unwrap());
    expected.add_term((1, false), h.scale_int(3));
    expected.add_term((2, true), State::vacuum());
    assert_eq!(p, expected);
}

#[test]
fn current_is_primary_of_weight_one() {
    let b = flat_point(1);
    let eng = Engine::with_default_budget(&b);
    let (h, j) = free_h_j(&eng);
    // [H_Λ J] = (2T + 2λ + χS)J  (superconformal weight 1, no central term).
    let p = eng.lambda_bracket(&h, &j).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), eng.t_deriv(&j).unwrap().scale_int(2));
    expected.add_term((0, true), eng.s_deriv(&j).unwrap());
    expected.add_term((1, false), j.scale_int(2));
    assert_eq!(p, expected);
}
