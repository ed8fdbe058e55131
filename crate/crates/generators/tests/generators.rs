//! Exact oracles for the supersymmetry generator builders: structural
//! projections, closed-form values on the shipped charts, and the
//! superconformal bracket relations evaluated through the engine.

use generators::*;
use hermitian_geometry::{
    c2_soliton, coupled_epsilon, coupled_flat, default_charges, diag_uv, dterm_residual, flat,
    hyperbolic_cylinder, iwasawa, lambda_f_norm, torsion_sigma,
};
use scalar_ring::ScalarExpr;
use va_core::{Engine, LambdaPoly, State};

#[test]
fn frame_projections_resolve_components() {
    let fx = c2_soliton();
    let fr = build_frames(&fx.patch).unwrap();
    for j in 0..fr.n {
        assert!(project_ell(&fr, &fr.e_up[j]).sub(&fr.e_up[j]).is_zero());
        assert!(project_ellbar(&fr, &fr.e_up[j]).is_zero());
        assert!(project_ellbar(&fr, &fr.e_dn[j]).sub(&fr.e_dn[j]).is_zero());
        assert!(project_ell(&fr, &fr.e_dn[j]).is_zero());
        assert!(minus_part(&fr, &fr.e_up[j]).is_zero());
        let refl = i_plus(&fr, &fr.e_up[j]);
        assert!(refl.add(&fr.e_up[j]).is_zero());
    }
    // A mixed combination decomposes accordingly.
    let z1 = ScalarExpr::coord(fx.patch.ctx.holo(0));
    let mix = fr.e_up[0].scale(&z1).add(&fr.e_dn[1]);
    assert!(project_ell(&fr, &mix).sub(&fr.e_up[0].scale(&z1)).is_zero());
    assert!(project_ellbar(&fr, &mix).sub(&fr.e_dn[1]).is_zero());
}

#[test]
fn w_vanishes_on_flat_chart() {
    let fr = build_frames(&flat(2).patch).unwrap();
    assert!(w_section(&fr).is_zero());
}

#[test]
fn w_vanishes_on_nilmanifold_chart() {
    // The Lee form vanishes, so the moment map equation with zero dilaton
    // forces the reflected plus-part of the bracket sum to cancel.
    let fx = iwasawa(default_charges(), 1, 1);
    let fr = build_frames(&fx.patch).unwrap();
    assert!(dterm_residual(&fr, &fx.patch, &algebroid::Form::zero()).is_zero());
    assert!(w_section(&fr).is_zero());
}

#[test]
fn w_does_not_vanish_on_conformal_chart() {
    let fr = build_frames(&c2_soliton().patch).unwrap();
    assert!(!w_section(&fr).is_zero());
}

#[test]
fn current_modes_agree_when_dilaton_is_lee_form() {
    for patch in [flat(2).patch, c2_soliton().patch] {
        let fr = build_frames(&patch).unwrap();
        let eng = Engine::with_default_budget(&fr.backend);
        let general = eng.eval(&build_j(&fr, JMode::General).unwrap()).unwrap();
        let global = eng.eval(&build_j(&fr, JMode::Global).unwrap()).unwrap();
        assert!(eng.equals(&general, &global));
    }
}

#[test]
fn central_charge_of_flat_charts() {
    let fr2 = build_frames(&flat(2).patch).unwrap();
    assert!(central_charge(&fr2).sub(&ScalarExpr::from_int(6)).is_zero());
    let fr3 = build_frames(&flat(3).patch).unwrap();
    assert!(central_charge(&fr3).sub(&ScalarExpr::from_int(9)).is_zero());
}

#[test]
fn central_charge_of_nilmanifold_chart_is_nine() {
    let fx = iwasawa(default_charges(), 1, 1);
    let fr = build_frames(&fx.patch).unwrap();
    assert!(central_charge(&fr).sub(&ScalarExpr::from_int(9)).is_zero());
}

#[test]
fn central_charge_of_conformal_chart_is_six() {
    // The dilaton is a one-form section, hence isotropic, and commutes.
    let fr = build_frames(&c2_soliton().patch).unwrap();
    assert!(central_charge(&fr).sub(&ScalarExpr::from_int(6)).is_zero());
}

#[test]
fn central_charge_of_coupled_chart_uses_the_general_formula() {
    // This chart violates the Ricci coupling, so the dilaton does not
    // commute: the bracket sum contributes −72β and the norm −36β, giving
    // c = 3(2 − 2(−72β + 36β)) = 6 + 216β.
    let fx = coupled_flat();
    let mut fr = build_frames(&fx.patch).unwrap();
    fr.epsilon = coupled_epsilon(&fr.backend, &fx.patch, &ScalarExpr::one()).unwrap();
    let beta = ScalarExpr::constant(fx.patch.ctx.const_id("beta").unwrap());
    let expected = ScalarExpr::from_int(6).add(&beta.scale_int(216));
    assert!(central_charge(&fr).sub(&expected).is_zero());
}

#[test]
fn central_charge_of_hyperbolic_chart_tracks_curvature_trace() {
    // On a genuine coupled solution the dilaton commutes and the central
    // charge reduces to 3n − (3/2)|Λ_ω F|² = 6 − 6 = 0.
    let fx = hyperbolic_cylinder();
    let mut fr = build_frames(&fx.patch).unwrap();
    fr.epsilon = coupled_epsilon(&fr.backend, &fx.patch, &ScalarExpr::one()).unwrap();
    for j in 0..fr.n {
        assert!(fr.backend.dorfman(&fr.epsilon, &fr.e_up[j]).is_zero());
        assert!(fr.backend.dorfman(&fr.epsilon, &fr.e_dn[j]).is_zero());
    }
    let expected = ScalarExpr::from_int(6)
        .sub(&lambda_f_norm(&fx.patch).unwrap().scale_ratio(3, 2));
    assert!(expected.is_zero());
    assert!(central_charge(&fr).is_zero());
}

#[test]
fn obstruction_functions_vanish_on_flat_chart() {
    let fr = build_frames(&flat(2).patch).unwrap();
    let rf = build_r_f(&fr);
    assert!(rf.r.is_zero());
    for i in 0..2 {
        for j in 0..2 {
            assert!(rf.f_upper[i][j].is_zero());
            assert!(rf.f_lower[i][j].is_zero());
            assert!(rf.rewrite_residual_upper[i][j].is_zero());
            assert!(rf.rewrite_residual_lower[i][j].is_zero());
        }
    }
}

#[test]
fn obstruction_matrices_vanish_on_solution_charts() {
    for fx in [c2_soliton(), iwasawa(default_charges(), 1, 1)] {
        let fr = build_frames(&fx.patch).unwrap();
        let rf = build_r_f(&fr);
        for i in 0..fr.n {
            for j in 0..fr.n {
                assert!(rf.f_upper[i][j].is_zero(), "{}: F^{{{i}{j}}}", fx.name);
                assert!(rf.f_lower[i][j].is_zero(), "{}: F_{{{i}{j}}}", fx.name);
                assert!(
                    rf.rewrite_residual_upper[i][j].is_zero(),
                    "{}: rewrite residual",
                    fx.name
                );
                assert!(
                    rf.rewrite_residual_lower[i][j].is_zero(),
                    "{}: rewrite residual",
                    fx.name
                );
            }
        }
    }
}

#[test]
fn obstruction_function_specializes_under_moment_map_equation() {
    for fx in [flat(2), c2_soliton()] {
        let fr = build_frames(&fx.patch).unwrap();
        let rf = build_r_f(&fr);
        assert!(rf.r.sub(&r_specialized(&fr)).is_zero(), "{}", fx.name);
    }
}

#[test]
fn obstruction_matrix_matches_torsion_bivector_on_diagonal_chart() {
    let fx = diag_uv();
    let fr = build_frames(&fx.patch).unwrap();
    let rf = build_r_f(&fr);
    let sigma = torsion_sigma(&fx.patch);
    for i in 0..2 {
        for j in 0..2 {
            // Full matrix: the trace part cancels the derivative part on
            // this chart, so the obstruction itself vanishes.
            assert!(rf.f_upper[i][j].is_zero(), "F^{{{i}{j}}}");
            // The derivative part alone reproduces the torsion bivector,
            // up to the factor 2 from the pairing normalisation
            // ⟨𝒟f, a⟩ = ½ π(a)f.
            let expected = if i < j {
                sigma.comp(&[i as u16, j as u16])
            } else if i > j {
                sigma.comp(&[j as u16, i as u16]).neg()
            } else {
                ScalarExpr::zero()
            };
            assert!(
                rf.f_upper_special[i][j].scale_int(2).sub(&expected).is_zero(),
                "special F^{{{i}{j}}}"
            );
        }
    }
}

#[test]
fn hamiltonian_modes_agree_on_conformal_chart() {
    // The dilaton is a closed one-form, so it commutes and the S-terms of
    // the general form vanish; the moment map equation then identifies
    // the reduced tail with the exact one.
    let fx = c2_soliton();
    let fr = build_frames(&fx.patch).unwrap();
    for j in 0..fr.n {
        assert!(fr.backend.dorfman(&fr.epsilon, &fr.e_up[j]).is_zero());
        assert!(fr.backend.dorfman(&fr.epsilon, &fr.e_dn[j]).is_zero());
    }
    // Section-level tail identity: ½w − I₊ε₊ = ε_ℓ.
    let tail = w_section(&fr)
        .scale(&ScalarExpr::from_ratio(1, 2))
        .sub(&i_plus(&fr, &fr.epsilon));
    assert!(tail.sub(&project_ell(&fr, &fr.epsilon)).is_zero());

    let eng = Engine::with_default_budget(&fr.backend);
    let general = eng.eval(&build_h(&fr, HMode::General)).unwrap();
    let reduced = eng.eval(&build_h(&fr, HMode::Reduced)).unwrap();
    let exact = eng.eval(&build_h(&fr, HMode::Exact)).unwrap();
    assert!(eng.equals(&general, &reduced));
    assert!(eng.equals(&reduced, &exact));
}

#[test]
fn flat_bracket_recovers_superconformal_structure() {
    let fr = build_frames(&flat(2).patch).unwrap();
    let eng = Engine::with_default_budget(&fr.backend);
    let j = eng.eval(&build_j(&fr, JMode::General).unwrap()).unwrap();
    let h = eng.eval(&build_h(&fr, HMode::General)).unwrap();

    // [J_Λ J] = −(H + 2λχ), central charge 6.
    let p = eng.lambda_bracket(&j, &j).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), h.neg());
    expected.add_term((1, true), State::vacuum().scale_int(-2));
    assert_eq!(p, expected);

    // [H_Λ J] = (2λ + 2T + χS)J.
    let p = eng.lambda_bracket(&h, &j).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), eng.t_deriv(&j).unwrap().scale_int(2));
    expected.add_term((0, true), eng.s_deriv(&j).unwrap());
    expected.add_term((1, false), j.scale_int(2));
    assert_eq!(p, expected);

    // [H_Λ H] = (2T + χS + 3λ)H + 2λ²χ.
    let p = eng.lambda_bracket(&h, &h).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), eng.t_deriv(&h).unwrap().scale_int(2));
    expected.add_term((0, true), eng.s_deriv(&h).unwrap());
    expected.add_term((1, false), h.scale_int(3));
    expected.add_term((2, true), State::vacuum().scale_int(2));
    assert_eq!(p, expected);
}

#[test]
fn conformal_chart_current_bracket_recovers_hamiltonian() {
    // The binding cross-check on a curved chart with flux: the current
    // bracket reproduces H and the central charge in one stroke.
    let fr = build_frames(&c2_soliton().patch).unwrap();
    let eng = Engine::with_default_budget(&fr.backend);
    let j = eng.eval(&build_j(&fr, JMode::General).unwrap()).unwrap();
    let h = eng.eval(&build_h(&fr, HMode::General)).unwrap();
    let p = eng.lambda_bracket(&j, &j).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), h.neg());
    expected.add_term((1, true), State::vacuum().scale_int(-2));
    assert_eq!(p, expected);
}

#[test]
fn conformal_chart_current_is_primary() {
    // [H_Λ J] = (2λ + 2T + χS)J: the residual correction proportional to
    // the scalar obstruction is a double time derivative, and it vanishes
    // on this chart because the obstruction matrices do.
    let fr = build_frames(&c2_soliton().patch).unwrap();
    let eng = Engine::with_default_budget(&fr.backend);
    let j = eng.eval(&build_j(&fr, JMode::General).unwrap()).unwrap();
    let h = eng.eval(&build_h(&fr, HMode::General)).unwrap();
    let p = eng.lambda_bracket(&h, &j).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), eng.t_deriv(&j).unwrap().scale_int(2));
    expected.add_term((0, true), eng.s_deriv(&j).unwrap());
    expected.add_term((1, false), j.scale_int(2));
    assert_eq!(p, expected);
}

#[test]
fn nilmanifold_current_bracket_recovers_hamiltonian() {
    let fx = iwasawa(default_charges(), 1, 1);
    let fr = build_frames(&fx.patch).unwrap();
    let eng = Engine::with_default_budget(&fr.backend);
    let j = eng.eval(&build_j(&fr, JMode::General).unwrap()).unwrap();
    let h = eng.eval(&build_h(&fr, HMode::General)).unwrap();
    let p = eng.lambda_bracket(&j, &j).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), h.neg());
    expected.add_term((1, true), State::vacuum().scale_int(-3));
    assert_eq!(p, expected);
}

#[test]
fn hyperbolic_chart_current_bracket_recovers_hamiltonian() {
    // Curved metric and bundle at once: the central charge vanishes, so
    // the λχ term is absent from the current bracket.
    let fx = hyperbolic_cylinder();
    let mut fr = build_frames(&fx.patch).unwrap();
    fr.epsilon = coupled_epsilon(&fr.backend, &fx.patch, &ScalarExpr::one()).unwrap();
    let eng = Engine::with_default_budget(&fr.backend);
    let j = eng.eval(&build_j(&fr, JMode::General).unwrap()).unwrap();
    let h = eng.eval(&build_h(&fr, HMode::General)).unwrap();
    let reduced = eng.eval(&build_h(&fr, HMode::Reduced)).unwrap();
    assert!(eng.equals(&h, &reduced));
    let p = eng.lambda_bracket(&j, &j).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), h.neg());
    assert_eq!(p, expected);
}

#[test]
fn swapped_frames_satisfy_the_same_relations() {
    let fr = swap_frames(build_frames(&flat(2).patch).unwrap());
    assert!(fr.defects().is_empty());
    let eng = Engine::with_default_budget(&fr.backend);
    let j = eng.eval(&build_j(&fr, JMode::General).unwrap()).unwrap();
    let h = eng.eval(&build_h(&fr, HMode::General)).unwrap();
    let p = eng.lambda_bracket(&j, &j).unwrap();
    let mut expected = LambdaPoly::zero();
    expected.add_term((0, false), h.neg());
    expected.add_term((1, true), State::vacuum().scale_int(-2));
    assert_eq!(p, expected);
}
