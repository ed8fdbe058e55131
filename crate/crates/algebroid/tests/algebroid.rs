//! Backend construction, bracket, axiom and anomaly-residual tests.

use algebroid::{
    bianchi_residual, check_courant_axioms, Backend, Form, PatchData, SecId, SectionExpr, Tag,
};
use scalar_ring::{RingContext, ScalarExpr};

fn basis(i: usize) -> SectionExpr {
    SectionExpr::basis(SecId(i as u16))
}

// -- structure backends over a point ----------------------------------------

/// Flat backend: 2n sections pairing as dual frames, all brackets zero.
fn flat_table(n: usize) -> Backend {
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

#[test]
fn flat_backend_axioms() {
    let b = flat_table(2);
    let report = check_courant_axioms(&b, &[], 7, 10);
    assert!(report.all_ok());
    assert_eq!(b.pairing(&basis(0), &basis(2)), ScalarExpr::one());
    assert!(b.pairing(&basis(0), &basis(1)).is_zero());
    assert!(b.dorfman(&basis(0), &basis(2)).is_zero());
}

#[test]
fn degenerate_pairing_rejected() {
    let ctx = RingContext::new_point();
    let names = vec!["a".into(), "b".into()];
    let tags = vec![Tag::Ell, Tag::EllBar];
    // second row identically zero: degenerate
    let pairing = vec![
        vec![ScalarExpr::one(), ScalarExpr::zero()],
        vec![ScalarExpr::zero(), ScalarExpr::zero()],
    ];
    let bracket = vec![vec![SectionExpr::zero(); 2]; 2];
    assert!(Backend::build_struct(ctx, names, tags, pairing, bracket).is_err());
}

#[test]
fn bracket_out_of_span_rejected() {
    let ctx = RingContext::new_point();
    let names = vec!["a".into(), "b".into()];
    let tags = vec![Tag::Ell, Tag::EllBar];
    let pairing = vec![
        vec![ScalarExpr::zero(), ScalarExpr::one()],
        vec![ScalarExpr::one(), ScalarExpr::zero()],
    ];
    let mut bracket = vec![vec![SectionExpr::zero(); 2]; 2];
    bracket[0][1] = basis(5);
    assert!(Backend::build_struct(ctx, names, tags, pairing, bracket).is_err());
}

/// The double of the 3-dimensional Heisenberg algebra acting on its
/// coadjoint representation: `[e1,e2] = e3`, dual generators rotated by
/// the coadjoint action, canonical pairing.
fn heisenberg_double(break_coadjoint: bool) -> Backend {
    let ctx = RingContext::new_point();
    let names: Vec<String> = ["e1", "e2", "e3", "f1", "f2", "f3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let tags = vec![Tag::Ell, Tag::Ell, Tag::Ell, Tag::EllBar, Tag::EllBar, Tag::EllBar];
    let nb = 6;
    let mut pairing = vec![vec![ScalarExpr::zero(); nb]; nb];
    for j in 0..3 {
        pairing[j][3 + j] = ScalarExpr::one();
        pairing[3 + j][j] = ScalarExpr::one();
    }
    let mut bracket = vec![vec![SectionExpr::zero(); nb]; nb];
    bracket[0][1] = basis(2);
    bracket[1][0] = basis(2).neg();
    if !break_coadjoint {
        bracket[0][5] = basis(4).neg(); // [e1, f3] = -f2
        bracket[5][0] = basis(4);
        bracket[1][5] = basis(3); // [e2, f3] = f1
        bracket[5][1] = basis(3).neg();
    }
    Backend::build_struct(ctx, names, tags, pairing, bracket).unwrap()
}

#[test]
fn heisenberg_double_axioms() {
    let b = heisenberg_double(false);
    let report = check_courant_axioms(&b, &[], 11, 12);
    assert!(report.all_ok());
}

#[test]
fn broken_coadjoint_fails_invariance() {
    let b = heisenberg_double(true);
    let report = check_courant_axioms(&b, &[], 11, 0);
    assert!(!report.all_ok());
    assert!(report.failures().any(|e| e.axiom == 4));
    // The failing triple is identified in the report.
    assert!(report
        .failures()
        .any(|e| e.axiom == 4 && e.description.contains("e1") && e.description.contains("f3")));
}

// -- chart backends ----------------------------------------------------------

/// Flat patch in complex dimension `n`: metric `g = δ/2`, no flux, no bundle.
fn flat_patch(n: usize) -> PatchData {
    let ctx = RingContext::new_complex(n);
    let mut g = vec![vec![ScalarExpr::zero(); n]; n];
    let mut ginv = vec![vec![ScalarExpr::zero(); n]; n];
    for j in 0..n {
        g[j][j] = ScalarExpr::from_ratio(1, 2);
        ginv[j][j] = ScalarExpr::from_int(2);
    }
    PatchData::metric_only(ctx, g, ginv)
}

#[test]
fn chart_bracket_reduces_to_lie_bracket() {
    let b = Backend::build_string(flat_patch(2)).unwrap();
    let ctx = b.ctx().clone();
    let z2 = ScalarExpr::coord(ctx.holo(1));
    // [z2 ∂_1, ∂_2] = -∂_1
    let a = b.coordinate_vector(ctx.holo(0)).unwrap().scale(&z2);
    let c = b.coordinate_vector(ctx.holo(1)).unwrap();
    let got = b.dorfman(&a, &c);
    let expected = b.coordinate_vector(ctx.holo(0)).unwrap().neg();
    assert_eq!(got, expected);
    // ⟨dz1, ∂_1⟩ = 1/2
    let dz1 = b.coordinate_form(ctx.holo(0)).unwrap();
    let d1 = b.coordinate_vector(ctx.holo(0)).unwrap();
    assert_eq!(b.pairing(&dz1, &d1), ScalarExpr::from_ratio(1, 2));
    // one-forms have zero anchor
    assert!(b.anchor_apply(&dz1, &z2).is_zero());
}

#[test]
fn flat_chart_axioms() {
    let b = Backend::build_string(flat_patch(2)).unwrap();
    let ctx = b.ctx().clone();
    let scalars = vec![
        ScalarExpr::coord(ctx.holo(0)),
        ScalarExpr::coord(ctx.holo(0)).mul(&ScalarExpr::coord(ctx.anti(1))),
    ];
    let report = check_courant_axioms(&b, &scalars, 3, 8);
    assert!(report.all_ok());
}

/// Conformally flat patch: `g = (f/2) δ` with `f` invertible and
/// pluriharmonic-balanced via the rewrite rule, flux `H = -d^c ω`.
fn conformal_patch() -> PatchData {
    let mut ctx = RingContext::new_complex(2);
    let f = ctx.declare_invertible_all("f").unwrap();
    let rhs = ScalarExpr::deriv(&ctx, f, &[0, 1, 0, 1]).neg();
    ctx.add_rule(f, &[1, 0, 1, 0], rhs).unwrap();
    let fe = ScalarExpr::symbol(f);
    let fi = ScalarExpr::symbol_inv(&ctx, f).unwrap();
    let half_f = fe.scale_ratio(1, 2);
    let two_fi = fi.scale_int(2);
    let g = vec![
        vec![half_f.clone(), ScalarExpr::zero()],
        vec![ScalarExpr::zero(), half_f],
    ];
    let ginv = vec![
        vec![two_fi.clone(), ScalarExpr::zero()],
        vec![ScalarExpr::zero(), two_fi],
    ];
    let mut patch = PatchData::metric_only(ctx, g, ginv);
    let omega = omega_form(&patch);
    patch.h_flux = omega.dc(&patch.ctx).neg();
    patch
}

/// The Hermitian form `ω = i Σ g_{jk̄} dz_j ∧ dz̄_k` of a patch.
fn omega_form(patch: &PatchData) -> Form {
    let n = patch.dim();
    let mut omega = Form::zero();
    for j in 0..n {
        for k in 0..n {
            if patch.g[j][k].is_zero() {
                continue;
            }
            let two = Form::dx(patch.ctx.holo(j)).wedge(&Form::dx(patch.ctx.anti(k)));
            omega = omega.add(&two.scale(&patch.g[j][k]).scale(&ScalarExpr::i()));
        }
    }
    omega
}

#[test]
fn conformal_patch_flux_is_closed() {
    let patch = conformal_patch();
    // dH = -d d^c ω vanishes exactly, by the harmonicity rewrite rule.
    assert!(patch.h_flux.d(&patch.ctx).is_zero());
    assert!(bianchi_residual(&patch).is_zero());
}

#[test]
fn conformal_patch_axioms() {
    let patch = conformal_patch();
    let f = patch.ctx.sym_id("f").unwrap();
    let scalars = vec![
        ScalarExpr::symbol(f),
        ScalarExpr::coord(patch.ctx.holo(0)),
    ];
    let b = Backend::build_string(patch).unwrap();
    let report = check_courant_axioms(&b, &scalars, 5, 6);
    for fail in report.failures() {
        panic!("axiom {} failed: {}", fail.axiom, fail.description);
    }
}

/// A two-generator abelian bundle patch over the flat metric, with
/// constant-coefficient curvature two-forms and indefinite bundle pairing
/// chosen so the Chern–Weil four-form cancels exactly.
fn coupled_patch(beta_balanced: bool) -> PatchData {
    let mut patch = flat_patch(2);
    let ctx = &patch.ctx;
    let (z1, z2) = (ctx.holo(0), ctx.holo(1));
    let (zb1, zb2) = (ctx.anti(0), ctx.anti(1));
    // A^1 = 3i zb1 dz1 + 3i zb2 dz2  =>  F^1 = 3i (dz1 dzb1 + dz2 dzb2)
    let i3 = ScalarExpr::i().scale_int(3);
    let a1 = Form::dx(z1)
        .scale(&i3.mul(&ScalarExpr::coord(zb1)))
        .add(&Form::dx(z2).scale(&i3.mul(&ScalarExpr::coord(zb2))));
    // F^2 = i (4 dz1 dzb1 - 4 dz2 dzb2 + 5 dz1 dzb2 - 5 dz2 dzb1)
    let i4 = ScalarExpr::i().scale_int(4);
    let i5 = ScalarExpr::i().scale_int(5);
    let a2 = Form::dx(z1)
        .scale(&i4.mul(&ScalarExpr::coord(zb1)))
        .add(&Form::dx(z2).scale(&i4.mul(&ScalarExpr::coord(zb2)).neg()))
        .add(&Form::dx(z1).scale(&i5.mul(&ScalarExpr::coord(zb2))))
        .add(&Form::dx(z2).scale(&i5.mul(&ScalarExpr::coord(zb1)).neg()));
    patch.a_conn = vec![a1, a2];
    let beta = ScalarExpr::from_int(1);
    let minus = if beta_balanced {
        beta.neg()
    } else {
        beta.clone()
    };
    patch.k_pairing = vec![
        vec![beta, ScalarExpr::zero()],
        vec![ScalarExpr::zero(), minus],
    ];
    patch
}

#[test]
fn chern_weil_cancellation() {
    // With pairing diag(β, -β): ⟨F∧F⟩ = β((F¹)² - (F²)²) and the chosen
    // curvatures give (F¹)² = (F²)² on the volume form, so H = 0 solves
    // the anomaly equation.
    let patch = coupled_patch(true);
    assert!(patch.f_wedge_f().is_zero());
    assert!(bianchi_residual(&patch).is_zero());
    // Flipping the relative sign breaks the cancellation.
    let bad = coupled_patch(false);
    assert!(!bianchi_residual(&bad).is_zero());
}

#[test]
fn coupled_patch_axioms_and_broken_bianchi_jacobi() {
    let good = coupled_patch(true);
    let b = Backend::build_string(good).unwrap();
    let z1 = ScalarExpr::coord(b.ctx().holo(0));
    let report = check_courant_axioms(&b, &[z1], 17, 4);
    for fail in report.failures() {
        panic!("axiom {} failed: {}", fail.axiom, fail.description);
    }
    // A patch whose flux does not solve the anomaly equation fails the
    // Jacobi axiom and only that one.
    let bad = coupled_patch(false);
    let b = Backend::build_string(bad).unwrap();
    let report = check_courant_axioms(&b, &[], 17, 0);
    assert!(report.failures().any(|e| e.axiom == 1));
    assert!(report.failures().all(|e| e.axiom == 1));
}

// -- adapted backends --------------------------------------------------------

/// Flat chart in dimension 1 viewed in the isotropic frame basis
/// `ε = 2∂ + dzb`, `ε̄ = ∂̄ + ½dz`, `m = ∂ − ½dzb`, `m̄ = ∂̄ − ½dz`.
fn flat_adapted() -> Backend {
    let base = Backend::build_string(flat_patch(1)).unwrap();
    let ctx = base.ctx().clone();
    let dd = base.coordinate_vector(ctx.holo(0)).unwrap();
    let db = base.coordinate_vector(ctx.anti(0)).unwrap();
    let dz = base.coordinate_form(ctx.holo(0)).unwrap();
    let dzb = base.coordinate_form(ctx.anti(0)).unwrap();
    let eps = dd.scale_int(2).add(&dzb);
    let epsb = db.add(&dz.scale_ratio(1, 2));
    let m = dd.sub(&dzb.scale_ratio(1, 2));
    let mb = db.sub(&dz.scale_ratio(1, 2));
    let new = vec![
        ("eps1".to_string(), Tag::Ell, eps),
        ("epsb1".to_string(), Tag::EllBar, epsb),
        ("m1".to_string(), Tag::Minus, m),
        ("mb1".to_string(), Tag::Minus, mb),
    ];
    // base order: ∂, ∂̄, dz, dzb
    let inverse = vec![
        // ∂ = ¼ ε + ½ m
        basis(0).scale_ratio(1, 4).add(&basis(2).scale_ratio(1, 2)),
        // ∂̄ = ½ ε̄ + ½ m̄
        basis(1).scale_ratio(1, 2).add(&basis(3).scale_ratio(1, 2)),
        // dz = ε̄ − m̄
        basis(1).sub(&basis(3)),
        // dzb = ½ ε − m
        basis(0).scale_ratio(1, 2).sub(&basis(2)),
    ];
    Backend::adapted(base, new, inverse).unwrap()
}

#[test]
fn adapted_frame_pairings() {
    let b = flat_adapted();
    let (eps, epsb, m, mb) = (basis(0), basis(1), basis(2), basis(3));
    assert_eq!(b.pairing(&eps, &epsb), ScalarExpr::one());
    assert!(b.pairing(&eps, &eps).is_zero());
    assert!(b.pairing(&epsb, &epsb).is_zero());
    assert!(b.pairing(&eps, &m).is_zero());
    assert!(b.pairing(&eps, &mb).is_zero());
    assert!(b.pairing(&epsb, &m).is_zero());
    assert!(b.pairing(&m, &m).is_zero());
    assert!(b.pairing(&mb, &mb).is_zero());
    assert_eq!(b.pairing(&m, &mb), ScalarExpr::from_ratio(-1, 2));
    let report = check_courant_axioms(&b, &[ScalarExpr::coord(b.ctx().holo(0))], 23, 6);
    for fail in report.failures() {
        panic!("axiom {} failed: {}", fail.axiom, fail.description);
    }
}

#[test]
fn adapted_projections() {
    let b = flat_adapted();
    let s = basis(0).add(&basis(1)).add(&basis(2));
    assert_eq!(b.project(&s, Tag::Ell), basis(0));
    assert_eq!(b.plus_part(&s), basis(0).add(&basis(1)));
    let ip = b.i_plus(&s);
    assert_eq!(
        ip,
        basis(0)
            .scale(&ScalarExpr::i())
            .sub(&basis(1).scale(&ScalarExpr::i()))
    );
}

#[test]
fn non_invertible_basis_change_rejected() {
    let base = Backend::build_string(flat_patch(1)).unwrap();
    let new = vec![
        ("a".to_string(), Tag::Ell, basis(0)),
        ("b".to_string(), Tag::EllBar, basis(0)),
        ("c".to_string(), Tag::Minus, basis(2)),
        ("d".to_string(), Tag::Minus, basis(3)),
    ];
    let inverse = vec![basis(0), basis(1), basis(2), basis(3)];
    assert!(Backend::adapted(base, new, inverse).is_err());
}

#[test]
fn dee_duality_on_chart() {
    let b = Backend::build_string(flat_patch(2)).unwrap();
    let ctx = b.ctx().clone();
    let f = ScalarExpr::coord(ctx.holo(0)).mul(&ScalarExpr::coord(ctx.anti(1)));
    let df = b.dee(&f);
    for i in 0..b.n_sections() {
        let a = basis(i);
        assert_eq!(b.pairing(&df, &a), b.anchor_apply(&a, &f));
    }
    // anchor of D f is zero (D lands in one-forms)
    assert!(b.anchor_vf(&df).is_zero());
}
