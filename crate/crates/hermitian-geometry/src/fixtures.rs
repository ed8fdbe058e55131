//! Built-in chart fixtures: exact local models used throughout the test
//! suites and shipped with the command-line tool.

use algebroid::{Form, PatchData};
use scalar_ring::{RingContext, ScalarExpr};

/// A named chart together with the coefficient of its holomorphic volume
/// form (against `dz_1 ∧ ⋯ ∧ dz_n`) and, when known in closed form, the
/// dilaton one-form solving the moment-map equation.
pub struct GeoFixture {
    pub name: &'static str,
    pub patch: PatchData,
    pub psi: Option<ScalarExpr>,
    pub dilaton: Option<Form>,
}

fn diag_metric(n: usize, diag: &[ScalarExpr]) -> Vec<Vec<ScalarExpr>> {
    (0..n)
        .map(|j| {
            (0..n)
                .map(|k| if j == k { diag[j].clone() } else { ScalarExpr::zero() })
                .collect()
        })
        .collect()
}

/// The flat chart on `C^n`: `g = ½δ`, no flux, no bundle.
pub fn flat(n: usize) -> GeoFixture {
    let ctx = RingContext::new_complex(n);
    let half = vec![ScalarExpr::from_ratio(1, 2); n];
    let two = vec![ScalarExpr::from_int(2); n];
    let patch = PatchData::metric_only(ctx, diag_metric(n, &half), diag_metric(n, &two));
    GeoFixture {
        name: "flat",
        patch,
        psi: None,
        dilaton: Some(Form::zero()),
    }
}

/// Conformally flat soliton chart on `C^2`: `ω = f ω_0` with `f` an
/// invertible potential satisfying `f_{1 1̄} = −f_{2 2̄}`, flux `−d^c ω`,
/// holomorphic volume coefficient `f/2`, dilaton `−d log f`.
pub fn c2_soliton() -> GeoFixture {
    let mut ctx = RingContext::new_complex(2);
    let f = ctx.declare_invertible_all("f").unwrap();
    ctx.add_rule(f, &[1, 0, 1, 0], ScalarExpr::deriv(&ctx, f, &[0, 1, 0, 1]).neg())
        .unwrap();
    let fe = ScalarExpr::symbol(f);
    let fi = ScalarExpr::symbol_inv(&ctx, f).unwrap();
    let g = diag_metric(2, &[fe.scale_ratio(1, 2), fe.scale_ratio(1, 2)]);
    let ginv = diag_metric(2, &[fi.scale_int(2), fi.scale_int(2)]);
    let mut patch = PatchData::metric_only(ctx, g, ginv);
    let omega = crate::geometry::hermitian_form(&patch);
    patch.h_flux = omega.dc(&patch.ctx).neg();
    let dlogf = Form::scalar(fe.clone()).d(&patch.ctx).scale(&fi);
    GeoFixture {
        name: "c2-soliton",
        patch,
        psi: Some(fe.scale_ratio(1, 2)),
        dilaton: Some(dlogf.neg()),
    }
}

/// Diagonal metric `g = diag(u/2, v/2)` on `C^2` with independent
/// invertible coefficients; used as a torsion-bivector oracle.
pub fn diag_uv() -> GeoFixture {
    let mut ctx = RingContext::new_complex(2);
    let u = ctx.declare_invertible_all("u").unwrap();
    let v = ctx.declare_invertible_all("v").unwrap();
    let ue = ScalarExpr::symbol(u);
    let ve = ScalarExpr::symbol(v);
    let ui = ScalarExpr::symbol_inv(&ctx, u).unwrap();
    let vi = ScalarExpr::symbol_inv(&ctx, v).unwrap();
    let g = diag_metric(2, &[ue.scale_ratio(1, 2), ve.scale_ratio(1, 2)]);
    let ginv = diag_metric(2, &[ui.scale_int(2), vi.scale_int(2)]);
    let patch = PatchData::metric_only(ctx, g, ginv);
    GeoFixture {
        name: "diag-uv",
        patch,
        psi: None,
        dilaton: None,
    }
}

/// Parameters of the nilmanifold bundle fixture: two abelian generators
/// with integer charges `(m, n, p)` each.
#[derive(Clone, Copy)]
pub struct NilCharges {
    pub m: [i64; 2],
    pub n: [i64; 2],
    pub p: [i64; 2],
}

impl NilCharges {
    /// `D = m_0² + n_0² + p_0² − m_1² − n_1² − p_1²`; must be nonzero.
    pub fn discriminant(&self) -> i64 {
        self.m[0].pow(2) + self.n[0].pow(2) + self.p[0].pow(2)
            - self.m[1].pow(2)
            - self.n[1].pow(2)
            - self.p[1].pow(2)
    }
}

/// Chart of the complex 3-dimensional nilmanifold solution carrying two
/// abelian bundle generators.  `alpha_num/alpha_den` scales the pairing
/// away from the calibrated value (use 1/1 for the genuine solution; any
/// other ratio breaks the anomaly equation, for negative controls).
pub fn iwasawa(charges: NilCharges, alpha_num: i64, alpha_den: i64) -> GeoFixture {
    let d = charges.discriminant();
    assert!(d != 0, "charges must have nonzero discriminant");
    let mut ctx = RingContext::new_complex(3);
    let pi = ctx.declare_const("pi").unwrap();
    let z2 = ScalarExpr::coord(ctx.holo(1));
    let zb1 = ScalarExpr::coord(ctx.anti(0));
    let zb2 = ScalarExpr::coord(ctx.anti(1));

    let one = ScalarExpr::one();
    let half = ScalarExpr::from_ratio(1, 2);
    let mut g = vec![vec![ScalarExpr::zero(); 3]; 3];
    g[0][0] = one.add(&z2.mul(&zb2)).scale_ratio(1, 2);
    g[1][1] = half.clone();
    g[2][2] = half;
    g[0][2] = z2.scale_ratio(-1, 2);
    g[2][0] = zb2.scale_ratio(-1, 2);

    let mut ginv = vec![vec![ScalarExpr::zero(); 3]; 3];
    ginv[0][0] = ScalarExpr::from_int(2);
    ginv[2][0] = z2.scale_int(2);
    ginv[0][2] = zb2.scale_int(2);
    ginv[1][1] = ScalarExpr::from_int(2);
    ginv[2][2] = one.add(&z2.mul(&zb2)).scale_int(2);

    let dz1 = Form::dx(ctx.holo(0));
    let dz2 = Form::dx(ctx.holo(1));
    let pie = ScalarExpr::constant(pi);
    let mut a_conn = Vec::new();
    for a in 0..2 {
        let m = ScalarExpr::from_int(charges.m[a]);
        let n = ScalarExpr::from_int(charges.n[a]);
        let p = ScalarExpr::from_int(charges.p[a]);
        let form = dz1
            .scale(&zb1)
            .sub(&dz2.scale(&zb2))
            .scale(&m)
            .add(&dz1.scale(&zb2).add(&dz2.scale(&zb1)).scale(&n))
            .add(
                &dz1.scale(&zb2)
                    .sub(&dz2.scale(&zb1))
                    .scale(&p.mul(&ScalarExpr::i())),
            );
        a_conn.push(form.scale(&pie).neg());
    }
    // ⟨·,·⟩ = diag(−α, α) with α = 1/(2 D π²), optionally rescaled.
    let alpha = ScalarExpr::constant_pow(pi, -2)
        .scale_ratio(alpha_num, 2 * d * alpha_den);
    let k_pairing = vec![
        vec![alpha.neg(), ScalarExpr::zero()],
        vec![ScalarExpr::zero(), alpha],
    ];

    let mut patch = PatchData {
        ctx,
        g,
        ginv,
        h_flux: Form::zero(),
        a_conn,
        k_pairing,
        k_struct: Vec::new(),
    };
    let omega = crate::geometry::hermitian_form(&patch);
    patch.h_flux = omega.dc(&patch.ctx).neg();
    GeoFixture {
        name: "iwasawa",
        patch,
        psi: None,
        dilaton: Some(Form::zero()),
    }
}

/// Product of the hyperbolic half-plane and a flat line:
/// `g = diag(w⁻²/2, 1/2)` with `w = z₁ + z̄₁`, carrying one abelian
/// generator with curvature `i w⁻² dz₁∧dz̄₁` and unit pairing.  The chart
/// is Kähler, solves the coupled Hermitian–Yang–Mills system with
/// non-vanishing mean curvature `Λ_ω F = 2`, and the induced embedding has
/// central charge `3n − (3/2)·4 = 0`.
pub fn hyperbolic_cylinder() -> GeoFixture {
    let mut ctx = RingContext::new_complex(2);
    let w = ctx
        .declare_invertible("w", &[ctx.holo(0), ctx.anti(0)])
        .unwrap();
    // w = z₁ + z̄₁, imposed through its first derivatives.
    ctx.add_rule(w, &[1, 0, 0, 0], ScalarExpr::one()).unwrap();
    ctx.add_rule(w, &[0, 0, 1, 0], ScalarExpr::one()).unwrap();
    let we = ScalarExpr::symbol(w);
    let wi = ScalarExpr::symbol_inv(&ctx, w).unwrap();
    let g = vec![
        vec![wi.pow(2).scale_ratio(1, 2), ScalarExpr::zero()],
        vec![ScalarExpr::zero(), ScalarExpr::from_ratio(1, 2)],
    ];
    let ginv = vec![
        vec![we.pow(2).scale_int(2), ScalarExpr::zero()],
        vec![ScalarExpr::zero(), ScalarExpr::from_int(2)],
    ];
    // A = −i w⁻¹ dz̄₁, so F = dA = i w⁻² dz₁ ∧ dz̄₁ and Λ_ω F = 2.
    let a_conn = vec![Form::dx(ctx.anti(0)).scale(&wi.mul(&ScalarExpr::i()).neg())];
    let k_pairing = vec![vec![ScalarExpr::one()]];
    let patch = PatchData {
        ctx,
        g,
        ginv,
        h_flux: Form::zero(),
        a_conn,
        k_pairing,
        k_struct: Vec::new(),
    };
    GeoFixture {
        name: "hyperbolic-cylinder",
        patch,
        psi: None,
        dilaton: None,
    }
}

/// Default charges for [`iwasawa`].
pub fn default_charges() -> NilCharges {
    NilCharges {
        m: [2, 1],
        n: [1, 0],
        p: [1, 1],
    }
}

/// Flat `C^2` with a rank-two abelian bundle whose Chern–Weil form
/// vanishes while the mean curvature does not: the pairing is
/// `diag(β, −β)` and the two curvatures square to the same four-form.
pub fn coupled_flat() -> GeoFixture {
    let mut ctx = RingContext::new_complex(2);
    let beta = ctx.declare_const("beta").unwrap();
    let zb1 = ScalarExpr::coord(ctx.anti(0));
    let zb2 = ScalarExpr::coord(ctx.anti(1));
    let dz1 = Form::dx(ctx.holo(0));
    let dz2 = Form::dx(ctx.holo(1));
    let i = ScalarExpr::i();
    // A¹ = 3i(−z̄₁ dz₁ − z̄₂ dz₂) → F¹ = 3i(dz₁dz̄₁ + dz₂dz̄₂), ΛF¹ = 12.
    let a1 = dz1
        .scale(&zb1)
        .add(&dz2.scale(&zb2))
        .neg()
        .scale(&i.scale_int(3));
    // A² = i(−4z̄₁dz₁ + 4z̄₂dz₂ − 5z̄₂dz₁ + 5z̄₁dz₂) →
    // F² = i(4dz₁dz̄₁ − 4dz₂dz̄₂ + 5dz₁dz̄₂ − 5dz₂dz̄₁), ΛF² = 0,
    // and F²∧F² = F¹∧F¹, so the Chern–Weil form cancels in the pairing.
    let a2 = dz1
        .scale(&zb1.scale_int(-4))
        .add(&dz2.scale(&zb2.scale_int(4)))
        .add(&dz1.scale(&zb2.scale_int(-5)))
        .add(&dz2.scale(&zb1.scale_int(5)))
        .scale(&i);
    let be = ScalarExpr::constant(beta);
    let k_pairing = vec![
        vec![be.clone(), ScalarExpr::zero()],
        vec![ScalarExpr::zero(), be.neg()],
    ];
    let half = vec![ScalarExpr::from_ratio(1, 2); 2];
    let two = vec![ScalarExpr::from_int(2); 2];
    let patch = PatchData {
        ctx,
        g: diag_metric(2, &half),
        ginv: diag_metric(2, &two),
        h_flux: Form::zero(),
        a_conn: vec![a1, a2],
        k_pairing,
        k_struct: Vec::new(),
    };
    GeoFixture {
        name: "coupled-flat",
        patch,
        psi: None,
        dilaton: Some(Form::zero()),
    }
}
