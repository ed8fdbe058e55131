//! Oracle and property tests for the exact scalar ring.
//!
//! The fixed-value tests pin down concrete derivatives and rule
//! applications computed independently by hand; the randomized tests check
//! the ring and derivation laws on seeded pseudo-random expressions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalar_ring::{CoordId, RingContext, RingError, ScalarExpr, SymId};

fn d(ctx: &RingContext, e: &ScalarExpr, c: CoordId) -> ScalarExpr {
    e.differentiate(ctx, c)
}

#[test]
fn leibniz_on_square() {
    let mut ctx = RingContext::new_complex(1);
    let f = ctx.declare_symbol_all("f").unwrap();
    let z1 = ctx.holo(0);
    let fe = ScalarExpr::symbol(f);
    let lhs = d(&ctx, &fe.mul(&fe), z1);
    let df = ScalarExpr::deriv(&ctx, f, &[1, 0]);
    let rhs = fe.mul(&df).scale_int(2);
    assert_eq!(lhs, rhs);
    assert!(lhs.sub(&rhs).is_zero());
}

#[test]
fn dependencies_kill_derivatives() {
    let mut ctx = RingContext::new_complex(2);
    let z1 = ctx.holo(0);
    let h = ctx.declare_symbol("h", &[z1]).unwrap();
    let he = ScalarExpr::symbol(h);
    assert!(d(&ctx, &he, ctx.anti(0)).is_zero());
    assert!(d(&ctx, &he, ctx.holo(1)).is_zero());
    assert!(!d(&ctx, &he, z1).is_zero());
}

#[test]
fn mixed_partials_commute() {
    let mut ctx = RingContext::new_complex(2);
    let f = ctx.declare_symbol_all("f").unwrap();
    let fe = ScalarExpr::symbol(f);
    let e = fe.mul(&fe).add(&ScalarExpr::coord(ctx.holo(0)).mul(&fe));
    let a = d(&ctx, &d(&ctx, &e, ctx.holo(0)), ctx.anti(1));
    let b = d(&ctx, &d(&ctx, &e, ctx.anti(1)), ctx.holo(0));
    assert_eq!(a, b);
}

#[test]
fn harmonicity_rule_rewrites() {
    // Coordinates are ordered z1, z2, zb1, zb2; the rule sends the mixed
    // derivative in the first complex direction to minus the one in the
    // second direction.
    let mut ctx = RingContext::new_complex(2);
    let f = ctx.declare_symbol_all("f").unwrap();
    let rhs = ScalarExpr::deriv(&ctx, f, &[0, 1, 0, 1]).neg();
    ctx.add_rule(f, &[1, 0, 1, 0], rhs).unwrap();

    let lap = ScalarExpr::deriv(&ctx, f, &[1, 0, 1, 0])
        .add(&ScalarExpr::deriv(&ctx, f, &[0, 1, 0, 1]));
    assert!(lap.is_zero());

    // The rule also applies under further differentiation.
    let fe = ScalarExpr::symbol(f);
    let lap2 = d(&ctx, &d(&ctx, &fe, ctx.holo(0)), ctx.anti(0))
        .add(&d(&ctx, &d(&ctx, &fe, ctx.holo(1)), ctx.anti(1)));
    assert!(lap2.is_zero());

    // Higher derivative monomials reduce through the rule as well.
    let e = ScalarExpr::deriv(&ctx, f, &[2, 0, 1, 0]);
    let expected = d(&ctx, &ScalarExpr::deriv(&ctx, f, &[0, 1, 0, 1]).neg(), ctx.holo(0));
    assert_eq!(e, expected);
}

#[test]
fn unoriented_rule_rejected() {
    let mut ctx = RingContext::new_complex(2);
    let f = ctx.declare_symbol_all("f").unwrap();
    let rhs = ScalarExpr::deriv(&ctx, f, &[0, 1, 0, 1]).neg();
    ctx.add_rule(f, &[1, 0, 1, 0], rhs).unwrap();
    // The reverse rule would create a two-cycle; it is not oriented with
    // respect to the monomial order and must be refused.
    let bad_rhs = ScalarExpr::deriv(&ctx, f, &[1, 0, 1, 0]).neg();
    let err = ctx.add_rule(f, &[0, 1, 0, 1], bad_rhs).unwrap_err();
    assert_eq!(err, RingError::RuleNotOriented);
}

#[test]
fn rule_lhs_validation() {
    let mut ctx = RingContext::new_complex(1);
    let z1 = ctx.holo(0);
    let f = ctx.declare_symbol("f", &[z1]).unwrap();
    // Zero-order left-hand side is not a derivative monomial.
    assert_eq!(
        ctx.add_rule(f, &[0, 0], ScalarExpr::one()).unwrap_err(),
        RingError::RuleNotDerivative
    );
    // Differentiating outside the declared dependencies is rejected.
    assert_eq!(
        ctx.add_rule(f, &[0, 1], ScalarExpr::one()).unwrap_err(),
        RingError::RuleOutsideDeps
    );
}

#[test]
fn inverse_power_rule() {
    let mut ctx = RingContext::new_complex(1);
    let a = ctx.declare_invertible_all("a").unwrap();
    let z1 = ctx.holo(0);
    let ai = ScalarExpr::symbol_inv(&ctx, a).unwrap();
    let da = ScalarExpr::deriv(&ctx, a, &[1, 0]);
    // d(a^{-1}) = -a^{-2} da
    let lhs = d(&ctx, &ai, z1);
    let rhs = ai.mul(&ai).mul(&da).neg();
    assert_eq!(lhs, rhs);
    // a * a^{-1} = 1 exactly.
    assert!(ScalarExpr::symbol(a).mul(&ai).sub(&ScalarExpr::one()).is_zero());
}

#[test]
fn logarithmic_derivative_quotient_rule() {
    // d2(a^{-1} d1 a) = a^{-1} d1 d2 a - a^{-2} (d1 a)(d2 a),
    // the quotient rule for the logarithmic derivative, checked exactly.
    let mut ctx = RingContext::new_complex(2);
    let a = ctx.declare_invertible_all("a").unwrap();
    let ai = ScalarExpr::symbol_inv(&ctx, a).unwrap();
    let d1a = ScalarExpr::deriv(&ctx, a, &[1, 0, 0, 0]);
    let d2a = ScalarExpr::deriv(&ctx, a, &[0, 1, 0, 0]);
    let d12a = ScalarExpr::deriv(&ctx, a, &[1, 1, 0, 0]);
    let lhs = d(&ctx, &ai.mul(&d1a), ctx.holo(1));
    let rhs = ai.mul(&d12a).sub(&ai.mul(&ai).mul(&d1a).mul(&d2a));
    assert_eq!(lhs, rhs);
}

#[test]
fn log_ratio_derivative_cancels_on_diagonal() {
    // The second mixed logarithmic derivative of a ratio u/v, written out
    // through logarithmic derivatives, vanishes identically when u = v.
    let mut ctx = RingContext::new_complex(2);
    let w = ctx.declare_invertible_all("w").unwrap();
    let log_ratio_d1 = |s: SymId, ctx: &RingContext| -> ScalarExpr {
        let si = ScalarExpr::symbol_inv(ctx, s).unwrap();
        si.mul(&ScalarExpr::deriv(ctx, s, &[1, 0, 0, 0]))
    };
    let e = log_ratio_d1(w, &ctx).sub(&log_ratio_d1(w, &ctx));
    assert!(d(&ctx, &e, ctx.holo(1)).is_zero());
}

#[test]
fn constants_and_imaginary_unit() {
    let mut ctx = RingContext::new_complex(1);
    let pi = ctx.declare_const("pi").unwrap();
    let f = ctx.declare_symbol_all("f").unwrap();
    let e = ScalarExpr::constant(pi).mul(&ScalarExpr::symbol(f)).mul(&ScalarExpr::i());
    let de = d(&ctx, &e, ctx.holo(0));
    let expected = ScalarExpr::constant(pi)
        .mul(&ScalarExpr::deriv(&ctx, f, &[1, 0]))
        .mul(&ScalarExpr::i());
    assert_eq!(de, expected);
    // pi * pi^{-1} = 1
    let p = ScalarExpr::constant_pow(pi, -1).mul(&ScalarExpr::constant(pi));
    assert!(p.sub(&ScalarExpr::one()).is_zero());
    // i * i = -1
    assert_eq!(ScalarExpr::i().mul(&ScalarExpr::i()), ScalarExpr::from_int(-2).scale_ratio(1, 2));
}

#[test]
fn as_gauss_roundtrip() {
    let c = ScalarExpr::from_ratio(3, 4).mul(&ScalarExpr::i()).add(&ScalarExpr::from_int(2));
    let g = c.as_gauss().unwrap();
    assert_eq!(ScalarExpr::from_gauss(g), c);
    let mut ctx = RingContext::new_complex(1);
    let f = ctx.declare_symbol_all("f").unwrap();
    assert!(ScalarExpr::symbol(f).as_gauss().is_none());
    assert!(ScalarExpr::zero().as_gauss().unwrap().is_zero());
}

// ---------------------------------------------------------------------------
// Randomized property tests
// ---------------------------------------------------------------------------

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A random expression over the given context: a short sum of products
    /// of coordinates, symbols, inverse symbols, and low-order derivatives.
    fn expr(&mut self, ctx: &RingContext, syms: &[SymId], inv: &[SymId]) -> ScalarExpr {
        let n_terms = self.rng.gen_range(0..=3);
        let mut out = ScalarExpr::zero();
        for _ in 0..n_terms {
            let mut term = ScalarExpr::from_parts(
                self.rng.gen_range(-3..=3),
                self.rng.gen_range(-2..=2),
                self.rng.gen_range(1..=3),
            );
            let n_factors = self.rng.gen_range(0..=3);
            for _ in 0..n_factors {
                let factor = match self.rng.gen_range(0..4) {
                    0 => {
                        let c = self.rng.gen_range(0..ctx.n_coords());
                        ScalarExpr::coord(CoordId(c as u16))
                    }
                    1 => {
                        let s = syms[self.rng.gen_range(0..syms.len())];
                        ScalarExpr::symbol(s)
                    }
                    2 => {
                        let s = inv[self.rng.gen_range(0..inv.len())];
                        ScalarExpr::symbol_inv(ctx, s).unwrap()
                    }
                    _ => {
                        let s = syms[self.rng.gen_range(0..syms.len())];
                        let mut orders = vec![0u16; ctx.n_coords()];
                        let total = self.rng.gen_range(1..=2);
                        for _ in 0..total {
                            let c = self.rng.gen_range(0..ctx.n_coords());
                            orders[c] += 1;
                        }
                        ScalarExpr::deriv(ctx, s, &orders)
                    }
                };
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }
}

trait FromParts {
    fn from_parts(a: i64, b: i64, c: i64) -> ScalarExpr;
}

impl FromParts for ScalarExpr {
    fn from_parts(a: i64, b: i64, c: i64) -> ScalarExpr {
        ScalarExpr::from_gauss(scalar_ring::GaussRat::from_parts(a, b, c))
    }
}

fn property_context() -> (RingContext, Vec<SymId>, Vec<SymId>) {
    let mut ctx = RingContext::new_complex(2);
    let f = ctx.declare_symbol_all("f").unwrap();
    let g = ctx.declare_symbol("g", &[ctx.holo(0), ctx.anti(0)]).unwrap();
    let a = ctx.declare_invertible_all("a").unwrap();
    // A nontrivial rewrite rule so the properties are tested modulo
    // rewriting, not just on free expressions.
    let rhs = ScalarExpr::deriv(&ctx, f, &[0, 1, 0, 1]).neg();
    ctx.add_rule(f, &[1, 0, 1, 0], rhs).unwrap();
    (ctx, vec![f, g, a], vec![a])
}

#[test]
fn ring_laws_random() {
    let (ctx, syms, inv) = property_context();
    let mut gen = Gen::new(0x5ca1a);
    for _ in 0..60 {
        let a = gen.expr(&ctx, &syms, &inv);
        let b = gen.expr(&ctx, &syms, &inv);
        let c = gen.expr(&ctx, &syms, &inv);
        // commutativity, associativity, distributivity
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        // additive group
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.add(&b).sub(&b), a);
    }
}

#[test]
fn derivation_laws_random() {
    let (ctx, syms, inv) = property_context();
    let mut gen = Gen::new(0xd1ff);
    for _ in 0..60 {
        let a = gen.expr(&ctx, &syms, &inv);
        let b = gen.expr(&ctx, &syms, &inv);
        for ci in 0..ctx.n_coords() {
            let x = CoordId(ci as u16);
            // Leibniz
            let lhs = a.mul(&b).differentiate(&ctx, x);
            let rhs = a.differentiate(&ctx, x).mul(&b).add(&a.mul(&b.differentiate(&ctx, x)));
            assert_eq!(lhs, rhs);
            // linearity
            assert_eq!(
                a.add(&b).differentiate(&ctx, x),
                a.differentiate(&ctx, x).add(&b.differentiate(&ctx, x))
            );
        }
        // commuting partials across all coordinate pairs
        for ci in 0..ctx.n_coords() {
            for cj in (ci + 1)..ctx.n_coords() {
                let x = CoordId(ci as u16);
                let y = CoordId(cj as u16);
                let xy = a.differentiate(&ctx, x).differentiate(&ctx, y);
                let yx = a.differentiate(&ctx, y).differentiate(&ctx, x);
                assert_eq!(xy, yx);
            }
        }
    }
}

#[test]
fn normal_form_confluence_random() {
    // The same element built through different operation orders must reach
    // the same normal form.
    let (ctx, syms, inv) = property_context();
    let mut gen = Gen::new(0xc0f1);
    for _ in 0..40 {
        let a = gen.expr(&ctx, &syms, &inv);
        let b = gen.expr(&ctx, &syms, &inv);
        let c = gen.expr(&ctx, &syms, &inv);
        let p = a.add(&b).mul(&c);
        let q = c.mul(&b).add(&c.mul(&a));
        assert_eq!(p, q);
        let x = CoordId(0);
        let r = a.differentiate(&ctx, x).mul(&b).add(&b.differentiate(&ctx, x).mul(&a));
        let s = a.mul(&b).differentiate(&ctx, x);
        assert_eq!(r, s);
    }
}
