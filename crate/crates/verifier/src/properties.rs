//! Seeded property suites over randomly generated states: skew-symmetry
//! and Jacobi for the bracket, the square of the odd derivation, the
//! derivation laws of both derivatives, and stability of normal forms.

use crate::checks::{lpoly_outcome, state_outcome};
use crate::report::{Outcome, Report};
use algebroid::SecId;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scalar_ring::ScalarExpr;
use va_core::{Engine, State};

/// Sample sizes and seed of [`run_property_suite`].
pub struct PropertyConfig {
    pub seed: u64,
    pub skew_pairs: usize,
    pub jacobi_triples: usize,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        Self {
            seed: 0xC0FFEE,
            skew_pairs: 100,
            jacobi_triples: 25,
        }
    }
}

fn sample_scalars(eng: &Engine) -> Vec<ScalarExpr> {
    let ctx = eng.backend().ctx();
    match ctx.complex_dim() {
        Some(n) if n > 0 => {
            let z1 = ScalarExpr::coord(ctx.holo(0));
            let zb = ScalarExpr::coord(ctx.anti(n - 1));
            vec![z1.clone(), zb.clone(), z1.mul(&zb)]
        }
        _ => vec![ScalarExpr::from_int(2)],
    }
}

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

/// Run the seeded property suite.
pub fn run_property_suite(eng: &Engine, cfg: &PropertyConfig) -> Report {
    let scalars = sample_scalars(eng);
    let mut report = Report::new();
    report.record("bracket skew-symmetry", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.skew_pairs {
            let a = rand_state(eng, &mut rng, 1, &scalars);
            let c = rand_state(eng, &mut rng, 1, &scalars);
            let sign = if a.parity() == Some(true) && c.parity() == Some(true) {
                -1
            } else {
                1
            };
            let res = (|| {
                let lhs = eng.lambda_bracket(&a, &c)?;
                let rhs = eng.shift_minus(&eng.lambda_bracket(&c, &a)?)?.scale_int(sign);
                Ok::<_, va_core::VaError>(lhs.sub(&rhs))
            })();
            match res {
                Ok(r) if r.is_zero() => {}
                Ok(r) => return lpoly_outcome(eng, &r),
                Err(e) => return Outcome::Fail(format!("engine error: {e}")),
            }
        }
        Outcome::Pass
    });
    report.record("bracket Jacobi identity", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
        for _ in 0..cfg.jacobi_triples {
            let a = rand_state(eng, &mut rng, 1, &scalars);
            let c = rand_state(eng, &mut rng, 1, &scalars);
            let d = rand_state(eng, &mut rng, 1, &scalars);
            match eng.jacobi_residual(&a, &c, &d) {
                Ok(r) if r.is_zero() => {}
                Ok(_) => return Outcome::Fail("nonzero Jacobi residual".into()),
                Err(e) => return Outcome::Fail(format!("engine error: {e}")),
            }
        }
        Outcome::Pass
    });
    report.record("odd derivative squares to the translate", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
        for _ in 0..cfg.jacobi_triples {
            let a = rand_state(eng, &mut rng, 1, &scalars);
            let res = (|| {
                let ss = eng.s_deriv(&eng.s_deriv(&a)?)?;
                Ok::<_, va_core::VaError>(ss.sub(&eng.t_deriv(&a)?))
            })();
            match res {
                Ok(r) if r.is_zero() => {}
                Ok(r) => return state_outcome(eng, &r),
                Err(e) => return Outcome::Fail(format!("engine error: {e}")),
            }
        }
        Outcome::Pass
    });
    report.record("odd derivative is an odd derivation", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(3));
        for _ in 0..cfg.jacobi_triples {
            let a = rand_state(eng, &mut rng, 1, &scalars);
            let c = rand_state(eng, &mut rng, 1, &scalars);
            let sign = if a.parity() == Some(true) { -1 } else { 1 };
            let res = (|| {
                let lhs = eng.s_deriv(&eng.nop(&a, &c)?)?;
                let rhs = eng
                    .nop(&eng.s_deriv(&a)?, &c)?
                    .add(&eng.nop(&a, &eng.s_deriv(&c)?)?.scale_int(sign));
                Ok::<_, va_core::VaError>(lhs.sub(&rhs))
            })();
            match res {
                Ok(r) if r.is_zero() => {}
                Ok(r) => return state_outcome(eng, &r),
                Err(e) => return Outcome::Fail(format!("engine error: {e}")),
            }
        }
        Outcome::Pass
    });
    report.record("translate is an even derivation", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(4));
        for _ in 0..cfg.jacobi_triples {
            let a = rand_state(eng, &mut rng, 1, &scalars);
            let c = rand_state(eng, &mut rng, 1, &scalars);
            let res = (|| {
                let lhs = eng.t_deriv(&eng.nop(&a, &c)?)?;
                let rhs = eng
                    .nop(&eng.t_deriv(&a)?, &c)?
                    .add(&eng.nop(&a, &eng.t_deriv(&c)?)?);
                Ok::<_, va_core::VaError>(lhs.sub(&rhs))
            })();
            match res {
                Ok(r) if r.is_zero() => {}
                Ok(r) => return state_outcome(eng, &r),
                Err(e) => return Outcome::Fail(format!("engine error: {e}")),
            }
        }
        Outcome::Pass
    });
    report.record("normal forms are stable", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(5));
        for _ in 0..cfg.jacobi_triples {
            let a = rand_state(eng, &mut rng, 2, &scalars);
            let rebuilt = a.add(&a).sub(&a);
            if !eng.equals(&a, &rebuilt) {
                return Outcome::Fail("renormalized state differs from its normal form".into());
            }
            if !a.sub(&a).is_zero() {
                return Outcome::Fail("difference of equal states is not the zero form".into());
            }
        }
        Outcome::Pass
    });
    report
}
