//! Regression suite for the structural identities of the vertex algebra
//! calculus: product/derivative exchange rules for sections and scalars,
//! frame-trace identities, and the nested obstruction identities used by
//! the intermediate bracket computations.

use crate::render::{render_lpoly, render_section};
use crate::report::{Outcome, Report};
use algebroid::{Backend, SecId, SectionExpr};
use generators::{i_plus, minus_part, plus_part, project_ell, project_ellbar, w_section, FrameSet};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scalar_ring::ScalarExpr;
use va_core::{Engine, LambdaPoly, State, VaResult};

/// Inputs of [`run_identity_suite`].
pub struct SuiteInput<'a> {
    pub engine: &'a Engine<'a>,
    /// Adapted frames, when available; frame identities are skipped
    /// otherwise.
    pub frames: Option<&'a FrameSet>,
    /// Declared hypothesis: the splitting of the given frames is
    /// involutive.  The projection and nested obstruction identities are
    /// skipped when not declared.
    pub involutive: bool,
    /// An invertible scalar and its inverse, for the unimodular matrix
    /// trace identity; skipped when absent.
    pub unimodular: Option<(ScalarExpr, ScalarExpr)>,
    pub seed: u64,
    pub rounds: usize,
}

struct Sample {
    a: SectionExpr,
    b: SectionExpr,
    c: SectionExpr,
    d: SectionExpr,
    f: ScalarExpr,
    g: ScalarExpr,
}

fn sample_scalars(b: &Backend) -> Vec<ScalarExpr> {
    let ctx = b.ctx();
    match ctx.complex_dim() {
        Some(n) if n > 0 => {
            let z1 = ScalarExpr::coord(ctx.holo(0));
            let zb = ScalarExpr::coord(ctx.anti(n - 1));
            vec![z1.clone(), zb.clone(), z1.mul(&zb).add(&ScalarExpr::from_int(2))]
        }
        _ => vec![ScalarExpr::from_int(2), ScalarExpr::from_int(-3)],
    }
}

fn rand_section(b: &Backend, rng: &mut ChaCha8Rng, scalars: &[ScalarExpr]) -> SectionExpr {
    let n = b.n_sections();
    let mut out = SectionExpr::zero();
    for _ in 0..rng.gen_range(1..3u32) {
        let i = SecId(rng.gen_range(0..n) as u16);
        let coeff = if rng.gen_range(0..3u32) == 0 {
            scalars[rng.gen_range(0..scalars.len())].scale_int(rng.gen_range(1..3i64))
        } else {
            ScalarExpr::from_int(rng.gen_range(1..4i64))
        };
        out.add_term(i, coeff);
    }
    out
}

fn draw_samples(b: &Backend, seed: u64, rounds: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scalars = sample_scalars(b);
    (0..rounds)
        .map(|_| Sample {
            a: rand_section(b, &mut rng, &scalars),
            b: rand_section(b, &mut rng, &scalars),
            c: rand_section(b, &mut rng, &scalars),
            d: rand_section(b, &mut rng, &scalars),
            f: scalars[rng.gen_range(0..scalars.len())].clone(),
            g: scalars[rng.gen_range(0..scalars.len())].clone(),
        })
        .collect()
}

const FREE_IDENTITIES: &[&str] = &[
    "scaled section in the first bracket slot",
    "scalar against section bracket",
    "odd derivative of a scaled section",
    "translates commute under the product",
    "quasicommutation of two sections",
    "odd-derivative exchange",
    "double-translate exchange",
    "scalar slides across a product",
    "product against a scaled section",
    "right association with a scalar",
    "left association with a scalar",
    "association with an odd-derived factor",
    "association with a translated scalar",
    "translated section against a scalar",
    "translate of a product commutes with scalars",
    "nested scalars associate",
    "two scaled factors associate",
    "quasicommutation with a nested product",
    "quasiassociation of three sections",
    "quasiassociation with an odd-derived factor",
    "cyclic exchange, commute then associate",
    "cyclic exchange, associate then commute",
    "scaled factor across a nested product",
    "antisymmetry inside a triple product",
    "scalar migration inside a triple product",
    "four-factor association",
    "four-factor quasicommutation",
];

fn free_residual(eng: &Engine, idx: usize, s: &Sample) -> VaResult<LambdaPoly> {
    let bk = eng.backend();
    let pair = |x: &SectionExpr, y: &SectionExpr| bk.pairing(x, y);
    let br = |x: &SectionExpr, y: &SectionExpr| bk.dorfman(x, y);
    let dee = |x: &ScalarExpr| bk.dee(x);
    let st = |x: &SectionExpr| eng.embed_section(x);
    let sc = |x: &ScalarExpr| eng.embed_scalar(x);
    let (a, b, c, d, f, g) = (&s.a, &s.b, &s.c, &s.d, &s.f, &s.g);
    let (sa, sb, sc_f, sg) = (st(a), st(b), sc(f), sc(g));
    let scst = |x| LambdaPoly::constant(x);
    let res = match idx {
        0 => {
            // [fa, b] − (f[a,b] − f𝒟⟨a,b⟩ − ⟨𝒟f,b⟩a + 𝒟⟨b,fa⟩)
            let fa = a.scale(f);
            let rhs = br(a, b)
                .sub(&dee(&pair(a, b)))
                .scale(f)
                .sub(&a.scale(&pair(&dee(f), b)))
                .add(&dee(&pair(b, &fa)));
            return Ok(scst(st(&br(&fa, b).sub(&rhs))));
        }
        1 => {
            // [f_Λ a] = ⟨𝒟f, a⟩
            let p = eng.lambda_bracket(&sc_f, &sa)?;
            p.sub(&LambdaPoly::constant(sc(&pair(&dee(f), a))))
        }
        2 => {
            // S(:fa:) = :f(Sa): + ½:(𝒟f)a:
            let lhs = eng.s_deriv(&eng.nop(&sc_f, &sa)?)?;
            let rhs = eng
                .nop(&sc_f, &eng.s_deriv(&sa)?)?
                .add(&eng.nop(&st(&dee(f)), &sa)?.scale_ratio(1, 2));
            scst(lhs.sub(&rhs))
        }
        3 => {
            // :(Tᵐa)(Tⁿf): = :(Tⁿf)(Tᵐa):
            let mut res = State::zero();
            for (m, n) in [(0u32, 1u32), (1, 1), (2, 1), (1, 2)] {
                let mut x = sa.clone();
                for _ in 0..m {
                    x = eng.t_deriv(&x)?;
                }
                let mut y = sc_f.clone();
                for _ in 0..n {
                    y = eng.t_deriv(&y)?;
                }
                res = res.add(&eng.nop(&x, &y)?.sub(&eng.nop(&y, &x)?));
            }
            scst(res)
        }
        4 => {
            // :ab: + :ba: = 2T⟨a,b⟩
            let lhs = eng.nop(&sa, &sb)?.add(&eng.nop(&sb, &sa)?);
            scst(lhs.sub(&eng.t_deriv(&sc(&pair(a, b)))?.scale_int(2)))
        }
        5 => {
            // :(Sa)b: = :b(Sa): + T[a,b]
            let lhs = eng.nop(&eng.s_deriv(&sa)?, &sb)?;
            let rhs = eng
                .nop(&sb, &eng.s_deriv(&sa)?)?
                .add(&eng.t_deriv(&st(&br(a, b)))?);
            scst(lhs.sub(&rhs))
        }
        6 => {
            // :a(Tb): + :(Tb)a: = T²⟨a,b⟩
            let tb = eng.t_deriv(&sb)?;
            let lhs = eng.nop(&sa, &tb)?.add(&eng.nop(&tb, &sa)?);
            scst(lhs.sub(&eng.t_deriv(&eng.t_deriv(&sc(&pair(a, b)))?)?))
        }
        7 => {
            // ::ab:f: = :f:ab::
            let ab = eng.nop(&sa, &sb)?;
            scst(eng.nop(&ab, &sc_f)?.sub(&eng.nop(&sc_f, &ab)?))
        }
        8 => {
            // :a:fb:: = ::fb:a: + 2T(:f⟨a,b⟩:)
            let fb = eng.nop(&sc_f, &sb)?;
            let lhs = eng.nop(&sa, &fb)?;
            let rhs = eng.nop(&fb, &sa)?.add(
                &eng.t_deriv(&eng.nop(&sc_f, &sc(&pair(a, b)))?)?.scale_int(2),
            );
            scst(lhs.sub(&rhs))
        }
        9 => {
            // ::ab:f: = :a:bf::
            let lhs = eng.nop(&eng.nop(&sa, &sb)?, &sc_f)?;
            scst(lhs.sub(&eng.nop(&sa, &eng.nop(&sb, &sc_f)?)?))
        }
        10 => {
            // ::af:b: = :a:fb:: + 2:(Tf)⟨a,b⟩:
            let lhs = eng.nop(&eng.nop(&sa, &sc_f)?, &sb)?;
            let rhs = eng.nop(&sa, &eng.nop(&sc_f, &sb)?)?.add(
                &eng
                    .nop(&eng.t_deriv(&sc_f)?, &sc(&pair(a, b)))?
                    .scale_int(2),
            );
            scst(lhs.sub(&rhs))
        }
        11 => {
            // ::af:(Sb): = :a:f(Sb):: − :(Ta)⟨𝒟f,b⟩: − :(Tf)(𝒟⟨a,b⟩−[a,b]):
            let ssb = eng.s_deriv(&sb)?;
            let lhs = eng.nop(&eng.nop(&sa, &sc_f)?, &ssb)?;
            let rhs = eng
                .nop(&sa, &eng.nop(&sc_f, &ssb)?)?
                .sub(&eng.nop(&eng.t_deriv(&sa)?, &sc(&pair(&dee(f), b)))?)
                .sub(&eng.nop(
                    &eng.t_deriv(&sc_f)?,
                    &st(&dee(&pair(a, b)).sub(&br(a, b))),
                )?);
            scst(lhs.sub(&rhs))
        }
        12 => {
            // ::a(Tf):b: = :a:(Tf)b:: + 2:(T²f)⟨a,b⟩:
            let tf = eng.t_deriv(&sc_f)?;
            let lhs = eng.nop(&eng.nop(&sa, &tf)?, &sb)?;
            let rhs = eng.nop(&sa, &eng.nop(&tf, &sb)?)?.add(
                &eng
                    .nop(&eng.t_deriv(&tf)?, &sc(&pair(a, b)))?
                    .scale_int(2),
            );
            scst(lhs.sub(&rhs))
        }
        13 => {
            // ::(Ta)f:b: = :(Ta):fb:: − :(T²f)⟨a,b⟩:
            let ta = eng.t_deriv(&sa)?;
            let lhs = eng.nop(&eng.nop(&ta, &sc_f)?, &sb)?;
            let rhs = eng.nop(&ta, &eng.nop(&sc_f, &sb)?)?.sub(
                &eng.nop(&eng.t_deriv(&eng.t_deriv(&sc_f)?)?, &sc(&pair(a, b)))?,
            );
            scst(lhs.sub(&rhs))
        }
        14 => {
            // :(T(:ab:))f: = :f(T(:ab:)):
            let x = eng.t_deriv(&eng.nop(&sa, &sb)?)?;
            scst(eng.nop(&x, &sc_f)?.sub(&eng.nop(&sc_f, &x)?))
        }
        15 => {
            // ::fg::ab:: = :f:g:ab:::
            let ab = eng.nop(&sa, &sb)?;
            let lhs = eng.nop(&eng.nop(&sc_f, &sg)?, &ab)?;
            scst(lhs.sub(&eng.nop(&sc_f, &eng.nop(&sg, &ab)?)?))
        }
        16 => {
            // ::fa::gb:: = :f:a:gb::: + 2:(Tf):g⟨a,b⟩::
            let gb = eng.nop(&sg, &sb)?;
            let lhs = eng.nop(&eng.nop(&sc_f, &sa)?, &gb)?;
            let rhs = eng.nop(&sc_f, &eng.nop(&sa, &gb)?)?.add(
                &eng
                    .nop(&eng.t_deriv(&sc_f)?, &eng.nop(&sg, &sc(&pair(a, b)))?)?
                    .scale_int(2),
            );
            scst(lhs.sub(&rhs))
        }
        17 => {
            // :a:bc:: = ::bc:a: + 2T(⟨a,b⟩c − ⟨a,c⟩b)
            let bc = eng.nop(&sb, &st(c))?;
            let u = c.scale(&pair(a, b)).sub(&b.scale(&pair(a, c)));
            let rhs = eng.nop(&bc, &sa)?.add(&eng.t_deriv(&st(&u))?.scale_int(2));
            scst(eng.nop(&sa, &bc)?.sub(&rhs))
        }
        18 => {
            // ::ab:c: = :a:bc:: + 2(:(Ta)⟨b,c⟩: − :(Tb)⟨a,c⟩:)
            let lhs = eng.nop(&eng.nop(&sa, &sb)?, &st(c))?;
            let corr = eng
                .nop(&eng.t_deriv(&sa)?, &sc(&pair(b, c)))?
                .sub(&eng.nop(&eng.t_deriv(&sb)?, &sc(&pair(a, c)))?);
            let rhs = eng
                .nop(&sa, &eng.nop(&sb, &st(c))?)?
                .add(&corr.scale_int(2));
            scst(lhs.sub(&rhs))
        }
        19 => {
            // ::a(Sb):c: = :a:(Sb)c:: + :(Ta)[b,c]: + 2:(TSb)⟨a,c⟩:
            let ssb = eng.s_deriv(&sb)?;
            let lhs = eng.nop(&eng.nop(&sa, &ssb)?, &st(c))?;
            let rhs = eng
                .nop(&sa, &eng.nop(&ssb, &st(c))?)?
                .add(&eng.nop(&eng.t_deriv(&sa)?, &st(&br(b, c)))?)
                .add(
                    &eng
                        .nop(&eng.t_deriv(&ssb)?, &sc(&pair(a, c)))?
                        .scale_int(2),
                );
            scst(lhs.sub(&rhs))
        }
        20 => {
            // :a:bc:: = :b:ca:: + 2(:c(T⟨a,b⟩): − :b(T⟨a,c⟩):)
            let lhs = eng.nop(&sa, &eng.nop(&sb, &st(c))?)?;
            let corr = eng
                .nop(&st(c), &eng.t_deriv(&sc(&pair(a, b)))?)?
                .sub(&eng.nop(&sb, &eng.t_deriv(&sc(&pair(a, c)))?)?);
            let rhs = eng
                .nop(&sb, &eng.nop(&st(c), &sa)?)?
                .add(&corr.scale_int(2));
            scst(lhs.sub(&rhs))
        }
        21 => {
            // :a:bc:: = :c:ab:: + 2(:a(T⟨b,c⟩): − :b(T⟨a,c⟩): + :c(T⟨a,b⟩):)
            let lhs = eng.nop(&sa, &eng.nop(&sb, &st(c))?)?;
            let corr = eng
                .nop(&sa, &eng.t_deriv(&sc(&pair(b, c)))?)?
                .sub(&eng.nop(&sb, &eng.t_deriv(&sc(&pair(a, c)))?)?)
                .add(&eng.nop(&st(c), &eng.t_deriv(&sc(&pair(a, b)))?)?);
            let rhs = eng
                .nop(&st(c), &eng.nop(&sa, &sb)?)?
                .add(&corr.scale_int(2));
            scst(lhs.sub(&rhs))
        }
        22 => {
            // ::fa::bc:: = :a:b:fc::: + 2:(Tf)(:⟨a,b⟩c: − :b⟨a,c⟩:):
            let lhs = eng.nop(&eng.nop(&sc_f, &sa)?, &eng.nop(&sb, &st(c))?)?;
            let inner = eng
                .nop(&sc(&pair(a, b)), &st(c))?
                .sub(&eng.nop(&sb, &sc(&pair(a, c)))?);
            let rhs = eng
                .nop(&sa, &eng.nop(&sb, &eng.nop(&sc_f, &st(c))?)?)?
                .add(&eng.nop(&eng.t_deriv(&sc_f)?, &inner)?.scale_int(2));
            scst(lhs.sub(&rhs))
        }
        23 => {
            // :a:b:fc::: = −:b:a:fc::: + 2:(T⟨a,b⟩):fc::
            let fc = eng.nop(&sc_f, &st(c))?;
            let lhs = eng.nop(&sa, &eng.nop(&sb, &fc)?)?;
            let rhs = eng
                .nop(&sb, &eng.nop(&sa, &fc)?)?
                .neg()
                .add(
                    &eng
                        .nop(&eng.t_deriv(&sc(&pair(a, b)))?, &fc)?
                        .scale_int(2),
                );
            scst(lhs.sub(&rhs))
        }
        24 => {
            // :a:b:fc::: = :a::bf:c:: − 2:(Tf):⟨b,c⟩a::
            let lhs = eng.nop(&sa, &eng.nop(&sb, &eng.nop(&sc_f, &st(c))?)?)?;
            let rhs = eng
                .nop(&sa, &eng.nop(&eng.nop(&sb, &sc_f)?, &st(c))?)?
                .sub(
                    &eng
                        .nop(&eng.t_deriv(&sc_f)?, &eng.nop(&sc(&pair(b, c)), &sa)?)?
                        .scale_int(2),
                );
            scst(lhs.sub(&rhs))
        }
        25 => {
            // ::a:bc::d: = :a::bc:d:: + 2(:(Ta)(⟨d,c⟩b − ⟨d,b⟩c): + :T(:bc:)⟨a,d⟩:)
            let bc = eng.nop(&sb, &st(c))?;
            let lhs = eng.nop(&eng.nop(&sa, &bc)?, &st(d))?;
            let u = b.scale(&pair(d, c)).sub(&c.scale(&pair(d, b)));
            let corr = eng
                .nop(&eng.t_deriv(&sa)?, &st(&u))?
                .add(&eng.nop(&eng.t_deriv(&bc)?, &sc(&pair(a, d)))?);
            let rhs = eng
                .nop(&sa, &eng.nop(&bc, &st(d))?)?
                .add(&corr.scale_int(2));
            scst(lhs.sub(&rhs))
        }
        26 => {
            // :a::bc:d:: = −:::bc:d:a:
            //   + 2(:⟨a,b⟩(T(:cd:)): − :⟨a,c⟩(T(:bd:)): + :(T(:bc:))⟨a,d⟩:)
            let bc = eng.nop(&sb, &st(c))?;
            let bcd = eng.nop(&bc, &st(d))?;
            let lhs = eng.nop(&sa, &bcd)?;
            let corr = eng
                .nop(&sc(&pair(a, b)), &eng.t_deriv(&eng.nop(&st(c), &st(d))?)?)?
                .sub(&eng.nop(&sc(&pair(a, c)), &eng.t_deriv(&eng.nop(&sb, &st(d))?)?)?)
                .add(&eng.nop(&eng.t_deriv(&bc)?, &sc(&pair(a, d)))?);
            let rhs = eng.nop(&bcd, &sa)?.neg().add(&corr.scale_int(2));
            scst(lhs.sub(&rhs))
        }
        _ => unreachable!(),
    };
    Ok(res)
}

// -- frame identities --------------------------------------------------------

/// `Σ_{j,k} :[e^j,e_k]₋[e^k,e_j]₋: − T⟨[e^j,e_k]₋,[e^k,e_j]₋⟩`.
fn clave_residual(eng: &Engine, fr: &FrameSet) -> VaResult<State> {
    let b = &fr.backend;
    let mut res = State::zero();
    for j in 0..fr.n {
        for k in 0..fr.n {
            let x = minus_part(fr, &b.dorfman(&fr.e_up[j], &fr.e_dn[k]));
            let y = minus_part(fr, &b.dorfman(&fr.e_up[k], &fr.e_dn[j]));
            if x.is_zero() || y.is_zero() {
                continue;
            }
            res = res
                .add(&eng.nop(&eng.embed_section(&x), &eng.embed_section(&y))?)
                .sub(&eng.t_deriv(&eng.embed_scalar(&b.pairing(&x, &y)))?);
        }
    }
    Ok(res)
}

/// `2T⟨[a,e^j],e_j⟩ − (:[a,e^j]_ℓ e_j: + :e^j[a,e_j]_ℓ̄:)`, summed over `j`.
fn trace_residual(eng: &Engine, fr: &FrameSet, a: &SectionExpr) -> VaResult<State> {
    let b = &fr.backend;
    let mut res = State::zero();
    for j in 0..fr.n {
        let up = b.dorfman(a, &fr.e_up[j]);
        let dn = b.dorfman(a, &fr.e_dn[j]);
        res = res
            .add(&eng.t_deriv(&eng.embed_scalar(&b.pairing(&up, &fr.e_dn[j])))?.scale_int(2))
            .sub(&eng.nop(
                &eng.embed_section(&project_ell(fr, &up)),
                &eng.embed_section(&fr.e_dn[j]),
            )?)
            .sub(&eng.nop(
                &eng.embed_section(&fr.e_up[j]),
                &eng.embed_section(&project_ellbar(fr, &dn)),
            )?);
    }
    Ok(res)
}

/// Reflected plus-part expansion for a sampled section.
fn reflected_residual(eng: &Engine, fr: &FrameSet, a: &SectionExpr) -> VaResult<State> {
    let b = &fr.backend;
    let ia = i_plus(fr, &plus_part(fr, a));
    let albar = project_ellbar(fr, a);
    let al = project_ell(fr, a);
    let mut res = State::zero();
    for j in 0..fr.n {
        let up = plus_part(fr, &b.dorfman(&ia, &fr.e_up[j]));
        let dn = plus_part(fr, &b.dorfman(&ia, &fr.e_dn[j]));
        res = res
            .add(&eng.nop(&eng.embed_section(&up), &eng.embed_section(&fr.e_dn[j]))?)
            .add(&eng.nop(&eng.embed_section(&fr.e_up[j]), &eng.embed_section(&dn))?)
            .sub(
                &eng
                    .t_deriv(&eng.embed_scalar(
                        &b.pairing(&b.dorfman(&ia, &fr.e_up[j]), &fr.e_dn[j]),
                    ))?
                    .scale_int(2),
            );
        for k in 0..fr.n {
            let c1 = b.pairing(&b.dorfman(&albar, &fr.e_up[j]), &fr.e_up[k]);
            if !c1.is_zero() {
                let inner = eng.nop(
                    &eng.embed_section(&fr.e_dn[k]),
                    &eng.embed_section(&fr.e_dn[j]),
                )?;
                res = res.sub(&eng.nop(&eng.embed_scalar(&c1), &inner)?);
            }
            let c2 = b.pairing(&b.dorfman(&al, &fr.e_dn[j]), &fr.e_dn[k]);
            if !c2.is_zero() {
                let inner = eng.nop(
                    &eng.embed_section(&fr.e_up[k]),
                    &eng.embed_section(&fr.e_up[j]),
                )?;
                res = res.sub(&eng.nop(&eng.embed_scalar(&c2), &inner)?);
            }
        }
    }
    Ok(res)
}

/// Frame trace of the reflected bracket sum against `w`.
fn reflected_sum_residual(eng: &Engine, fr: &FrameSet) -> VaResult<State> {
    let b = &fr.backend;
    let w = w_section(fr);
    let mut res = State::zero();
    for j in 0..fr.n {
        res = res
            .add(&eng.nop(
                &eng.embed_section(&fr.e_up[j]),
                &eng.embed_section(&project_ellbar(fr, &b.dorfman(&fr.e_dn[j], &w))),
            )?)
            .add(&eng.nop(
                &eng.embed_section(&project_ell(fr, &b.dorfman(&fr.e_up[j], &w))),
                &eng.embed_section(&fr.e_dn[j]),
            )?)
            .sub(&eng.nop(
                &eng.embed_section(&fr.e_up[j]),
                &eng.embed_section(&project_ellbar(fr, &b.dee(&b.pairing(&w, &fr.e_dn[j])))),
            )?)
            .sub(&eng.nop(
                &eng.embed_section(&project_ell(fr, &b.dee(&b.pairing(&w, &fr.e_up[j])))),
                &eng.embed_section(&fr.e_dn[j]),
            )?)
            .add(
                &eng
                    .t_deriv(&eng.embed_scalar(
                        &b.pairing(&b.dorfman(&w, &fr.e_up[j]), &fr.e_dn[j]),
                    ))?
                    .scale_int(2),
            );
    }
    Ok(res)
}

/// Projection identities under involutivity, at the section level.
fn projection_residual(fr: &FrameSet, a: &SectionExpr) -> SectionExpr {
    let b = &fr.backend;
    let mut res = SectionExpr::zero();
    for j in 0..fr.n {
        let r1 = project_ellbar(fr, &b.dorfman(a, &fr.e_up[j])).sub(&project_ellbar(
            fr,
            &b.dorfman(&project_ellbar(fr, a), &fr.e_up[j]),
        ));
        let r2 = project_ell(fr, &b.dorfman(a, &fr.e_dn[j])).sub(&project_ell(
            fr,
            &b.dorfman(&project_ell(fr, a), &fr.e_dn[j]),
        ));
        res = res.add(&r1).add(&r2);
    }
    res
}

// -- nested obstruction identities -------------------------------------------

struct FrameCalc<'a, 'b> {
    eng: &'a Engine<'b>,
    fr: &'a FrameSet,
}

impl FrameCalc<'_, '_> {
    fn st(&self, x: &SectionExpr) -> State {
        self.eng.embed_section(x)
    }
    fn scs(&self, x: &ScalarExpr) -> State {
        self.eng.embed_scalar(x)
    }
    fn nop(&self, x: &State, y: &State) -> VaResult<State> {
        self.eng.nop(x, y)
    }
    fn t(&self, x: &State) -> VaResult<State> {
        self.eng.t_deriv(x)
    }
    fn s(&self, x: &State) -> VaResult<State> {
        self.eng.s_deriv(x)
    }
    fn br(&self, x: &SectionExpr, y: &SectionExpr) -> SectionExpr {
        self.fr.backend.dorfman(x, y)
    }
    fn pair(&self, x: &SectionExpr, y: &SectionExpr) -> ScalarExpr {
        self.fr.backend.pairing(x, y)
    }
    fn dee(&self, x: &ScalarExpr) -> SectionExpr {
        self.fr.backend.dee(x)
    }
    fn up(&self, j: usize) -> &SectionExpr {
        &self.fr.e_up[j]
    }
    fn dn(&self, j: usize) -> &SectionExpr {
        &self.fr.e_dn[j]
    }
    fn pl(&self, x: &SectionExpr) -> SectionExpr {
        project_ell(self.fr, x)
    }
    fn plb(&self, x: &SectionExpr) -> SectionExpr {
        project_ellbar(self.fr, x)
    }
    fn pp(&self, x: &SectionExpr) -> SectionExpr {
        plus_part(self.fr, x)
    }
    fn pm(&self, x: &SectionExpr) -> SectionExpr {
        minus_part(self.fr, x)
    }
    /// `:x:yz:::` for three sections.
    fn triple(&self, x: &SectionExpr, y: &SectionExpr, z: &SectionExpr) -> VaResult<State> {
        self.nop(&self.st(x), &self.nop(&self.st(y), &self.st(z))?)
    }

    fn a_i(&self, i: usize) -> VaResult<State> {
        let mut out = State::zero();
        for j in 0..self.fr.n {
            for k in 0..self.fr.n {
                let x = self.plb(&self.br(self.dn(k), self.up(j)));
                let y = self.plb(&self.br(self.dn(i), self.up(k)));
                out = out.add(&self.triple(self.dn(j), &x, &y)?);
            }
        }
        Ok(out)
    }

    fn b_i(&self, i: usize) -> VaResult<State> {
        let mut out = State::zero();
        for j in 0..self.fr.n {
            for k in 0..self.fr.n {
                let f = self.pair(&self.br(self.up(k), self.dn(i)), self.up(j));
                let x = self.plb(&self.dee(&f));
                out = out.add(&self.triple(self.dn(j), &x, self.dn(k))?);
            }
        }
        Ok(out)
    }

    fn parte0(&self, i: usize) -> VaResult<State> {
        Ok(self.a_i(i)?.add(&self.b_i(i)?))
    }

    fn parte1(&self, i: usize) -> VaResult<State> {
        let n = self.fr.n;
        // A_i
        let mut a_big = State::zero();
        for j in 0..n {
            a_big = a_big
                .add(&self.nop(
                    &self.st(&self.plb(&self.br(self.dn(i), self.dn(j)))),
                    &self.s(&self.st(self.up(j)))?,
                )?)
                .add(&self.nop(
                    &self.st(self.dn(j)),
                    &self.s(&self.st(&self.pp(&self.br(self.dn(i), self.up(j)))))?,
                )?)
                .add(&self.nop(
                    &self.st(&self.pp(&self.br(self.dn(i), self.up(j)))),
                    &self.s(&self.st(self.dn(j)))?,
                )?)
                .add(&self.nop(
                    &self.st(self.up(j)),
                    &self.s(&self.st(&self.plb(&self.br(self.dn(i), self.dn(j)))))?,
                )?);
        }
        // Right-hand side.
        let mut rhs = State::zero();
        for j in 0..n {
            for k in 0..n {
                rhs = rhs
                    .add(
                        &self
                            .nop(
                                &self.t(&self.scs(&self.pair(
                                    self.up(k),
                                    &self.br(self.dn(i), self.dn(j)),
                                )))?,
                                &self.st(&self.br(self.dn(k), self.up(j))),
                            )?
                            .scale_int(2),
                    )
                    .add(&self.nop(
                        &self.t(&self.scs(&self.pair(
                            &self.br(self.up(k), self.dn(i)),
                            self.up(j),
                        )))?,
                        &self.st(&self.plb(&self.br(self.dn(k), self.dn(j)))),
                    )?);
            }
        }
        // T(...) block.
        let mut tblock = State::zero();
        for j in 0..n {
            let mut c1 = ScalarExpr::zero();
            let mut c2 = ScalarExpr::zero();
            for k in 0..n {
                c1 = c1
                    .add(&self.pair(
                        &self.dee(&self.pair(&self.br(self.up(k), self.dn(i)), self.up(j))),
                        self.dn(k),
                    ))
                    .sub(&self.pair(
                        &self.dee(&self.pair(self.up(j), &self.br(self.dn(i), self.dn(k)))),
                        self.up(k),
                    ));
                c2 = c2.add(&self.pair(
                    &self.dee(&self.pair(&self.br(self.up(k), self.dn(i)), self.dn(j))),
                    self.dn(k),
                ));
            }
            tblock = tblock
                .add(&self.nop(&self.st(self.dn(j)), &self.scs(&c1))?)
                .add(&self.nop(&self.st(self.up(j)), &self.scs(&c2))?);
        }
        rhs = rhs.add(&self.t(&tblock)?);
        rhs = rhs.add(&self.b_i(i)?.scale_ratio(1, 2));
        // :e^j:e^k(⟨𝒟⟨[e_i,e_j],e^r⟩,e_k⟩ e_r)::
        for j in 0..n {
            for k in 0..n {
                let mut u = SectionExpr::zero();
                for r in 0..n {
                    let f = self.pair(
                        &self.dee(&self.pair(&self.br(self.dn(i), self.dn(j)), self.up(r))),
                        self.dn(k),
                    );
                    u = u.add(&self.dn(r).scale(&f));
                }
                rhs = rhs.add(&self.triple(self.up(j), self.up(k), &u)?);
            }
        }
        // :e_j(:e_k:(½⟨𝒟⟨[e^j,e_i],e^k⟩,e_m⟩ + ⟨𝒟⟨[e_i,e^j],e_m⟩,e^k⟩)e^m::):
        for j in 0..n {
            for k in 0..n {
                let mut u = SectionExpr::zero();
                for m in 0..n {
                    let f = self
                        .pair(
                            &self.dee(&self.pair(&self.br(self.up(j), self.dn(i)), self.up(k))),
                            self.dn(m),
                        )
                        .scale_ratio(1, 2)
                        .add(&self.pair(
                            &self.dee(&self.pair(&self.br(self.dn(i), self.up(j)), self.dn(m))),
                            self.up(k),
                        ));
                    u = u.add(&self.up(m).scale(&f));
                }
                rhs = rhs.add(&self.triple(self.dn(j), self.dn(k), &u)?);
            }
        }
        // ½:e_j:(𝒟⟨[e^k,e_i],e^j⟩)₋e_k:: + :e_k:(𝒟⟨[e_i,e^k],e_j⟩)₋e^j::
        for j in 0..n {
            for k in 0..n {
                let x =
                    self.pm(&self.dee(&self.pair(&self.br(self.up(k), self.dn(i)), self.up(j))));
                rhs = rhs.add(&self.triple(self.dn(j), &x, self.dn(k))?.scale_ratio(1, 2));
                let y =
                    self.pm(&self.dee(&self.pair(&self.br(self.dn(i), self.up(k)), self.dn(j))));
                rhs = rhs.add(&self.triple(self.dn(k), &y, self.up(j))?);
            }
        }
        Ok(a_big.sub(&rhs))
    }

    fn parte2(&self, i: usize) -> VaResult<State> {
        let n = self.fr.n;
        let mut lhs = State::zero();
        for j in 0..n {
            for k in 0..n {
                lhs = lhs
                    .add(&self.triple(
                        &self.plb(&self.br(self.dn(i), self.dn(j))),
                        self.dn(k),
                        &self.pl(&self.br(self.up(j), self.up(k))),
                    )?)
                    .add(&self.triple(
                        self.dn(j),
                        &self.plb(&self.br(self.dn(i), self.dn(k))),
                        &self.pl(&self.br(self.up(j), self.up(k))),
                    )?)
                    .add(&self.triple(
                        self.dn(j),
                        self.dn(k),
                        &self.pp(&self.br(self.dn(i), &self.br(self.up(j), self.up(k)))),
                    )?)
                    .add(&self.triple(
                        &self.pp(&self.br(self.dn(i), self.up(j))),
                        self.up(k),
                        &self.plb(&self.br(self.dn(j), self.dn(k))),
                    )?)
                    .add(&self.triple(
                        self.up(j),
                        &self.pp(&self.br(self.dn(i), self.up(k))),
                        &self.plb(&self.br(self.dn(j), self.dn(k))),
                    )?)
                    .add(&self.triple(
                        self.up(j),
                        self.up(k),
                        &self.br(self.dn(i), &self.br(self.dn(j), self.dn(k))),
                    )?);
            }
        }
        let mut rhs = self.a_i(i)?;
        for j in 0..n {
            for k in 0..n {
                rhs = rhs
                    .add(
                        &self
                            .triple(
                                self.dn(j),
                                self.dn(k),
                                &self.pp(&self.br(
                                    self.up(j),
                                    &self.pm(&self.br(self.dn(i), self.up(k))),
                                )),
                            )?
                            .scale_int(2),
                    )
                    .add(
                        &self
                            .nop(
                                &self.t(&self.scs(&self.pair(
                                    &self.br(self.up(j), self.dn(i)),
                                    self.dn(k),
                                )))?,
                                &self.st(&self.pp(&self.br(self.up(k), self.dn(j)))),
                            )?
                            .scale_int(4),
                    )
                    .add(
                        &self
                            .nop(
                                &self.t(&self.scs(&self.pair(
                                    &self.br(self.up(j), self.dn(i)),
                                    self.up(k),
                                )))?,
                                &self.st(&self.plb(&self.br(self.dn(k), self.dn(j)))),
                            )?
                            .scale_int(2),
                    );
                // −2:e^j:e^k(⟨𝒟⟨e^m,[e_i,e_j]⟩,e_k⟩ e_m)::
                let mut u = SectionExpr::zero();
                for m in 0..n {
                    let f = self.pair(
                        &self.dee(&self.pair(self.up(m), &self.br(self.dn(i), self.dn(j)))),
                        self.dn(k),
                    );
                    u = u.add(&self.dn(m).scale(&f));
                }
                rhs = rhs.sub(&self.triple(self.up(j), self.up(k), &u)?.scale_int(2));
                // :e_j:e_k((⟨𝒟⟨e^k,[e_i,e^j]⟩,e_m⟩ − 2⟨𝒟⟨e_m,[e_i,e^j]⟩,e^k⟩)e^m)::
                let mut v = SectionExpr::zero();
                for m in 0..n {
                    let f = self
                        .pair(
                            &self.dee(&self.pair(self.up(k), &self.br(self.dn(i), self.up(j)))),
                            self.dn(m),
                        )
                        .sub(
                            &self
                                .pair(
                                    &self.dee(
                                        &self.pair(self.dn(m), &self.br(self.dn(i), self.up(j))),
                                    ),
                                    self.up(k),
                                )
                                .scale_int(2),
                        );
                    v = v.add(&self.up(m).scale(&f));
                }
                rhs = rhs.add(&self.triple(self.dn(j), self.dn(k), &v)?);
            }
        }
        Ok(lhs.sub(&rhs))
    }

    fn parte3(&self, i: usize) -> VaResult<State> {
        let n = self.fr.n;
        let mut lhs = State::zero();
        for j in 0..n {
            for k in 0..n {
                lhs = lhs
                    .add(
                        &self
                            .triple(
                                self.dn(j),
                                self.dn(k),
                                &self.pp(&self.br(
                                    self.up(j),
                                    &self.pm(&self.br(self.dn(i), self.up(k))),
                                )),
                            )?
                            .scale_int(2),
                    )
                    .add(&self.triple(
                        self.dn(j),
                        self.dn(k),
                        &self.pm(&self.br(self.dn(i), &self.br(self.up(j), self.up(k)))),
                    )?)
                    .add(
                        &self
                            .triple(
                                &self.plb(&self.br(self.dn(i), self.dn(j))),
                                self.up(k),
                                &self.pm(&self.br(self.up(j), self.dn(k))),
                            )?
                            .scale_int(2),
                    )
                    .add(&self.triple(
                        &self.pm(&self.br(self.dn(i), self.up(j))),
                        self.up(k),
                        &self.plb(&self.br(self.dn(j), self.dn(k))),
                    )?)
                    .add(
                        &self
                            .triple(
                                self.dn(j),
                                &self.br(self.dn(i), self.up(k)),
                                &self.pm(&self.br(self.up(j), self.dn(k))),
                            )?
                            .scale_int(2),
                    )
                    .add(&self.triple(
                        self.up(j),
                        &self.pm(&self.br(self.dn(i), self.up(k))),
                        &self.plb(&self.br(self.dn(j), self.dn(k))),
                    )?)
                    .add(
                        &self
                            .triple(
                                self.dn(j),
                                self.up(k),
                                &self.br(self.dn(i), &self.pm(&self.br(self.up(j), self.dn(k)))),
                            )?
                            .scale_int(2),
                    );
            }
        }
        let mut rhs = State::zero();
        for j in 0..n {
            for k in 0..n {
                let inner = self.pm(&self.br(self.dn(i), self.up(k)));
                rhs = rhs
                    .add(
                        &self
                            .triple(self.dn(j), self.dn(k), &self.pm(&self.br(self.up(j), &inner)))?
                            .scale_int(2),
                    )
                    .add(
                        &self
                            .triple(self.dn(j), self.dn(k), &self.pl(&self.br(self.up(j), &inner)))?
                            .scale_int(2),
                    )
                    .add(
                        &self
                            .triple(
                                self.dn(j),
                                self.up(k),
                                &self.pm(&self.br(
                                    self.dn(k),
                                    &self.pm(&self.br(self.up(j), self.dn(i))),
                                )),
                            )?
                            .scale_int(2),
                    )
                    .add(
                        &self
                            .triple(
                                self.dn(j),
                                &self.pm(&self.br(self.dn(i), self.up(k))),
                                &self.pm(&self.br(self.up(j), self.dn(k))),
                            )?
                            .scale_int(2),
                    )
                    .add(
                        &self
                            .triple(
                                self.dn(j),
                                self.up(k),
                                &self.plb(&self.br(
                                    self.dn(i),
                                    &self.pm(&self.br(self.up(j), self.dn(k))),
                                )),
                            )?
                            .scale_int(2),
                    );
                let x =
                    self.pm(&self.dee(&self.pair(&self.br(self.dn(i), self.up(k)), self.up(j))));
                rhs = rhs.add(&self.triple(self.dn(j), &x, self.dn(k))?);
                let y =
                    self.pm(&self.dee(&self.pair(&self.br(self.dn(i), self.up(k)), self.dn(j))));
                rhs = rhs.sub(&self.triple(self.dn(k), &y, self.up(j))?.scale_int(2));
                rhs = rhs.add(
                    &self
                        .nop(
                            &self.t(&self.scs(&self.pair(
                                &self.br(self.up(j), self.dn(i)),
                                self.up(k),
                            )))?,
                            &self.st(&self.pm(&self.br(self.up(k), self.dn(j)))),
                        )?
                        .scale_int(4),
                );
            }
        }
        Ok(lhs.sub(&rhs))
    }
}

/// Run the full identity suite.
pub fn run_identity_suite(input: &SuiteInput) -> Report {
    let eng = input.engine;
    let b = eng.backend();
    let samples = draw_samples(b, input.seed, input.rounds.max(1));
    let mut report = Report::new();
    for (idx, name) in FREE_IDENTITIES.iter().enumerate() {
        report.record(name, || {
            for s in &samples {
                match free_residual(eng, idx, s) {
                    Ok(res) if res.is_zero() => {}
                    Ok(res) => return Outcome::Fail(render_lpoly(b, &res)),
                    Err(e) => return Outcome::Fail(format!("engine error: {e}")),
                }
            }
            Outcome::Pass
        });
    }
    report.record("unimodular matrix trace", || match &input.unimodular {
        None => Outcome::Skip("no invertible scalar supplied".into()),
        Some((a, ai)) => {
            // tr(:A⁻¹(TA):) with A = diag(a, a⁻¹) equals T(log det A) = 0.
            let run = || -> VaResult<State> {
                let (sa, sai) = (eng.embed_scalar(a), eng.embed_scalar(ai));
                Ok(eng
                    .nop(&sai, &eng.t_deriv(&sa)?)?
                    .add(&eng.nop(&sa, &eng.t_deriv(&sai)?)?))
            };
            match run() {
                Ok(res) => crate::checks::state_outcome(eng, &res),
                Err(e) => Outcome::Fail(format!("engine error: {e}")),
            }
        }
    });
    let Some(fr) = input.frames else {
        for name in [
            "torsion square collapses to a translate",
            "frame trace of a bracket",
            "reflected plus-part expansion",
            "frame trace of the reflected bracket sum",
            "bracket projections respect the splitting",
            "nested obstruction identity, part 0",
            "nested obstruction identity, part 1",
            "nested obstruction identity, part 2",
            "nested obstruction identity, part 3",
        ] {
            report.record(name, || Outcome::Skip("no frames supplied".into()));
        }
        return report;
    };
    report.record("torsion square collapses to a translate", || {
        match clave_residual(eng, fr) {
            Ok(res) => crate::checks::state_outcome(eng, &res),
            Err(e) => Outcome::Fail(format!("engine error: {e}")),
        }
    });
    report.record("frame trace of a bracket", || {
        for s in &samples {
            match trace_residual(eng, fr, &s.a) {
                Ok(res) if res.is_zero() => {}
                Ok(res) => return crate::checks::state_outcome(eng, &res),
                Err(e) => return Outcome::Fail(format!("engine error: {e}")),
            }
        }
        Outcome::Pass
    });
    report.record("reflected plus-part expansion", || {
        for s in &samples {
            match reflected_residual(eng, fr, &s.a) {
                Ok(res) if res.is_zero() => {}
                Ok(res) => return crate::checks::state_outcome(eng, &res),
                Err(e) => return Outcome::Fail(format!("engine error: {e}")),
            }
        }
        Outcome::Pass
    });
    report.record("frame trace of the reflected bracket sum", || {
        match reflected_sum_residual(eng, fr) {
            Ok(res) => crate::checks::state_outcome(eng, &res),
            Err(e) => Outcome::Fail(format!("engine error: {e}")),
        }
    });
    let skip_reason = "splitting not declared involutive";
    report.record("bracket projections respect the splitting", || {
        if !input.involutive {
            return Outcome::Skip(skip_reason.into());
        }
        for s in &samples {
            let res = projection_residual(fr, &s.a);
            if !res.is_zero() {
                return Outcome::Fail(render_section(b, &res));
            }
        }
        Outcome::Pass
    });
    let calc = FrameCalc { eng, fr };
    for (name, which) in [
        ("nested obstruction identity, part 0", 0),
        ("nested obstruction identity, part 1", 1),
        ("nested obstruction identity, part 2", 2),
        ("nested obstruction identity, part 3", 3),
    ] {
        report.record(name, || {
            if !input.involutive {
                return Outcome::Skip(skip_reason.into());
            }
            for i in 0..fr.n {
                let res = match which {
                    0 => calc.parte0(i),
                    1 => calc.parte1(i),
                    2 => calc.parte2(i),
                    _ => calc.parte3(i),
                };
                match res {
                    Ok(res) if res.is_zero() => {}
                    Ok(res) => return crate::checks::state_outcome(eng, &res),
                    Err(e) => return Outcome::Fail(format!("engine error: {e}")),
                }
            }
            Outcome::Pass
        });
    }
    report
}
