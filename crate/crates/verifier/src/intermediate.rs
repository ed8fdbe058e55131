//! Intermediate bracket computations: the auxiliary current, the bare and
//! corrected Hamiltonians acting on frame sections, the dilaton brackets,
//! and the double-translate obstruction.  Checks whose hypotheses are not
//! declared by the caller are skipped, not failed.

use crate::checks::{lpoly_outcome, state_outcome};
use crate::report::{Outcome, Report};
use algebroid::SectionExpr;
use generators::{
    build_h, build_r_f, central_charge, i_plus, minus_part, plus_part, project_ell,
    project_ellbar, w_section, FrameSet, HMode,
};
use scalar_ring::ScalarExpr;
use va_core::{Engine, LambdaPoly, State, VaResult};

/// Inputs of [`check_intermediate`].
pub struct IntermediateInput<'a> {
    pub engine: &'a Engine<'a>,
    pub frames: &'a FrameSet,
    /// Declared hypothesis: both halves of the splitting are involutive.
    pub involutive: bool,
    /// Declared hypothesis: the transverse divergence equation holds.
    pub weak_divergence: bool,
    /// Declared hypothesis: the dilaton section is central, `[ε,·] = 0`.
    pub central_dilaton: bool,
}

struct Calc<'a, 'b> {
    eng: &'a Engine<'b>,
    fr: &'a FrameSet,
}

impl Calc<'_, '_> {
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
    fn triple(&self, x: &SectionExpr, y: &SectionExpr, z: &SectionExpr) -> VaResult<State> {
        self.nop(&self.st(x), &self.nop(&self.st(y), &self.st(z))?)
    }

    /// `J₀ = (i/2) Σ_j :e^j e_j:`.
    fn j0(&self) -> VaResult<State> {
        let mut out = State::zero();
        for j in 0..self.fr.n {
            out = out.add(&self.nop(&self.st(&self.fr.e_up[j]), &self.st(&self.fr.e_dn[j]))?);
        }
        Ok(out.scale(&ScalarExpr::i().scale_ratio(1, 2)))
    }

    /// Kinetic part `½ Σ_j (:e_j(Se^j): + :e^j(Se_j):)`.
    fn kinetic(&self) -> VaResult<State> {
        let mut out = State::zero();
        for j in 0..self.fr.n {
            out = out
                .add(&self.nop(&self.st(&self.fr.e_dn[j]), &self.s(&self.st(&self.fr.e_up[j]))?)?)
                .add(&self.nop(&self.st(&self.fr.e_up[j]), &self.s(&self.st(&self.fr.e_dn[j]))?)?);
        }
        Ok(out.scale_ratio(1, 2))
    }

    /// Quartic part of `H'` (equivalently of `H₀`).
    fn quartic(&self) -> VaResult<State> {
        let n = self.fr.n;
        let mut out = State::zero();
        for j in 0..n {
            for k in 0..n {
                out = out
                    .add(&self.triple(
                        &self.fr.e_dn[j],
                        &self.fr.e_up[k],
                        &self.br(&self.fr.e_up[j], &self.fr.e_dn[k]),
                    )?)
                    .add(&self.triple(
                        &self.fr.e_up[j],
                        &self.fr.e_dn[k],
                        &self.br(&self.fr.e_dn[j], &self.fr.e_up[k]),
                    )?)
                    .sub(&self.triple(
                        &self.fr.e_dn[j],
                        &self.fr.e_dn[k],
                        &self.br(&self.fr.e_up[j], &self.fr.e_up[k]),
                    )?)
                    .sub(&self.triple(
                        &self.fr.e_up[j],
                        &self.fr.e_up[k],
                        &self.br(&self.fr.e_dn[j], &self.fr.e_dn[k]),
                    )?);
            }
        }
        Ok(out.scale_ratio(1, 4))
    }

    /// `H₀ = kinetic + quartic`.
    fn h0(&self) -> VaResult<State> {
        Ok(self.kinetic()?.add(&self.quartic()?))
    }

    /// `H' = H₀ − (T/2)w`.
    fn h_prime(&self) -> VaResult<State> {
        let w = self.t(&self.st(&w_section(self.fr)))?;
        Ok(self.h0()?.sub(&w.scale_ratio(1, 2)))
    }

    /// The right-hand side of the bracket of a section against `J₀`.
    fn a_j0_rhs(&self, a: &SectionExpr) -> VaResult<LambdaPoly> {
        let fr = self.fr;
        let mut quad = State::zero();
        let mut r = ScalarExpr::zero();
        for j in 0..fr.n {
            let up = self.br(a, &fr.e_up[j]);
            let dn = self.br(a, &fr.e_dn[j]);
            quad = quad
                .add(&self.nop(&self.st(&up), &self.st(&fr.e_dn[j]))?)
                .add(&self.nop(&self.st(&fr.e_up[j]), &self.st(&dn))?);
            r = r.add(&self.pair(&up, &fr.e_dn[j]));
        }
        let ipa = i_plus(fr, &plus_part(fr, a));
        let mut p = LambdaPoly::zero();
        p.add_term(
            (0, false),
            quad.scale(&ScalarExpr::i().scale_ratio(1, 2)),
        );
        p.add_term((0, true), self.st(&ipa).scale(&ScalarExpr::i()));
        p.add_term((1, false), self.scs(&r).scale(&ScalarExpr::i()));
        Ok(p)
    }

    /// The right-hand side of the bracket of `J₀` against a section,
    /// obtained from the previous one by skew-symmetry.
    fn j0_a_rhs(&self, a: &SectionExpr) -> VaResult<LambdaPoly> {
        let fr = self.fr;
        let mut quad = State::zero();
        let mut r = ScalarExpr::zero();
        for j in 0..fr.n {
            let up = self.br(a, &fr.e_up[j]);
            let dn = self.br(a, &fr.e_dn[j]);
            quad = quad
                .add(&self.nop(&self.st(&up), &self.st(&fr.e_dn[j]))?)
                .add(&self.nop(&self.st(&fr.e_up[j]), &self.st(&dn))?);
            r = r.add(&self.pair(&up, &fr.e_dn[j]));
        }
        let ipa = self.st(&i_plus(fr, &plus_part(fr, a)));
        let rs = self.scs(&r);
        let i = ScalarExpr::i();
        let mut p = LambdaPoly::zero();
        p.add_term(
            (0, false),
            quad.scale(&i.scale_ratio(1, 2))
                .sub(&self.s(&ipa)?.scale(&i))
                .sub(&self.t(&rs)?.scale(&i)),
        );
        p.add_term((0, true), ipa.scale(&i).neg());
        p.add_term((1, false), rs.scale(&i).neg());
        Ok(p)
    }

    /// Reduced involutive form of the quartic part of `H₀`.
    fn quartic_reduced(&self) -> VaResult<State> {
        let n = self.fr.n;
        let fr = self.fr;
        let mut out = State::zero();
        for j in 0..n {
            for k in 0..n {
                out = out
                    .add(
                        &self
                            .triple(
                                &fr.e_dn[j],
                                &fr.e_up[k],
                                &minus_part(fr, &self.br(&fr.e_up[j], &fr.e_dn[k])),
                            )?
                            .scale_int(2),
                    )
                    .add(&self.triple(
                        &fr.e_dn[j],
                        &fr.e_dn[k],
                        &project_ell(fr, &self.br(&fr.e_up[j], &fr.e_up[k])),
                    )?)
                    .add(&self.triple(
                        &fr.e_up[j],
                        &fr.e_up[k],
                        &project_ellbar(fr, &self.br(&fr.e_dn[j], &fr.e_dn[k])),
                    )?);
            }
        }
        Ok(out.scale_ratio(1, 4))
    }

    /// Right-hand side of the action of `H₀` on a frame section.  With
    /// `side = false` the section is `e_i` from the lower frame; with
    /// `side = true` it is `e^i` and all roles are mirrored.
    fn h0_action_rhs(&self, i: usize, side: bool) -> VaResult<LambdaPoly> {
        let fr = self.fr;
        let n = fr.n;
        let u = |j: usize| -> &SectionExpr {
            if side {
                &fr.e_dn[j]
            } else {
                &fr.e_up[j]
            }
        };
        let d = |j: usize| -> &SectionExpr {
            if side {
                &fr.e_up[j]
            } else {
                &fr.e_dn[j]
            }
        };
        let pl = |x: &SectionExpr| {
            if side {
                project_ellbar(fr, x)
            } else {
                project_ell(fr, x)
            }
        };
        let plb = |x: &SectionExpr| {
            if side {
                project_ell(fr, x)
            } else {
                project_ellbar(fr, x)
            }
        };
        let pm = |x: &SectionExpr| minus_part(fr, x);
        let mut lam = SectionExpr::zero();
        let mut con = State::zero();
        let mut chi = State::zero();
        for j in 0..n {
            for k in 0..n {
                let c1 = self
                    .pair(&self.dee(&self.pair(&self.br(u(k), d(i)), u(j))), d(k))
                    .sub(&self.pair(&self.dee(&self.pair(u(j), &self.br(d(i), d(k)))), u(k)));
                lam = lam.add(&d(j).scale(&c1));
                let c2 = self.pair(&self.dee(&self.pair(&self.br(u(k), d(i)), d(j))), d(k));
                lam = lam.sub(&u(j).scale(&c2));
                let x = pm(&self.br(d(i), u(j)));
                con = con
                    .sub(&self.triple(d(j), d(k), &pl(&self.br(&x, u(k))))?)
                    .sub(&self.triple(d(j), d(k), &pm(&self.br(&x, u(k))))?)
                    .sub(&self.triple(&x, d(k), &pm(&self.br(d(j), u(k))))?)
                    .sub(&self.triple(d(j), u(k), &plb(&self.br(d(i), &pm(&self.br(u(j), d(k))))))?)
                    .sub(&self.triple(u(j), d(k), &pm(&self.br(&pm(&self.br(u(k), d(i))), d(j))))?);
            }
        }
        let mut lam2 = SectionExpr::zero();
        for j in 0..n {
            let x = pm(&self.br(d(i), u(j)));
            chi = chi.add(&self.nop(&self.st(d(j)), &self.st(&x))?.scale_ratio(1, 2));
            con = con
                .sub(&self.nop(&self.st(d(j)), &self.s(&self.st(&x))?)?)
                .add(&self.t(&self.st(&plb(&self.br(d(j), &x))))?);
            lam2 = lam2.add(&plb(&self.br(d(j), &x))).add(&pm(&self.br(&x, d(j))));
        }
        let mut p = LambdaPoly::zero();
        p.add_term(
            (1, false),
            self.st(&lam)
                .scale_ratio(1, 2)
                .add(&self.st(&lam2).scale_ratio(1, 2))
                .add(&self.st(d(i))),
        );
        p.add_term((0, false), con.scale_ratio(1, 2).add(&self.t(&self.st(d(i)))?.scale_int(2)));
        p.add_term((0, true), chi.add(&self.s(&self.st(d(i)))?));
        Ok(p)
    }

    /// Correction from `H₀` to `H'` in its action on a frame section.
    fn h_prime_correction(&self, i: usize, side: bool) -> LambdaPoly {
        let fr = self.fr;
        let n = fr.n;
        let mut wsum = SectionExpr::zero();
        for j in 0..n {
            wsum = wsum.add(&self.br(&fr.e_up[j], &fr.e_dn[j]));
        }
        let (ei, sign): (&SectionExpr, i64) = if side {
            (&fr.e_up[i], -1)
        } else {
            (&fr.e_dn[i], 1)
        };
        let mut lam = SectionExpr::zero();
        for k in 0..n {
            if side {
                lam = lam
                    .add(
                        &project_ell(fr, &self.br(&fr.e_dn[k], &fr.e_up[i]))
                            .scale(&self.pair(&wsum, &fr.e_dn[k])),
                    )
                    .sub(
                        &self
                            .br(&fr.e_dn[k], &fr.e_up[i])
                            .scale(&self.pair(&wsum, &fr.e_up[k])),
                    )
                    .sub(
                        &fr.e_up[k]
                            .scale(&self.pair(&self.dee(&self.pair(&fr.e_dn[k], &wsum)), ei)),
                    )
                    .add(
                        &fr.e_dn[k]
                            .scale(&self.pair(&self.dee(&self.pair(&fr.e_up[k], &wsum)), ei)),
                    );
            } else {
                lam = lam
                    .sub(
                        &project_ellbar(fr, &self.br(&fr.e_dn[k], &fr.e_dn[i]))
                            .scale(&self.pair(&wsum, &fr.e_up[k])),
                    )
                    .add(
                        &self
                            .br(&fr.e_up[k], &fr.e_dn[i])
                            .scale(&self.pair(&wsum, &fr.e_dn[k])),
                    )
                    .add(
                        &fr.e_dn[k]
                            .scale(&self.pair(&self.dee(&self.pair(&fr.e_up[k], &wsum)), ei)),
                    )
                    .sub(
                        &fr.e_up[k]
                            .scale(&self.pair(&self.dee(&self.pair(&fr.e_dn[k], &wsum)), ei)),
                    );
            }
        }
        lam = lam.add(&self.dee(&self.pair(ei, &wsum)).scale_int(sign));
        let mut p = LambdaPoly::zero();
        p.add_term((1, false), self.st(&lam).scale_ratio(sign, 2));
        p.add_term(
            (1, true),
            self.scs(&self.pair(&wsum, ei)).scale_int(sign),
        );
        p
    }

    /// Dilaton brackets with `H'` under involutivity and a central dilaton:
    /// returns the pair of expected polynomials `([u_Λ H'], [H'_Λ u])`.
    fn dilaton_h_rhs(&self) -> VaResult<(LambdaPoly, LambdaPoly)> {
        let fr = self.fr;
        let up = plus_part(fr, &fr.epsilon);
        let ipu = i_plus(fr, &up);
        let mut x = State::zero();
        let mut y = State::zero();
        let mut r_i = ScalarExpr::zero();
        for j in 0..fr.n {
            x = x
                .add(&self.nop(
                    &self.st(&pm_of(fr, &self.br(&up, &fr.e_up[j]))),
                    &self.st(&fr.e_dn[j]),
                )?)
                .sub(&self.nop(
                    &self.st(&fr.e_up[j]),
                    &self.st(&pm_of(fr, &self.br(&up, &fr.e_dn[j]))),
                )?);
            r_i = r_i.add(&self.pair(&self.br(&ipu, &fr.e_up[j]), &fr.e_dn[j]));
            for k in 0..fr.n {
                let c1 = self.pair(&self.br(&up, &fr.e_up[j]), &fr.e_up[k]);
                if !c1.is_zero() {
                    y = y.add(&self.nop(
                        &self.scs(&c1),
                        &self.nop(&self.st(&fr.e_dn[j]), &self.st(&fr.e_dn[k]))?,
                    )?);
                }
                let c2 = self.pair(&self.br(&up, &fr.e_dn[j]), &fr.e_dn[k]);
                if !c2.is_zero() {
                    y = y.add(&self.nop(
                        &self.scs(&c2),
                        &self.nop(&self.st(&fr.e_up[j]), &self.st(&fr.e_up[k]))?,
                    )?);
                }
            }
        }
        let su = self.st(&up);
        let rs = self.scs(&r_i);
        let mut a = LambdaPoly::zero();
        a.add_term(
            (0, true),
            x.neg().sub(&self.t(&rs)?).add(&y).add(&self.s(&su)?),
        );
        a.add_term((1, true), rs.neg());
        a.add_term((1, false), su.clone());
        let mut b = LambdaPoly::zero();
        b.add_term((0, true), x.neg().add(&y).add(&self.s(&su)?));
        b.add_term(
            (0, false),
            self.s(&x)?
                .neg()
                .add(&self.s(&y)?)
                .add(&self.t(&su)?.scale_int(2)),
        );
        b.add_term((1, true), rs.clone());
        b.add_term((1, false), self.s(&rs)?.add(&su));
        Ok((a, b))
    }
}

fn pm_of(fr: &FrameSet, x: &SectionExpr) -> SectionExpr {
    minus_part(fr, x)
}

/// Run the intermediate bracket checks on a frame pair.
pub fn check_intermediate(input: &IntermediateInput) -> Report {
    let eng = input.engine;
    let fr = input.frames;
    let calc = Calc { eng, fr };
    let mut report = Report::new();
    report.record("auxiliary current self-bracket", || {
        let run = || -> VaResult<LambdaPoly> {
            let j0 = calc.j0()?;
            let mut rhs = LambdaPoly::constant(calc.h_prime()?);
            rhs.add_term((1, true), State::scalar(ScalarExpr::from_int(fr.n as i64)));
            Ok(eng.lambda_bracket(&j0, &j0)?.add(&rhs))
        };
        match run() {
            Ok(res) => lpoly_outcome(eng, &res),
            Err(e) => Outcome::Fail(format!("engine error: {e}")),
        }
    });
    let mut probes: Vec<SectionExpr> = vec![fr.e_dn[0].clone(), fr.e_up[fr.n - 1].clone()];
    if !fr.epsilon.is_zero() {
        probes.push(fr.epsilon.clone());
    }
    report.record("section against the auxiliary current", || {
        for a in &probes {
            let run = || -> VaResult<LambdaPoly> {
                let j0 = calc.j0()?;
                let p = eng.lambda_bracket(&eng.embed_section(a), &j0)?;
                Ok(p.sub(&calc.a_j0_rhs(a)?))
            };
            match run() {
                Ok(res) if res.is_zero() => {}
                Ok(res) => return lpoly_outcome(eng, &res),
                Err(e) => return Outcome::Fail(format!("engine error: {e}")),
            }
        }
        Outcome::Pass
    });
    report.record("auxiliary current against a section", || {
        for a in &probes {
            let run = || -> VaResult<LambdaPoly> {
                let j0 = calc.j0()?;
                let p = eng.lambda_bracket(&j0, &eng.embed_section(a))?;
                Ok(p.sub(&calc.j0_a_rhs(a)?))
            };
            match run() {
                Ok(res) if res.is_zero() => {}
                Ok(res) => return lpoly_outcome(eng, &res),
                Err(e) => return Outcome::Fail(format!("engine error: {e}")),
            }
        }
        Outcome::Pass
    });
    let skip = "splitting not declared involutive";
    report.record("reduced form of the bare Hamiltonian", || {
        if !input.involutive {
            return Outcome::Skip(skip.into());
        }
        match (calc.quartic(), calc.quartic_reduced()) {
            (Ok(a), Ok(b)) => state_outcome(eng, &a.sub(&b)),
            (Err(e), _) | (_, Err(e)) => Outcome::Fail(format!("engine error: {e}")),
        }
    });
    for (name, side) in [
        ("bare Hamiltonian on the lower frame", false),
        ("bare Hamiltonian on the upper frame", true),
    ] {
        report.record(name, || {
            if !input.involutive {
                return Outcome::Skip(skip.into());
            }
            for i in 0..fr.n {
                let run = || -> VaResult<LambdaPoly> {
                    let h0 = calc.h0()?;
                    let e = if side { &fr.e_up[i] } else { &fr.e_dn[i] };
                    let p = eng.lambda_bracket(&h0, &eng.embed_section(e))?;
                    Ok(p.sub(&calc.h0_action_rhs(i, side)?))
                };
                match run() {
                    Ok(res) if res.is_zero() => {}
                    Ok(res) => return lpoly_outcome(eng, &res),
                    Err(e) => return Outcome::Fail(format!("engine error: {e}")),
                }
            }
            Outcome::Pass
        });
    }
    for (name, side) in [
        ("corrected Hamiltonian on the lower frame", false),
        ("corrected Hamiltonian on the upper frame", true),
    ] {
        report.record(name, || {
            if !input.involutive {
                return Outcome::Skip(skip.into());
            }
            for i in 0..fr.n {
                let run = || -> VaResult<LambdaPoly> {
                    let hp = calc.h_prime()?;
                    let e = if side { &fr.e_up[i] } else { &fr.e_dn[i] };
                    let p = eng.lambda_bracket(&hp, &eng.embed_section(e))?;
                    let rhs = calc
                        .h0_action_rhs(i, side)?
                        .add(&calc.h_prime_correction(i, side));
                    Ok(p.sub(&rhs))
                };
                match run() {
                    Ok(res) if res.is_zero() => {}
                    Ok(res) => return lpoly_outcome(eng, &res),
                    Err(e) => return Outcome::Fail(format!("engine error: {e}")),
                }
            }
            Outcome::Pass
        });
    }
    report.record("current self-bracket with dilaton tail", || {
        if !input.involutive {
            return Outcome::Skip(skip.into());
        }
        let run = || -> VaResult<LambdaPoly> {
            let j0 = calc.j0()?;
            let su = eng.s_deriv(&eng.embed_section(&fr.epsilon))?;
            let j = j0.sub(&su.scale(&ScalarExpr::i()));
            let h = eng.eval(&build_h(fr, HMode::General))?;
            let c = central_charge(fr);
            let mut rhs = LambdaPoly::constant(h);
            rhs.add_term((1, true), State::scalar(c.scale_ratio(1, 3)));
            Ok(eng.lambda_bracket(&j, &j)?.add(&rhs))
        };
        match run() {
            Ok(res) => lpoly_outcome(eng, &res),
            Err(e) => Outcome::Fail(format!("engine error: {e}")),
        }
    });
    let skip_u = "dilaton not declared central";
    for (name, first) in [
        ("dilaton against the corrected Hamiltonian", true),
        ("corrected Hamiltonian against the dilaton", false),
    ] {
        report.record(name, || {
            if !input.involutive {
                return Outcome::Skip(skip.into());
            }
            if !input.central_dilaton {
                return Outcome::Skip(skip_u.into());
            }
            let run = || -> VaResult<LambdaPoly> {
                let hp = calc.h_prime()?;
                let u = eng.embed_section(&fr.epsilon);
                let (a, b) = calc.dilaton_h_rhs()?;
                if first {
                    Ok(eng.lambda_bracket(&u, &hp)?.sub(&a))
                } else {
                    Ok(eng.lambda_bracket(&hp, &u)?.sub(&b))
                }
            };
            match run() {
                Ok(res) => lpoly_outcome(eng, &res),
                Err(e) => Outcome::Fail(format!("engine error: {e}")),
            }
        });
    }
    report.record("double translate of the curvature obstruction", || {
        if !input.involutive {
            return Outcome::Skip(skip.into());
        }
        if !input.weak_divergence {
            return Outcome::Skip("transverse divergence equation not declared".into());
        }
        if !input.central_dilaton {
            return Outcome::Skip(skip_u.into());
        }
        let run = || -> VaResult<State> {
            let rf = build_r_f(fr);
            let rr = eng.embed_scalar(&rf.r);
            let lhs = eng.t_deriv(&eng.t_deriv(&rr)?)?.scale_int(3);
            let mut fsum = State::zero();
            for i in 0..fr.n {
                for j in 0..fr.n {
                    if !rf.f_upper[i][j].is_zero() {
                        fsum = fsum.add(&eng.nop(
                            &eng.embed_scalar(&rf.f_upper[i][j]),
                            &eng.nop(
                                &eng.embed_section(&fr.e_dn[j]),
                                &eng.embed_section(&fr.e_dn[i]),
                            )?,
                        )?);
                    }
                    if !rf.f_lower[i][j].is_zero() {
                        fsum = fsum.sub(&eng.nop(
                            &eng.embed_scalar(&rf.f_lower[i][j]),
                            &eng.nop(
                                &eng.embed_section(&fr.e_up[j]),
                                &eng.embed_section(&fr.e_up[i]),
                            )?,
                        )?);
                    }
                }
            }
            Ok(lhs.sub(&eng.t_deriv(&fsum)?))
        };
        match run() {
            Ok(res) => state_outcome(eng, &res),
            Err(e) => Outcome::Fail(format!("engine error: {e}")),
        }
    });
    report
}
