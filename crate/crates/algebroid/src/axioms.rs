//! Exhaustive and randomized checks of the five Courant-algebroid axioms.

use crate::backend::Backend;
use crate::section::{SecId, SectionExpr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalar_ring::ScalarExpr;

/// Outcome of one axiom instance.
#[derive(Clone, Debug)]
pub struct AxiomEntry {
    /// Axiom number, 1–5.
    pub axiom: u8,
    pub description: String,
    pub ok: bool,
}

/// Per-axiom residual report.
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries.iter().filter(|e| !e.ok)
    }

    fn push(&mut self, axiom: u8, description: String, ok: bool) {
        self.entries.push(AxiomEntry {
            axiom,
            description,
            ok,
        });
    }
}

fn axiom1(b: &Backend, x: &SectionExpr, y: &SectionExpr, z: &SectionExpr) -> bool {
    let lhs = b.dorfman(x, &b.dorfman(y, z));
    let rhs = b
        .dorfman(&b.dorfman(x, y), z)
        .add(&b.dorfman(y, &b.dorfman(x, z)));
    lhs.sub(&rhs).is_zero()
}

fn axiom2(b: &Backend, x: &SectionExpr, y: &SectionExpr) -> bool {
    let lhs = b.anchor_vf(&b.dorfman(x, y));
    let rhs = b.anchor_vf(x).lie(b.ctx(), &b.anchor_vf(y));
    lhs.add(&rhs.neg()).is_zero()
}

fn axiom3(b: &Backend, x: &SectionExpr, f: &ScalarExpr, y: &SectionExpr) -> bool {
    let lhs = b.dorfman(x, &y.scale(f));
    let rhs = b
        .dorfman(x, y)
        .scale(f)
        .add(&y.scale(&b.anchor_apply(x, f)));
    lhs.sub(&rhs).is_zero()
}

fn axiom4(b: &Backend, x: &SectionExpr, y: &SectionExpr, z: &SectionExpr) -> bool {
    let lhs = b.anchor_apply(x, &b.pairing(y, z));
    let rhs = b
        .pairing(&b.dorfman(x, y), z)
        .add(&b.pairing(y, &b.dorfman(x, z)));
    lhs.sub(&rhs).is_zero()
}

fn axiom5(b: &Backend, x: &SectionExpr, y: &SectionExpr) -> bool {
    let lhs = b.dorfman(x, y).add(&b.dorfman(y, x));
    let rhs = b.dee(&b.pairing(x, y));
    lhs.sub(&rhs).is_zero()
}

/// Check all five axioms on every basis pair/triple, plus randomized
/// scalar-scaled sections built from the supplied sample scalars.
///
/// `samples` controls the number of randomized instances per axiom.
pub fn check_courant_axioms(
    b: &Backend,
    scalars: &[ScalarExpr],
    seed: u64,
    samples: usize,
) -> AxiomReport {
    let nb = b.n_sections();
    let mut report = AxiomReport::default();
    let basis = |i: usize| SectionExpr::basis(SecId(i as u16));

    for i in 0..nb {
        for j in 0..nb {
            report.push(
                2,
                format!("anchor homomorphism on ({}, {})", b.name(SecId(i as u16)), b.name(SecId(j as u16))),
                axiom2(b, &basis(i), &basis(j)),
            );
            report.push(
                5,
                format!("symmetrization on ({}, {})", b.name(SecId(i as u16)), b.name(SecId(j as u16))),
                axiom5(b, &basis(i), &basis(j)),
            );
            for k in 0..nb {
                report.push(
                    1,
                    format!(
                        "Jacobi on ({}, {}, {})",
                        b.name(SecId(i as u16)),
                        b.name(SecId(j as u16)),
                        b.name(SecId(k as u16))
                    ),
                    axiom1(b, &basis(i), &basis(j), &basis(k)),
                );
                report.push(
                    4,
                    format!(
                        "pairing invariance on ({}, {}, {})",
                        b.name(SecId(i as u16)),
                        b.name(SecId(j as u16)),
                        b.name(SecId(k as u16))
                    ),
                    axiom4(b, &basis(i), &basis(j), &basis(k)),
                );
            }
        }
    }

    for (si, f) in scalars.iter().enumerate() {
        for i in 0..nb {
            for j in 0..nb {
                report.push(
                    3,
                    format!("Leibniz with scalar #{si} on basis pair ({i}, {j})"),
                    axiom3(b, &basis(i), f, &basis(j)),
                );
            }
        }
    }

    // Randomized sections: short combinations of basis sections scaled by
    // sample scalars, exercising the non-tensorial terms of the bracket.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_section = |rng: &mut ChaCha8Rng| {
        let mut s = SectionExpr::zero();
        let terms = rng.gen_range(1..=2);
        for _ in 0..terms {
            let i = rng.gen_range(0..nb);
            let coeff = if scalars.is_empty() || rng.gen_bool(0.4) {
                ScalarExpr::from_int(rng.gen_range(1..=3))
            } else {
                scalars[rng.gen_range(0..scalars.len())].clone()
            };
            s.add_term(SecId(i as u16), coeff);
        }
        s
    };
    for sample in 0..samples {
        let x = random_section(&mut rng);
        let y = random_section(&mut rng);
        let z = random_section(&mut rng);
        report.push(1, format!("Jacobi on random sections #{sample}"), axiom1(b, &x, &y, &z));
        report.push(2, format!("anchor homomorphism on random sections #{sample}"), axiom2(b, &x, &y));
        report.push(4, format!("pairing invariance on random sections #{sample}"), axiom4(b, &x, &y, &z));
        report.push(5, format!("symmetrization on random sections #{sample}"), axiom5(b, &x, &y));
        if !scalars.is_empty() {
            let f = &scalars[sample % scalars.len()];
            report.push(3, format!("Leibniz on random sections #{sample}"), axiom3(b, &x, f, &y));
        }
    }

    // D-duality: ⟨Df, a⟩ = π(a)f for each basis section and sample scalar.
    for (si, f) in scalars.iter().enumerate() {
        let df = b.dee(f);
        for i in 0..nb {
            let ok = b
                .pairing(&df, &basis(i))
                .sub(&b.anchor_apply(&basis(i), f))
                .is_zero();
            report.push(5, format!("derivation duality, scalar #{si}, basis {i}"), ok);
        }
    }

    report
}
