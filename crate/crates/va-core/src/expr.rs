//! A small expression tree over the vertex algebra operations, evaluated
//! into canonical states by an [`Engine`](crate::Engine).

use crate::engine::{Engine, VaResult};
use crate::lpoly::LambdaPoly;
use crate::state::State;
use algebroid::SectionExpr;
use scalar_ring::{GaussRat, ScalarExpr};

#[derive(Clone, Debug)]
pub enum VaExpr {
    Vacuum,
    Scalar(ScalarExpr),
    Section(SectionExpr),
    Nop(Box<VaExpr>, Box<VaExpr>),
    SDeriv(Box<VaExpr>),
    TDeriv(Box<VaExpr>),
    Sum(Vec<VaExpr>),
    Scale(GaussRat, Box<VaExpr>),
}

impl VaExpr {
    pub fn nop(a: VaExpr, b: VaExpr) -> VaExpr {
        VaExpr::Nop(Box::new(a), Box::new(b))
    }

    pub fn s(a: VaExpr) -> VaExpr {
        VaExpr::SDeriv(Box::new(a))
    }

    pub fn t(a: VaExpr) -> VaExpr {
        VaExpr::TDeriv(Box::new(a))
    }

    pub fn scale(g: GaussRat, a: VaExpr) -> VaExpr {
        VaExpr::Scale(g, Box::new(a))
    }
}

impl<'a> Engine<'a> {
    /// Evaluate an expression tree into a canonical state.
    pub fn eval(&self, e: &VaExpr) -> VaResult<State> {
        match e {
            VaExpr::Vacuum => Ok(State::vacuum()),
            VaExpr::Scalar(f) => Ok(self.embed_scalar(f)),
            VaExpr::Section(a) => Ok(self.embed_section(a)),
            VaExpr::Nop(a, b) => {
                let sa = self.eval(a)?;
                let sb = self.eval(b)?;
                self.nop(&sa, &sb)
            }
            VaExpr::SDeriv(a) => {
                let sa = self.eval(a)?;
                self.s_deriv(&sa)
            }
            VaExpr::TDeriv(a) => {
                let sa = self.eval(a)?;
                self.t_deriv(&sa)
            }
            VaExpr::Sum(es) => {
                let mut out = State::zero();
                for x in es {
                    out = out.add(&self.eval(x)?);
                }
                Ok(out)
            }
            VaExpr::Scale(g, a) => Ok(self.eval(a)?.scale_gauss(g)),
        }
    }

    /// Evaluate the Λ-bracket of two expression trees.
    pub fn eval_bracket(&self, a: &VaExpr, b: &VaExpr) -> VaResult<LambdaPoly> {
        let sa = self.eval(a)?;
        let sb = self.eval(b)?;
        self.lambda_bracket(&sa, &sb)
    }
}
