//! An exact calculus for the vertex algebras attached to a Courant
//! algebroid backend: canonical states, the odd derivation `S`, normally
//! ordered products, Λ-brackets, and the Jacobi machinery, all over exact
//! scalar coefficients.

mod engine;
mod expr;
mod lpoly;
mod state;

pub use engine::{Engine, VaError, VaResult};
pub use expr::VaExpr;
pub use lpoly::{mul_bkeys, BKey, BiPoly, LKey, LambdaPoly};
pub use state::{Factor, State, StateDisplay};
