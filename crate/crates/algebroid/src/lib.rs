//! Courant-algebroid backends over the exact scalar ring.
//!
//! A backend supplies an ordered basis of section symbols together with
//! the pairing, the Dorfman bracket and the anchor map.  Three kinds are
//! provided: constant structure tables over a point, the transitive chart
//! model `T + ad P + T*` built from Hermitian patch data, and adapted
//! views of an existing backend in a new (frame) basis.  Axiom and
//! anomaly-residual checkers operate uniformly on all kinds.

mod axioms;
mod backend;
mod form;
mod section;

pub use axioms::{check_courant_axioms, AxiomEntry, AxiomReport};
pub use backend::{bianchi_residual, AlgebroidError, Backend, PatchData, Tag};
pub use form::Form;
pub use section::{SecId, SectionExpr, VectorField};
