//! Verification layer: named residual checks over the vertex algebra
//! engine and the geometric fixtures, assembled into deterministic,
//! machine-readable reports.
//!
//! Every check computes an exact symbolic residual; a failing entry
//! carries the fully normalized residual so it can be reproduced
//! independently.

mod checks;
mod identities;
mod intermediate;
mod properties;
mod render;
mod report;
mod two_chart;

pub use checks::{
    check_dterm, check_fterm, check_frames, check_superconformal, lpoly_outcome, state_outcome,
    DtermMode, ScLevel,
};
pub use identities::{run_identity_suite, SuiteInput};
pub use intermediate::{check_intermediate, IntermediateInput};
pub use properties::{run_property_suite, PropertyConfig};
pub use render::{render_lpoly, render_scalar, render_section, render_state};
pub use report::{CheckEntry, Outcome, Report, Status};
pub use two_chart::check_two_chart;
