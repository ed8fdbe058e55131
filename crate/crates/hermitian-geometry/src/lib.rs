//! Exact Hermitian geometry on a complex chart: Lee form, torsion
//! bivector, Bismut Ricci forms, adapted isotropic frames, moment-map
//! sections, and the residuals of the two coupled PDE systems — all with
//! exact scalar coefficients over the shared symbol ring.

pub mod dterm;
pub mod fixtures;
pub mod frames;
pub mod geometry;
pub mod systems;
pub mod tensor;

pub use dterm::{dterm_residual, inv_metric_apply, mu_closed_form, mu_direct, phi_form};
pub use fixtures::{
    c2_soliton, coupled_flat, default_charges, diag_uv, flat, hyperbolic_cylinder, iwasawa,
    GeoFixture, NilCharges,
};
pub use frames::{
    build_frames, coupled_epsilon, ell_projection_defect, section_of_form, section_of_vector,
    sigma_pm, FrameSet,
};
pub use geometry::{
    bismut_ricci, bismut_ricci20, codifferential_omega, hermitian_form, j_one_form, lambda_f,
    lambda_f_norm, lee_form, lee_form_raw, lee_structure_residual, omega_power,
    sigma_rho_residual, split_types, torsion_sigma, HgError, HgResult,
};
pub use systems::{system_residuals, GeoReport, SystemKind};
pub use tensor::{TensorField, TensorTag};
