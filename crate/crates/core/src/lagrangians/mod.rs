//! Matrix Lagrangians and their closed-form spectra.
//!
//! Each builder returns a [`SpinMatrix`]; the matching `*_spectrum` function
//! gives the predicted eigenvalues without touching the eigensolver, so the two
//! can be compared independently.

mod extended;
mod gauge;
mod gravity;
mod particle;

pub use extended::{
    induced_metric, membrane_matrix, membrane_square_residuals, nambu_bracket, nambu_goto_lagrangian, poisson_bracket,
    string_matrix, string_square_residuals, SquareResiduals, WorldvolumeJacobian,
};
pub use gauge::{
    electrodynamics_decomposition_residual, electrodynamics_matrix, electrodynamics_spectrum,
    field_strength_from_potential, hodge_dual_2form, theta_report, yang_mills_decomposition_residual,
    yang_mills_matrix, yang_mills_spectrum, FieldStrength, NonabelianFieldStrength, ThetaConvention,
    YANG_MILLS_PREFACTOR,
};
pub use gravity::{gr_matrix, gr_matrix_unchecked, GR_SCALAR_TOLERANCE};
pub use particle::{point_particle_matrix, point_particle_spectrum, ParticleState, Potential};
