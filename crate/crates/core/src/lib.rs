//! Matrix Lagrangians built from Dirac gamma matrices.
//!
//! The crate constructs matrices whose eigenvalues reproduce classical
//! Lagrangians (point particles, Maxwell and Yang–Mills fields, the
//! Einstein–Hilbert density, strings and membranes), checks the gamma-matrix
//! identities behind those statements, and integrates the matrix equations of
//! motion for a point particle alongside ordinary geodesics.
//!
//! Modules, bottom up:
//!
//! * [`linalg`]: 4×4 complex matrices and their eigenvalues
//! * [`clifford`]: gamma matrices, `γ^{ab}`, `γ^{abc}` and their identities
//! * [`geometry`]: metrics, vielbeins, Christoffel symbols, curvature
//! * [`lagrangians`]: the matrix Lagrangians and closed-form spectra
//! * [`dynamics`]: the vielbein curl `f_{μν}`, the modified equations of motion
//!   and trajectory integration

pub mod clifford;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod lagrangians;
pub mod linalg;

pub use error::{Error, Result};

/// TOML text of the checked-in geometry with nonzero `(f*f)` at the origin.
pub const FSF_FIXTURE_TOML: &str = include_str!("../fixtures/fsf_geometry.toml");
