//! Isentropic gas flow in a pipe whose cross-section varies periodically.
//!
//! The crate pairs a fine-scale finite-volume solver for the
//! variable-cross-section equations with a pseudospectral solver for the
//! constant-coefficient homogenized system, and provides the machinery that
//! connects the two: averaging operators, the coefficient tables, linear
//! dispersion analysis and a comparison harness.

pub mod averaging;
pub mod dispersion;
pub mod error;
pub mod fourier;
pub mod fvm;
pub mod harness;
pub mod homogenize;
pub mod medium;
pub mod snapshot;
pub mod spectral;

pub use error::{Error, Result};
pub use homogenize::{BracketCoefficients, HomogCoefficients};
pub use medium::{CrossSectionProfile, GasModel, ProfileKind};
