//! Growth of the resolvent norm `z -> |(A - zI)^{-1}|` for dense complex
//! matrices.
//!
//! * [`matrix`]: the matrix type and its decompositions.
//! * [`resolvent`]: norm-determining vectors, the coefficients
//!   `alpha, beta, gamma`, growth case and direction at a point.
//! * [`growth`]: sampled verification of linear / quadratic growth, local
//!   minima and the second-order expansion.
//! * [`zoo`]: diagonal, Jordan, random and circulant weighted-shift families.
//! * [`pseudospectrum`]: grids, component labeling and certified paths to
//!   eigenvalues.

pub mod config;
pub mod error;
pub mod growth;
pub mod json;
pub mod matrix;
pub mod pseudospectrum;
pub mod resolvent;
pub mod zoo;

pub use config::{RunConfig, Tolerances};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, ComplexScalar, ComplexVector, EigenSet, SvdResult};
pub use resolvent::{analyze_point, resolvent_norm, GrowthCase, Quantities, Resolvent, ResolventPoint};
