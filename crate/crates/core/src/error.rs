use num_complex::Complex64;
use thiserror::Error;

use crate::pseudospectrum::PolyPath;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("decomposition failed: {0}")]
    Decomposition(&'static str),

    /// `z` lies within `tol_singular` of the spectrum.
    #[error("A - zI is numerically singular at z = {z} (sigma_min = {sigma_min:e})")]
    NearSingular { z: Complex64, sigma_min: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// Path search gave up; the vertices reached so far are kept.
    #[error("path search failed: {reason}")]
    SearchFailure { reason: String, partial: Box<PolyPath> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
