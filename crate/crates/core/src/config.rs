//! Numerical tolerances and sampling parameters.
//!
//! Every knob has a documented default; a JSON file may override any subset
//! of them (`{"tol_zero": 1e-8, "s_cert": 257}`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances shared by the linear algebra and analysis layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative SVD reconstruction / orthonormality tolerance.
    pub svd: f64,
    /// Relative (normwise backward) residual accepted from a shifted solve.
    pub solve: f64,
    /// Eigenvalue certificate: `sigma_min(A - lambda I) <= eig * max(1, |A|)`.
    pub eig: f64,
    /// `sigma_min(A - zI)` at or below this is treated as "z in the spectrum".
    pub singular: f64,
    /// Relative threshold for deciding that alpha or gamma vanishes.
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            svd: 1e-10,
            solve: 1e-10,
            eig: 1e-8,
            singular: 1e-12,
            zero: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [self.svd, self.solve, self.eig, self.singular, self.zero];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(Error::invalid("all tolerances must be positive and finite"))
        }
    }
}

/// Everything a CLI run depends on besides its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tol_svd: f64,
    pub tol_solve: f64,
    pub tol_eig: f64,
    pub tol_singular: f64,
    pub tol_zero: f64,
    /// Feasibility samples per trial segment in the path search.
    pub s_seg: usize,
    /// Samples per segment when certifying a finished path.
    pub s_cert: usize,
    pub max_steps: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let tol = Tolerances::default();
        RunConfig {
            tol_svd: tol.svd,
            tol_solve: tol.solve,
            tol_eig: tol.eig,
            tol_singular: tol.singular,
            tol_zero: tol.zero,
            s_seg: 33,
            s_cert: 129,
            max_steps: 10_000,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            svd: self.tol_svd,
            solve: self.tol_solve,
            eig: self.tol_eig,
            singular: self.tol_singular,
            zero: self.tol_zero,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances().validate()?;
        if self.s_seg < 2 || self.s_cert <= self.s_seg {
            return Err(Error::invalid("need s_seg >= 2 and s_cert > s_seg"));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps must be positive"));
        }
        Ok(())
    }
}
