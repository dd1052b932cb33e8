//! Pointwise analysis of `z -> |(A - zI)^{-1}|`.
//!
//! At a point `z` of the resolvent set we take a unit vector `psi` with
//! `|R psi| = |R|` (`R = R_A(z)`) and form
//!
//! ```text
//! alpha = <R psi, R^2 psi>,   beta = |R^2 psi|^2,   gamma = <R psi, R^3 psi>
//! ```
//!
//! with the inner product conjugate-linear in its first slot. These are the
//! first- and second-order coefficients of `|R(zeta) psi|^2` around `z`:
//!
//! ```text
//! |R(zeta) psi|^2 = |R psi|^2 + 2 Re[h alpha] + |h|^2 beta + 2 Re[h^2 gamma] + O(|h|^3),  h = zeta - z
//! ```
//!
//! so `alpha != 0` gives linear growth along `h = a e^{-i arg(alpha)}`,
//! `alpha = 0, gamma != 0` gives quadratic growth along `h = a e^{-i arg(gamma)/2}`,
//! and `alpha = gamma = 0` makes `z` a local minimum (`beta > 0` always holds
//! for matrices).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::json;
use crate::matrix::{ComplexMatrix, ComplexVector, EigenSet, Nearest, ShiftedFactor};

/// Relative gap between the two largest singular values of `R` below which
/// the maximizing vector is flagged as non-unique.
pub const DEGENERACY_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GrowthCase {
    #[serde(rename = "linear")]
    LinearGrowth,
    #[serde(rename = "quadratic")]
    QuadraticGrowth,
    #[serde(rename = "local_min")]
    LocalMinimum,
}

impl GrowthCase {
    /// Exponent of the guaranteed growth: 1 for the linear case, 2 otherwise.
    pub fn exponent(self) -> f64 {
        match self {
            GrowthCase::LinearGrowth => 1.0,
            GrowthCase::QuadraticGrowth | GrowthCase::LocalMinimum => 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GrowthCase::LinearGrowth => "linear",
            GrowthCase::QuadraticGrowth => "quadratic",
            GrowthCase::LocalMinimum => "local_min",
        }
    }
}

impl std::str::FromStr for GrowthCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(GrowthCase::LinearGrowth),
            "quadratic" => Ok(GrowthCase::QuadraticGrowth),
            "local_min" => Ok(GrowthCase::LocalMinimum),
            other => Err(Error::invalid(format!("unknown growth case {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantities {
    pub alpha: Complex64,
    pub beta: f64,
    pub gamma: Complex64,
}

/// Everything known about the resolvent at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventPoint {
    #[serde(with = "json::complex")]
    pub z: Complex64,
    pub norm: f64,
    pub sigma_min: f64,
    #[serde(with = "json::complex_dvector")]
    pub psi: ComplexVector,
    #[serde(with = "json::complex")]
    pub alpha: Complex64,
    pub beta: f64,
    #[serde(with = "json::complex")]
    pub gamma: Complex64,
    pub case: GrowthCase,
    pub theta0: Option<f64>,
    pub spectral_distance: f64,
    pub degenerate: bool,
}

impl ResolventPoint {
    pub fn quantities(&self) -> Quantities {
        Quantities { alpha: self.alpha, beta: self.beta, gamma: self.gamma }
    }

    /// Unit ascent direction `e^{-i theta0}`, when the case provides one.
    pub fn direction(&self) -> Option<Complex64> {
        self.theta0.map(ascent_direction)
    }

    pub fn to_json(&self) -> Result<String> {
        json::to_string(self)
    }
}

/// `e^{-i theta}`: the segment `[z, z + a e^{-i theta}]` is where growth happens.
pub fn ascent_direction(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, -theta)
}

/// Principal argument in `(-pi, pi]`.
pub fn principal_arg(z: Complex64) -> f64 {
    let t = z.arg();
    if t <= -PI {
        t + 2.0 * PI
    } else {
        t
    }
}

/// Chooses the growth case and `theta0` from the quantities at a point.
///
/// `alpha` counts as zero when `|alpha| <= tol_zero |R|^3`, `gamma` when
/// `|gamma| <= tol_zero |R|^4`; these are the natural scales of the two
/// inner products.
pub fn classify(q: &Quantities, norm: f64, tol_zero: f64) -> (GrowthCase, Option<f64>) {
    if q.alpha.norm() > tol_zero * norm.powi(3) {
        (GrowthCase::LinearGrowth, Some(principal_arg(q.alpha)))
    } else if q.gamma.norm() > tol_zero * norm.powi(4) {
        (GrowthCase::QuadraticGrowth, Some(0.5 * principal_arg(q.gamma)))
    } else {
        (GrowthCase::LocalMinimum, None)
    }
}

/// A matrix together with its spectrum, ready for repeated pointwise queries.
#[derive(Debug, Clone)]
pub struct Resolvent<'a> {
    a: &'a ComplexMatrix,
    spectrum: EigenSet,
    tol: Tolerances,
}

impl<'a> Resolvent<'a> {
    pub fn new(a: &'a ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(a, Tolerances::default())
    }

    pub fn with_tolerances(a: &'a ComplexMatrix, tol: Tolerances) -> Result<Self> {
        tol.validate()?;
        let spectrum = a.eigenvalues_with(&tol)?;
        Ok(Resolvent { a, spectrum, tol })
    }

    pub fn matrix(&self) -> &'a ComplexMatrix {
        self.a
    }

    pub fn spectrum(&self) -> &EigenSet {
        &self.spectrum
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn spectral_distance(&self, z: Complex64) -> f64 {
        self.spectrum.distance(z)
    }

    pub fn nearest_eigenvalue(&self, z: Complex64) -> Nearest {
        self.spectrum.nearest(z)
    }

    /// `sigma_min(A - zI)`; zero is a legal answer here.
    pub fn sigma_min(&self, z: Complex64) -> Result<f64> {
        crate::matrix::check_scalar(z, "z")?;
        crate::matrix::sigma_min_of(self.a.shifted(z))
    }

    /// `|R_A(z)| = 1 / sigma_min(A - zI)`.
    pub fn norm(&self, z: Complex64) -> Result<f64> {
        let s = self.sigma_min(z)?;
        if s <= self.tol.singular {
            return Err(Error::NearSingular { z, sigma_min: s });
        }
        Ok(1.0 / s)
    }

    /// `|R_A(z)|` where points of (or numerically on) the spectrum map to a
    /// huge finite value instead of an error. Used by the sampling code.
    pub fn norm_saturating(&self, z: Complex64) -> Result<f64> {
        Ok(1.0 / self.sigma_min(z)?.max(f64::MIN_POSITIVE))
    }

    pub fn factor(&self, z: Complex64) -> Result<ShiftedFactor> {
        self.a.factor_shifted(z, &self.tol)
    }

    /// Unit `psi` with `|R psi| = |R|`: the left singular vector of `A - zI`
    /// for its smallest singular value, phase-normalized.
    pub fn norm_determining_vector(&self, z: Complex64) -> Result<ComplexVector> {
        Ok(self.singular_data(z)?.psi)
    }

    /// `(alpha, beta, gamma)` via three successive shifted solves.
    pub fn quantities(&self, z: Complex64, psi: &ComplexVector) -> Result<Quantities> {
        quantities_with(&self.factor(z)?, psi)
    }

    /// `|R(z) psi|^2` by a direct solve.
    pub fn image_norm_sq(&self, z: Complex64, psi: &ComplexVector) -> Result<f64> {
        Ok(self.factor(z)?.solve(psi)?.norm_squared())
    }

    pub fn analyze(&self, z: Complex64) -> Result<ResolventPoint> {
        let sd = self.singular_data(z)?;
        let factor = self.factor(z)?;
        let q = quantities_with(&factor, &sd.psi)?;
        let norm = 1.0 / sd.sigma_min;
        let (case, theta0) = classify(&q, norm, self.tol.zero);
        Ok(ResolventPoint {
            z,
            norm,
            sigma_min: sd.sigma_min,
            psi: sd.psi,
            alpha: q.alpha,
            beta: q.beta,
            gamma: q.gamma,
            case,
            theta0,
            spectral_distance: self.spectral_distance(z),
            degenerate: sd.degenerate,
        })
    }

    fn singular_data(&self, z: Complex64) -> Result<SingularData> {
        crate::matrix::check_scalar(z, "z")?;
        let m = ComplexMatrix::from_dmatrix(self.a.shifted(z))?;
        let svd = m.svd()?;
        let (sigma_min, psi) = svd.smallest_pair();
        if sigma_min <= self.tol.singular {
            return Err(Error::NearSingular { z, sigma_min });
        }
        let n = svd.singular_values.len();
        // Top two singular values of R are 1/s[n-1] >= 1/s[n-2].
        let degenerate = n > 1 && 1.0 - sigma_min / svd.singular_values[n - 2] < DEGENERACY_GAP;
        Ok(SingularData { sigma_min, psi, degenerate })
    }
}

struct SingularData {
    sigma_min: f64,
    psi: ComplexVector,
    degenerate: bool,
}

fn quantities_with(factor: &ShiftedFactor, psi: &ComplexVector) -> Result<Quantities> {
    let r1 = factor.solve(psi)?;
    let r2 = factor.solve(&r1)?;
    let r3 = factor.solve(&r2)?;
    Ok(Quantities { alpha: r1.dotc(&r2), beta: r2.norm_squared(), gamma: r1.dotc(&r3) })
}

pub fn resolvent_norm(a: &ComplexMatrix, z: Complex64) -> Result<f64> {
    let tol = Tolerances::default();
    crate::matrix::check_scalar(z, "z")?;
    let s = crate::matrix::sigma_min_of(a.shifted(z))?;
    if s <= tol.singular {
        return Err(Error::NearSingular { z, sigma_min: s });
    }
    Ok(1.0 / s)
}

pub fn norm_determining_vector(a: &ComplexMatrix, z: Complex64) -> Result<ComplexVector> {
    Resolvent::new(a)?.norm_determining_vector(z)
}

pub fn compute_quantities(a: &ComplexMatrix, z: Complex64, psi: &ComplexVector) -> Result<Quantities> {
    quantities_with(&a.factor_shifted(z, &Tolerances::default())?, psi)
}

pub fn analyze_point(a: &ComplexMatrix, z: Complex64) -> Result<ResolventPoint> {
    Resolvent::new(a)?.analyze(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e(n: usize, k: usize) -> ComplexVector {
        let mut v = ComplexVector::zeros(n);
        v[k] = c(1.0, 0.0);
        v
    }

    fn diag03() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[c(0.0, 0.0), c(3.0, 0.0)]).unwrap()
    }

    fn shift(weights: &[f64]) -> ComplexMatrix {
        let w: Vec<Complex64> = weights.iter().map(|&x| c(x, 0.0)).collect();
        zoo::circulant_weighted_shift(&zoo::WeightSequence::new(w).unwrap()).unwrap()
    }

    fn angle_diff(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    }

    #[test]
    fn resolvent_norm_examples() {
        assert!((resolvent_norm(&diag03(), c(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((resolvent_norm(&diag03(), c(2.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((resolvent_norm(&shift(&[2.0, 1.0]), c(0.0, 0.0)).unwrap() - 2.0).abs() < 1e-14);
        assert!(matches!(resolvent_norm(&diag03(), c(3.0, 0.0)), Err(Error::NearSingular { .. })));
    }

    #[test]
    fn norm_determining_vector_examples() {
        let psi = norm_determining_vector(&diag03(), c(1.0, 0.0)).unwrap();
        assert!((psi - e(2, 0)).norm() < 1e-14);
        let psi = norm_determining_vector(&shift(&[2.0, 1.0]), c(0.0, 0.0)).unwrap();
        assert!((psi - e(2, 1)).norm() < 1e-12);
        let psi = norm_determining_vector(&ComplexMatrix::identity(2).unwrap(), c(0.0, 0.0)).unwrap();
        assert!((psi - e(2, 0)).norm() < 1e-14);
    }

    #[test]
    fn quantities_examples() {
        let q = compute_quantities(&shift(&[2.0, 1.0]), c(0.0, 0.0), &e(2, 1)).unwrap();
        assert!(q.alpha.norm() < 1e-12);
        assert!((q.beta - 4.0).abs() < 1e-12);
        assert!((q.gamma - c(8.0, 0.0)).norm() < 1e-12);

        let q = compute_quantities(&shift(&[2.0, 1.0, 1.0, 1.0]), c(0.0, 0.0), &e(4, 3)).unwrap();
        assert!(q.alpha.norm() < 1e-12);
        assert!(q.gamma.norm() < 1e-12);
        assert!((q.beta - 4.0).abs() < 1e-12);

        let q = compute_quantities(&diag03(), c(1.0, 0.0), &e(2, 0)).unwrap();
        assert!((q.alpha - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((q.beta - 1.0).abs() < 1e-15);
        assert!((q.gamma - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn classification_examples() {
        let p = analyze_point(&diag03(), c(1.0, 0.0)).unwrap();
        assert_eq!(p.case, GrowthCase::LinearGrowth);
        assert!(angle_diff(p.theta0.unwrap(), PI) < 1e-12);
        assert!((p.direction().unwrap() - c(-1.0, 0.0)).norm() < 1e-12);

        let p = analyze_point(&shift(&[2.0, 1.0]), c(0.0, 0.0)).unwrap();
        assert_eq!(p.case, GrowthCase::QuadraticGrowth);
        assert!(p.theta0.unwrap().abs() < 1e-9);

        let p = analyze_point(&shift(&[2.0, 1.0, 1.0, 1.0]), c(0.0, 0.0)).unwrap();
        assert_eq!(p.case, GrowthCase::LocalMinimum);
        assert_eq!(p.theta0, None);
        assert!((p.beta - 4.0).abs() < 1e-12);
    }

    #[test]
    fn analyze_point_examples() {
        let p = analyze_point(&ComplexMatrix::identity(3).unwrap(), c(0.0, 0.0)).unwrap();
        assert!((p.norm - 1.0).abs() < 1e-15);
        assert_eq!(p.case, GrowthCase::LinearGrowth);
        assert!(p.theta0.unwrap().abs() < 1e-15);
        assert!(p.degenerate);

        let p = analyze_point(&zoo::remark42_diagonal(2).unwrap(), c(1.5, 0.0)).unwrap();
        assert!((p.norm - 1.0).abs() < 1e-14);
        assert!((p.spectral_distance - 1.0).abs() < 1e-14);
    }

    #[test]
    fn principal_arg_excludes_minus_pi() {
        assert_eq!(principal_arg(c(-1.0, -0.0)), PI);
        assert_eq!(principal_arg(c(-1.0, 0.0)), PI);
    }

    #[test]
    fn classify_uses_relative_thresholds() {
        let q = Quantities { alpha: c(1e-3, 0.0), beta: 1.0, gamma: c(0.0, 0.0) };
        assert_eq!(classify(&q, 1.0, 1e-9).0, GrowthCase::LinearGrowth);
        // Same alpha is negligible at |R| = 1e3.
        assert_eq!(classify(&q, 1e3, 1e-9).0, GrowthCase::LocalMinimum);
        let q = Quantities { alpha: c(0.0, 0.0), beta: 1.0, gamma: c(0.0, -2.0) };
        let (case, theta) = classify(&q, 1.0, 1e-9);
        assert_eq!(case, GrowthCase::QuadraticGrowth);
        assert!((theta.unwrap() + PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn case_names_round_trip() {
        for case in [GrowthCase::LinearGrowth, GrowthCase::QuadraticGrowth, GrowthCase::LocalMinimum] {
            assert_eq!(case.as_str().parse::<GrowthCase>().unwrap(), case);
        }
        assert!("cubic".parse::<GrowthCase>().is_err());
    }

    #[test]
    fn point_json_shape() {
        let p = analyze_point(&diag03(), c(1.0, 0.0)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json().unwrap()).unwrap();
        for key in ["z", "norm", "sigma_min", "psi", "alpha", "beta", "gamma", "case", "theta0", "spectral_distance", "degenerate"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["case"], "linear");
        let p = analyze_point(&shift(&[2.0, 1.0, 1.0, 1.0]), c(0.0, 0.0)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json().unwrap()).unwrap();
        assert!(v["theta0"].is_null());
        assert_eq!(v["case"], "local_min");
    }
}
