//! Dense complex linear algebra: the matrix type, SVD, eigenvalues and
//! shifted solves `(A - zI) x = b`.
//!
//! Factorizations are delegated to `nalgebra`; this module adds validation,
//! deterministic conventions (ordering, phases) and residual certificates.

use std::path::Path;

use nalgebra::{DMatrix, DVector, Dyn, Schur, LU, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::json;

pub type ComplexScalar = Complex64;
pub type ComplexVector = DVector<Complex64>;

/// Dense, square, finite, nonempty complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

/// Full SVD `M = U diag(s) V*`, singular values nonincreasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    /// Left singular vectors as columns.
    pub left: DMatrix<Complex64>,
    /// Right singular vectors as columns.
    pub right: DMatrix<Complex64>,
}

/// Eigenvalues with multiplicity, in the order the Schur form produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSet {
    eigenvalues: Vec<Complex64>,
}

/// Nearest eigenvalue to a query point; ties go to the smallest index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nearest {
    pub index: usize,
    pub value: Complex64,
    pub distance: f64,
}

/// On-disk matrix format: `{"n": 2, "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<[f64; 2]>,
}

fn max_svd_iterations(n: usize) -> usize {
    1_000 + 500 * n
}

pub(crate) fn check_scalar(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Multiplies `v` by a unit phase so that its first component of largest
/// modulus is real and positive.
pub fn normalize_phase(v: &ComplexVector) -> ComplexVector {
    let Some(k) = leading_index(v) else {
        return v.clone();
    };
    let lead = v[k];
    if lead.norm() == 0.0 {
        return v.clone();
    }
    let phase = lead.conj() / lead.norm();
    v.map(|x| x * phase)
}

/// Index of the first component whose modulus is maximal, up to a relative
/// slack of 1e-12 so that exact ties do not depend on rounding.
fn leading_index(v: &ComplexVector) -> Option<usize> {
    let max = v.iter().map(|x| x.norm()).fold(0.0_f64, f64::max);
    v.iter().position(|x| x.norm() >= max * (1.0 - 1e-12))
}

fn svd_of(m: DMatrix<Complex64>, vectors: bool) -> Result<SVD<Complex64, Dyn, Dyn>> {
    let n = m.nrows();
    SVD::try_new(m, vectors, vectors, f64::EPSILON, max_svd_iterations(n))
        .ok_or(Error::Decomposition("SVD did not converge"))
}

/// Smallest singular value of an arbitrary square matrix.
pub(crate) fn sigma_min_of(m: DMatrix<Complex64>) -> Result<f64> {
    let svd = svd_of(m, false)?;
    Ok(svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min))
}

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        if m.nrows() != m.ncols() {
            return Err(Error::invalid(format!("matrix must be square, got {}x{}", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(ComplexMatrix { inner: m })
    }

    pub fn from_row_major(n: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::invalid(format!("expected {} entries for n = {n}, got {}", n * n, entries.len())));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(n, n, entries))
    }

    /// Real row-major entries, for tests and small hand-written examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let entries: Vec<Complex64> = rows.iter().flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0))).collect();
        Self::from_row_major(n, &entries)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        Self::from_dmatrix(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_dmatrix(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    /// `A - zI` as a plain matrix.
    pub fn shifted(&self, z: Complex64) -> DMatrix<Complex64> {
        let mut m = self.inner.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= z;
        }
        m
    }

    pub fn row_major_entries(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.inner[(i, j)]).collect()
    }

    /// Spectral norm.
    pub fn norm2(&self) -> Result<f64> {
        Ok(self.singular_values()?[0])
    }

    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let svd = svd_of(self.inner.clone(), false)?;
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }

    pub fn svd(&self) -> Result<SvdResult> {
        let svd = svd_of(self.inner.clone(), true)?;
        let u = svd.u.ok_or(Error::Decomposition("SVD returned no U"))?;
        let v_t = svd.v_t.ok_or(Error::Decomposition("SVD returned no V*"))?;
        let n = self.dim();

        // nalgebra sorts already; re-sort stably so ties keep decomposition order.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

        let v = v_t.adjoint();
        let singular_values = order.iter().map(|&i| svd.singular_values[i]).collect();
        let left = DMatrix::from_fn(n, n, |r, c| u[(r, order[c])]);
        let right = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
        Ok(SvdResult { singular_values, left, right })
    }

    /// Smallest singular value and its LEFT singular vector `u`
    /// (`M* u = sigma_min v`), phase-normalized.
    ///
    /// For `R = M^{-1}`, `R* R = U S^{-2} U*`, so `u` maximizes `|R psi|`.
    /// When the smallest singular value is tied, the candidate whose leading
    /// component comes first is returned.
    pub fn smallest_singular_pair(&self) -> Result<(f64, ComplexVector)> {
        let svd = self.svd()?;
        Ok(svd.smallest_pair())
    }

    pub fn eigenvalues(&self) -> Result<EigenSet> {
        self.eigenvalues_with(&Tolerances::default())
    }

    /// All eigenvalues, each certified by `sigma_min(A - lambda I) <= tol.eig * max(1, |A|)`.
    pub fn eigenvalues_with(&self, tol: &Tolerances) -> Result<EigenSet> {
        let n = self.dim();
        let eigenvalues: Vec<Complex64> = if n == 1 {
            vec![self.inner[(0, 0)]]
        } else {
            let schur = Schur::try_new(self.inner.clone(), f64::EPSILON, max_svd_iterations(n))
                .ok_or(Error::Decomposition("Schur iteration did not converge"))?;
            let ev = schur
                .eigenvalues()
                .ok_or(Error::Decomposition("complex Schur form is not triangular"))?;
            ev.iter().copied().collect()
        };
        let scale = self.norm2()?.max(1.0);
        for &lambda in &eigenvalues {
            check_scalar(lambda, "eigenvalue")?;
            if sigma_min_of(self.shifted(lambda))? > tol.eig * scale {
                return Err(Error::Decomposition("eigenvalue failed its residual certificate"));
            }
        }
        Ok(EigenSet { eigenvalues })
    }

    /// LU factorization of `A - zI`, refusing numerically singular shifts.
    pub fn factor_shifted(&self, z: Complex64, tol: &Tolerances) -> Result<ShiftedFactor> {
        check_scalar(z, "shift")?;
        let m = self.shifted(z);
        let sigma_min = sigma_min_of(m.clone())?;
        if sigma_min <= tol.singular {
            return Err(Error::NearSingular { z, sigma_min });
        }
        Ok(ShiftedFactor { z, lu: m.clone().lu(), matrix: m, sigma_min, tol_solve: tol.solve })
    }

    /// Solves `(A - zI) x = b`.
    pub fn shifted_solve(&self, z: Complex64, b: &ComplexVector) -> Result<ComplexVector> {
        self.factor_shifted(z, &Tolerances::default())?.solve(b)
    }

    /// Explicit inverse. Only used to build operators from their resolvent
    /// and as a test oracle; analysis code never forms `(A - zI)^{-1}`.
    pub fn inverse(&self, tol: &Tolerances) -> Result<ComplexMatrix> {
        let f = self.factor_shifted(Complex64::new(0.0, 0.0), tol)?;
        let n = self.dim();
        let inv = f.lu.try_inverse().ok_or(Error::NearSingular { z: f.z, sigma_min: f.sigma_min })?;
        let resid = (&self.inner * &inv - DMatrix::<Complex64>::identity(n, n)).norm();
        let cond = self.norm2()? / f.sigma_min;
        if resid > tol.solve * cond.max(1.0) * n as f64 {
            return Err(Error::Decomposition("inverse residual too large"));
        }
        ComplexMatrix::from_dmatrix(inv)
    }

    pub fn to_file_format(&self) -> MatrixFile {
        MatrixFile { n: self.dim(), entries: self.row_major_entries().into_iter().map(json::pair).collect() }
    }

    pub fn from_file_format(f: &MatrixFile) -> Result<Self> {
        let entries: Vec<Complex64> = f.entries.iter().map(|&p| json::from_pair(p)).collect();
        Self::from_row_major(f.n, &entries)
    }

    pub fn to_json(&self) -> Result<String> {
        json::to_string(&self.to_file_format())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file_format(&serde_json::from_str(s)?)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

impl SvdResult {
    pub fn left_vector(&self, i: usize) -> ComplexVector {
        self.left.column(i).into_owned()
    }

    pub fn right_vector(&self, i: usize) -> ComplexVector {
        self.right.column(i).into_owned()
    }

    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let s = DVector::from_iterator(self.singular_values.len(), self.singular_values.iter().map(|&x| Complex64::new(x, 0.0)));
        &self.left * DMatrix::from_diagonal(&s) * self.right.adjoint()
    }

    pub fn smallest_pair(&self) -> (f64, ComplexVector) {
        let n = self.singular_values.len();
        let smin = self.singular_values[n - 1];
        let slack = 1e-13 * self.singular_values[0].max(f64::MIN_POSITIVE);
        let best = (0..n)
            .filter(|&i| self.singular_values[i] - smin <= slack)
            .map(|i| normalize_phase(&self.left_vector(i)))
            .min_by_key(|u| leading_index(u).unwrap_or(usize::MAX))
            .expect("at least one singular value");
        (smin, best)
    }
}

impl EigenSet {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn nearest(&self, z: Complex64) -> Nearest {
        let mut best = Nearest { index: 0, value: self.eigenvalues[0], distance: (z - self.eigenvalues[0]).norm() };
        for (index, &value) in self.eigenvalues.iter().enumerate().skip(1) {
            let distance = (z - value).norm();
            if distance < best.distance {
                best = Nearest { index, value, distance };
            }
        }
        best
    }

    /// `dist(z, sigma(A))`.
    pub fn distance(&self, z: Complex64) -> f64 {
        self.nearest(z).distance
    }

    /// Number of eigenvalues after merging those closer than `tol`.
    pub fn distinct_count(&self, tol: f64) -> usize {
        let mut reps: Vec<Complex64> = Vec::new();
        for &l in &self.eigenvalues {
            if reps.iter().all(|r| (r - l).norm() > tol) {
                reps.push(l);
            }
        }
        reps.len()
    }
}

/// `A - zI` together with its LU factors.
#[derive(Debug, Clone)]
pub struct ShiftedFactor {
    z: Complex64,
    lu: LU<Complex64, Dyn, Dyn>,
    matrix: DMatrix<Complex64>,
    sigma_min: f64,
    tol_solve: f64,
}

impl ShiftedFactor {
    pub fn shift(&self) -> Complex64 {
        self.z
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    /// Solves `(A - zI) x = b` with one step of iterative refinement when
    /// the normwise backward error exceeds `tol_solve`.
    pub fn solve(&self, b: &ComplexVector) -> Result<ComplexVector> {
        if b.len() != self.matrix.nrows() {
            return Err(Error::invalid(format!("vector length {} does not match dimension {}", b.len(), self.matrix.nrows())));
        }
        let mut x = self.lu.solve(b).ok_or(Error::NearSingular { z: self.z, sigma_min: self.sigma_min })?;
        for _ in 0..2 {
            let r = b - &self.matrix * &x;
            if self.backward_error(&r, &x, b) <= self.tol_solve {
                return Ok(x);
            }
            x += self.lu.solve(&r).ok_or(Error::NearSingular { z: self.z, sigma_min: self.sigma_min })?;
        }
        let r = b - &self.matrix * &x;
        if self.backward_error(&r, &x, b) <= self.tol_solve {
            Ok(x)
        } else {
            Err(Error::Decomposition("shifted solve residual too large"))
        }
    }

    fn backward_error(&self, r: &ComplexVector, x: &ComplexVector, b: &ComplexVector) -> f64 {
        let denom = self.matrix.norm() * x.norm() + b.norm();
        if denom == 0.0 {
            0.0
        } else {
            r.norm() / denom
        }
    }
}
