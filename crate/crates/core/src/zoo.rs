//! Matrix families used throughout the tests, examples and CLI.
//!
//! The weighted shifts are stored through their inverse: the circulant
//! matrix `M` with `M[j, (j-1) mod N] = a_j` plays the role of `R_A(0)`, and
//! the operator itself is `A = M^{-1}`. Circulant wrap-around keeps `M`
//! invertible (a plain truncation would be nilpotent) while keeping
//! `M* M = diag(|a_{(j+1) mod N}|^2)`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Identifier of the generator behind [`random_dense`]: ChaCha8 seeded with
/// `seed_from_u64`, entries `(x + iy)` with `x, y ~ N(0, 1/2)` drawn in
/// row-major order, real part first.
pub const RANDOM_ALGORITHM: &str = "rand_chacha::ChaCha8Rng/seed_from_u64+rand_distr::Normal(0,sqrt(1/2))";

/// Nonzero weights `a_0, ..., a_{N-1}`, `N >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence(Vec<Complex64>);

impl WeightSequence {
    pub fn new(weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::invalid("a weight sequence needs at least two weights"));
        }
        if let Some(j) = weights.iter().position(|w| w.norm() == 0.0) {
            return Err(Error::invalid(format!("weight a_{j} is zero")));
        }
        if weights.iter().any(|w| !(w.re.is_finite() && w.im.is_finite())) {
            return Err(Error::NonFinite("weights"));
        }
        Ok(WeightSequence(weights))
    }

    pub fn from_real(weights: &[f64]) -> Result<Self> {
        Self::new(weights.iter().map(|&w| Complex64::new(w, 0.0)).collect())
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn diagonal_normal(entries: &[Complex64]) -> Result<ComplexMatrix> {
    if entries.is_empty() {
        return Err(Error::invalid("diagonal needs at least one entry"));
    }
    ComplexMatrix::from_diagonal(entries)
}

/// `diag(j + i (-1)^j sqrt(3)/2)`, `j = 1..=n`. Neighbouring eigenvalues are
/// 2 apart and consecutive triples form equilateral triangles, so for
/// `1 < eps < 2/sqrt(3)` the pseudospectrum is connected with `n - 2` holes.
pub fn remark42_diagonal(n: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::invalid("remark42 family needs n >= 2"));
    }
    let h = 3f64.sqrt() / 2.0;
    let d: Vec<Complex64> = (1..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(j as f64, sign * h)
        })
        .collect();
    diagonal_normal(&d)
}

/// The circulant weighted shift `M`, which is `R_A(0)` for `A = M^{-1}`.
pub fn circulant_weighted_shift_inverse(w: &WeightSequence) -> Result<ComplexMatrix> {
    let n = w.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for (j, &a) in w.as_slice().iter().enumerate() {
        let col = (j + n - 1) % n;
        entries[j * n + col] = a;
    }
    ComplexMatrix::from_row_major(n, &entries)
}

/// `A = M^{-1}`, so that `R_A(0) = M`.
pub fn operator_from_inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.inverse(&Tolerances::default())
}

/// Shorthand for `operator_from_inverse(circulant_weighted_shift_inverse(w))`.
pub fn circulant_weighted_shift(w: &WeightSequence) -> Result<ComplexMatrix> {
    operator_from_inverse(&circulant_weighted_shift_inverse(w)?)
}

pub fn jordan_block(n: usize, lambda: Complex64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::invalid("Jordan block needs n >= 1"));
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        entries[i * n + i] = lambda;
        if i + 1 < n {
            entries[i * n + i + 1] = Complex64::new(1.0, 0.0);
        }
    }
    ComplexMatrix::from_row_major(n, &entries)
}

/// I.i.d. complex standard normal entries (`E|a_ij|^2 = 1`), reproducible
/// from `(n, seed)`. See [`RANDOM_ALGORITHM`].
pub fn random_dense(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::invalid("random matrix needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal parameters");
    let entries: Vec<Complex64> = (0..n * n)
        .map(|_| {
            let re = normal.sample(&mut rng);
            let im = normal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::from_row_major(n, &entries)
}
