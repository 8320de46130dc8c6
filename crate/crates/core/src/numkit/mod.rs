//! Dense complex linear algebra: Hermitian spectra, singular values, linear
//! solves, tolerant rank and range bases, spectra of general matrices, and the
//! matrix exponential.
//!
//! Hermitian spectra, LU solves and Schur forms come from `nalgebra`. The SVD
//! is a one-sided Jacobi iteration and the exponential a scaling-and-squaring
//! Padé(13), both implemented here.

mod expm;
mod matrix;
mod svd;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use expm::expm;
pub use matrix::{ComplexMatrix, C64};
pub(crate) use matrix::ZERO;

/// Global numeric thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative singular-value cutoff.
    pub rank_tol: f64,
    /// Eigenvalue slack for semidefiniteness tests.
    pub psd_tol: f64,
    /// Allowed norm residual for identities.
    pub residual_tol: f64,
    /// Allowed truncated-series tail.
    pub tail_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rank_tol: 1e-10, psd_tol: 1e-10, residual_tol: 1e-9, tail_tol: 1e-10 }
    }
}

impl Tolerances {
    pub fn new(rank_tol: f64, psd_tol: f64, residual_tol: f64, tail_tol: f64) -> Result<Self> {
        let t = Self { rank_tol, psd_tol, residual_tol, tail_tol };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_tol", self.rank_tol),
            ("psd_tol", self.psd_tol),
            ("residual_tol", self.residual_tol),
            ("tail_tol", self.tail_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Eigenvalues of the Hermitian part `(M + M*)/2`, in descending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.ensure_finite("hermitian_eigenvalues")?;
    let h = m.hermitian_part().to_nalgebra();
    let eig = SymmetricEigen::new(h);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Largest eigenvalue of `(M + M*)/2`.
pub fn hermitian_max_eig(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?[0])
}

/// Smallest eigenvalue of `(M + M*)/2`.
pub fn hermitian_min_eig(m: &ComplexMatrix) -> Result<f64> {
    Ok(*hermitian_eigenvalues(m)?.last().expect("dimension is positive"))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    svd::left_svd(&m.to_nalgebra()).0
}

/// Ratio of smallest to largest singular value; 0 for the zero matrix.
pub fn inverse_condition(m: &ComplexMatrix) -> f64 {
    let s = singular_values(m);
    let largest = s[0];
    if largest == 0.0 {
        0.0
    } else {
        s[s.len() - 1] / largest
    }
}

fn ensure_invertible(m: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    let ratio = inverse_condition(m);
    if ratio < tol.rank_tol {
        Err(Error::Singular { ratio })
    } else {
        Ok(())
    }
}

/// Solves `M x = rhs` by partial-pivot LU.
pub fn solve(m: &ComplexMatrix, rhs: &[C64], tol: &Tolerances) -> Result<Vec<C64>> {
    m.ensure_finite("solve")?;
    if rhs.len() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), actual: rhs.len() });
    }
    ensure_invertible(m, tol)?;
    let b = DVector::from_column_slice(rhs);
    let x = m.to_nalgebra().lu().solve(&b).ok_or(Error::Singular { ratio: 0.0 })?;
    Ok(x.iter().copied().collect())
}

/// Solves `M X = B` for a matrix right-hand side.
pub fn solve_matrix(m: &ComplexMatrix, rhs: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    m.ensure_finite("solve_matrix")?;
    if rhs.dim() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), actual: rhs.dim() });
    }
    ensure_invertible(m, tol)?;
    let x = m.to_nalgebra().lu().solve(&rhs.to_nalgebra()).ok_or(Error::Singular { ratio: 0.0 })?;
    Ok(ComplexMatrix::from_nalgebra(&x))
}

pub fn inverse(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    solve_matrix(m, &ComplexMatrix::identity(m.dim()), tol)
}

/// Number of singular values above `rank_tol` times the largest one.
pub fn rank(m: &ComplexMatrix, tol: &Tolerances) -> Result<usize> {
    m.ensure_finite("rank")?;
    let s = singular_values(m);
    Ok(count_above(&s, tol.rank_tol))
}

fn count_above(s: &[f64], rel: f64) -> usize {
    let largest = s.first().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel * largest).count()
}

/// Orthonormal bases of a subspace and of its orthogonal complement.
pub type SplitBasis = (Vec<Vec<C64>>, Vec<Vec<C64>>);

/// Left singular vectors split at the relative rank cutoff:
/// `(range basis, complement basis)`, each orthonormal.
pub fn range_and_complement(
    m: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<SplitBasis> {
    split_range(m, |s| count_above(s, tol.rank_tol))
}

/// As [`range_and_complement`], keeping singular values strictly above
/// `cutoff` (absolute).
pub fn range_and_complement_above(m: &ComplexMatrix, cutoff: f64) -> Result<SplitBasis> {
    split_range(m, |s| s.iter().filter(|&&v| v > cutoff).count())
}

fn split_range(m: &ComplexMatrix, rank: impl Fn(&[f64]) -> usize) -> Result<SplitBasis> {
    m.ensure_finite("range_and_complement")?;
    let n = m.dim();
    let (sorted, u) = svd::left_svd(&m.to_nalgebra());
    let r = rank(&sorted);
    let column = |k: usize| -> Vec<C64> { (0..n).map(|i| u[(i, k)]).collect() };
    let range = (0..r).map(column).collect();
    let complement = (r..n).map(column).collect();
    Ok((range, complement))
}

/// Orthonormal basis of the numerical column space.
pub fn orthonormal_range_basis(m: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<Vec<C64>>> {
    Ok(range_and_complement(m, tol)?.0)
}

/// Orthonormal basis of the orthogonal complement of the numerical column
/// space, i.e. of the numerical kernel of `M*`.
pub fn orthonormal_cokernel_basis(m: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<Vec<C64>>> {
    Ok(range_and_complement(m, tol)?.1)
}

/// Orthonormal basis of the span of arbitrary vectors of length `n`,
/// using the relative rank cutoff.
pub fn orthonormal_span(vectors: &[Vec<C64>], n: usize, tol: &Tolerances) -> Vec<Vec<C64>> {
    span_with_cutoff(vectors, n, |largest| tol.rank_tol * largest)
}

/// Orthonormal basis of the span keeping singular values strictly above
/// `cutoff` (absolute).
pub fn orthonormal_span_above(vectors: &[Vec<C64>], n: usize, cutoff: f64) -> Vec<Vec<C64>> {
    span_with_cutoff(vectors, n, |_| cutoff)
}

fn span_with_cutoff(vectors: &[Vec<C64>], n: usize, cutoff: impl Fn(f64) -> f64) -> Vec<Vec<C64>> {
    if vectors.is_empty() || n == 0 {
        return Vec::new();
    }
    let cols = vectors.len();
    let mat = DMatrix::from_fn(n, cols, |i, j| vectors[j][i]);
    let (s, u) = svd::left_svd(&mat);
    let largest = s[0];
    if largest == 0.0 {
        return Vec::new();
    }
    let threshold = cutoff(largest);
    s.iter()
        .take_while(|&&v| v > threshold)
        .enumerate()
        .map(|(k, _)| (0..n).map(|i| u[(i, k)]).collect())
        .collect()
}

/// Eigenvalues of a general complex matrix from its Schur form.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    m.ensure_finite("eigenvalues")?;
    let n = m.dim();
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = Schur::try_new(m.to_nalgebra(), f64::EPSILON, 100 * n * n)
        .ok_or_else(|| Error::InvalidArgument("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Spectral radius via the Schur form.
pub fn spectral_radius(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Euclidean inner product `<x, y> = sum x_i conj(y_i)`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Gram matrix `G[i][j] = <v_j, v_i>` of a list of vectors.
pub fn gram(vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    vectors.iter().map(|vi| vectors.iter().map(|vj| inner(vj, vi)).collect()).collect()
}
