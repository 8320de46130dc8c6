//! Seeded random instances used by the verification suite and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numkit::{vec_norm, ComplexMatrix, C64};
use crate::operators::{Ambient, FiniteSupportVector};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix.
pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n).to_nalgebra();
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    ComplexMatrix::from_fn(n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// `(G - G*) / 2`
pub fn skew_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n);
    (&g - &g.adjoint()).scale_real(0.5)
}

/// `-(B*B + I)`, a Hermitian matrix with spectrum in `(-inf, -1]`.
pub fn shifted_negative_definite<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let b = gaussian_matrix(rng, n).scale_real(0.5);
    b.adjoint().matmul(&b).shift_diag(C64::new(1.0, 0.0)).scale_real(-1.0)
}

/// Generator with spectrum in the open left half-plane: a Ginibre matrix
/// shifted left by its spectral abscissa plus a margin.
pub fn stable_generator<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n);
    let abscissa = crate::numkit::eigenvalues(&g)
        .expect("finite input")
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let margin = rng.random_range(0.1..1.0);
    g.shift_diag(C64::new(-(abscissa + margin), 0.0))
}

/// `U diag(s) W` with `s` in `[1, cond]`, so the condition number is at most `cond`.
pub fn invertible_with_condition<R: Rng>(rng: &mut R, n: usize, cond: f64) -> ComplexMatrix {
    let u = unitary(rng, n);
    let w = unitary(rng, n);
    let mut s: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..cond)).collect();
    s[0] = 1.0;
    let d = ComplexMatrix::from_real_diag(&s).expect("finite");
    u.matmul(&d).matmul(&w)
}

/// Strictly upper triangular matrix with entries uniform in the unit square.
pub fn strictly_upper<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| {
        if j > i {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

/// Random vector supported on `0..len` in an infinite ambient.
pub fn finite_support<R: Rng>(rng: &mut R, len: usize) -> FiniteSupportVector {
    let entries: Vec<C64> = (0..len).map(|_| complex_normal(rng)).collect();
    FiniteSupportVector::from_dense(Ambient::Infinite, &entries).expect("finite entries")
}

pub fn point_in_disc<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.random_range(0.0f64..1.0).sqrt();
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::singular_values;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(1);
        let u = unitary(&mut r, 6);
        let err = (&u.adjoint().matmul(&u) - &ComplexMatrix::identity(6)).max_abs();
        assert!(err < 1e-13);
    }

    #[test]
    fn conditioned_matrix_respects_bound() {
        let mut r = rng(2);
        let s = singular_values(&invertible_with_condition(&mut r, 7, 100.0));
        assert!(s[0] / s[6] <= 100.0 * (1.0 + 1e-10));
    }

    #[test]
    fn stable_generator_has_left_spectrum() {
        let mut r = rng(3);
        for _ in 0..5 {
            let a = stable_generator(&mut r, 5);
            let abscissa = crate::numkit::eigenvalues(&a).unwrap().iter().map(|z| z.re).fold(f64::MIN, f64::max);
            assert!(abscissa < -0.05);
        }
    }
}
