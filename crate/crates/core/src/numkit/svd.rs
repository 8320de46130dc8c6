//! One-sided (Hestenes) Jacobi SVD for complex matrices.
//!
//! Applied to `B = A*`: plane rotations `V` orthogonalize the columns of `B`,
//! so `B V = W diag(s)` and `A = V diag(s) W*`. The accumulated `V` is a full
//! unitary, which gives left singular vectors of `A` for the zero singular
//! values as well.

use nalgebra::DMatrix;

use super::C64;

const MAX_SWEEPS: usize = 80;

/// Singular values of an `m x k` matrix (descending, `m` of them, padded with
/// zeros when `k < m`) and the matching left singular vectors as the columns
/// of an `m x m` unitary.
pub(crate) fn left_svd(a: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let m = a.nrows();
    let mut b = a.adjoint();
    let mut v = DMatrix::<C64>::identity(m, m);
    let eps = f64::EPSILON;
    let negligible = (eps * b.norm()).powi(2);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for j in 0..m {
            for k in (j + 1)..m {
                let (alpha, beta, gamma) = {
                    let bj = b.column(j);
                    let bk = b.column(k);
                    (bj.norm_squared(), bk.norm_squared(), bj.dotc(&bk))
                };
                let g = gamma.norm();
                if alpha.min(beta) <= negligible || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut b, j, k, c, s, phase);
                rotate(&mut v, j, k, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..m).map(|j| b.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&p, &q| norms[q].total_cmp(&norms[p]));
    let s = order.iter().map(|&j| norms[j]).collect();
    let u = DMatrix::from_fn(m, m, |i, c| v[(i, order[c])]);
    (s, u)
}

/// Columns `j, k` become `c x_j - s conj(p) x_k` and `s x_j + c conj(p) x_k`,
/// where `p` is the phase of `<x_j, x_k>`.
fn rotate(x: &mut DMatrix<C64>, j: usize, k: usize, c: f64, s: f64, phase: C64) {
    let pc = phase.conj();
    for i in 0..x.nrows() {
        let xj = x[(i, j)];
        let xk = x[(i, k)] * pc;
        x[(i, j)] = xj * c - xk * s;
        x[(i, k)] = xj * s + xk * c;
    }
}
