//! Truncated Hardy-space toolkit: power series arithmetic, finite Blaschke
//! products, analytic Toeplitz truncations, model spaces `K_phi = H^2 ⊖ phi H^2`,
//! inner-symbol semigroups `exp(t (phi + 1)/(phi - 1))` and kernel/range
//! certificates for truncated operators.
//!
//! Inner-ness cannot be certified from finitely many Taylor coefficients;
//! [`inner_check`] samples moduli on interior circles and reports a necessary
//! condition only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::{self, ComplexMatrix, Tolerances, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Taylor coefficients `c_0..=c_N`; arithmetic truncates at the smaller order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSeries {
    coeffs: Vec<C64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("power series needs at least one coefficient".into()));
        }
        if !coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite { context: "power series" });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![ZERO; order + 1] }
    }

    pub fn constant(c: C64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// `z^k` truncated at `order` (zero if `k > order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = ONE;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn get(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Same function with order changed, padding with zeros.
    pub fn truncate(&self, order: usize) -> Self {
        Self { coeffs: (0..=order).map(|k| self.get(k)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self { coeffs: (0..=order).map(|k| self.coeffs[k] + other.coeffs[k]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self { coeffs: (0..=order).map(|k| self.coeffs[k] - other.coeffs[k]).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| (0..=n).map(|k| self.coeffs[k] * other.coeffs[n - k]).sum())
            .collect();
        Self { coeffs }
    }

    /// Multiplication by `z`, keeping the order.
    pub fn times_z(&self) -> Self {
        let mut coeffs = vec![ZERO; self.coeffs.len()];
        coeffs[1..].copy_from_slice(&self.coeffs[..self.coeffs.len() - 1]);
        Self { coeffs }
    }

    /// `exp(f)` from `g' = f' g`: `n g_n = sum_{k=1}^n k f_k g_{n-k}`, `g_0 = e^{f_0}`.
    pub fn exp(&self) -> Self {
        let mut g = vec![ZERO; self.coeffs.len()];
        g[0] = self.coeffs[0].exp();
        for n in 1..g.len() {
            let s: C64 = (1..=n).map(|k| self.coeffs[k] * g[n - k] * k as f64).sum();
            g[n] = s / n as f64;
        }
        Self { coeffs: g }
    }

    /// Multiplicative inverse; needs `f_0 != 0`.
    pub fn inv(&self) -> Result<Self> {
        let f0 = self.coeffs[0];
        if f0 == ZERO {
            return Err(Error::ZeroConstantTerm);
        }
        let mut g = vec![ZERO; self.coeffs.len()];
        g[0] = ONE / f0;
        for n in 1..g.len() {
            let s: C64 = (1..=n).map(|k| self.coeffs[k] * g[n - k]).sum();
            g[n] = -s / f0;
        }
        Ok(Self { coeffs: g })
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn l2_norm(&self) -> f64 {
        numkit::vec_norm(&self.coeffs)
    }

    /// Bound on the omitted tail at radius `rho < 1`, assuming the full
    /// function has `H^2` norm at most the norm of the stored coefficients:
    /// `||c|| rho^{N+1} / sqrt(1 - rho^2)` by Cauchy-Schwarz.
    pub fn tail_bound(&self, rho: f64) -> f64 {
        self.l2_norm() * rho.powi(self.order() as i32 + 1) / (1.0 - rho * rho).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeSpec {
    zeros: Vec<C64>,
    constant: C64,
}

impl BlaschkeSpec {
    pub fn new(zeros: Vec<C64>, constant: C64) -> Result<Self> {
        for a in &zeros {
            if !(a.norm() < 1.0) {
                return Err(Error::ZeroOnBoundary { modulus: a.norm() });
            }
        }
        if !((constant.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidArgument(format!("Blaschke constant must be unimodular, got modulus {}", constant.norm())));
        }
        Ok(Self { zeros, constant })
    }

    pub fn with_zeros(zeros: Vec<C64>) -> Result<Self> {
        Self::new(zeros, ONE)
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn constant(&self) -> C64 {
        self.constant
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Rational evaluation of `c prod (|a|/a)(a - z)/(1 - conj(a) z)`, with factor `z` for `a = 0`.
    pub fn eval(&self, z: C64) -> C64 {
        self.zeros.iter().fold(self.constant, |acc, &a| {
            if a == ZERO {
                acc * z
            } else {
                acc * (a.norm() / a) * (a - z) / (ONE - a.conj() * z)
            }
        })
    }
}

/// Taylor coefficients of a finite Blaschke product through degree `order`.
pub fn blaschke_series(b: &BlaschkeSpec, order: usize) -> PowerSeries {
    let mut out = PowerSeries::constant(b.constant, order);
    for &a in &b.zeros {
        let factor = if a == ZERO {
            PowerSeries::monomial(1, order)
        } else {
            // (|a|/a)(a - z) sum (conj(a) z)^k
            let unit = a.norm() / a;
            let ab = a.conj();
            let mut c = vec![ZERO; order + 1];
            c[0] = C64::new(a.norm(), 0.0);
            let mut p = ONE;
            for ck in c.iter_mut().skip(1) {
                *ck = unit * p * (a * ab - ONE);
                p *= ab;
            }
            PowerSeries { coeffs: c }
        };
        out = out.mul(&factor);
    }
    out
}

/// `exp(t (phi + 1)/(phi - 1))` through the order of `phi`.
pub fn inner_semigroup_symbol(phi: &PowerSeries, t: f64) -> Result<PowerSeries> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!("time must be finite and nonnegative, got {t}")));
    }
    let n = phi.order();
    if phi.get(0) == ONE {
        return Err(Error::SymbolSingularAtOrigin);
    }
    let plus = phi.add(&PowerSeries::one(n));
    let minus = phi.sub(&PowerSeries::one(n));
    let psi = plus.mul(&minus.inv()?);
    Ok(psi.scale(C64::new(t, 0.0)).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleSample {
    pub radius: f64,
    pub max_modulus: f64,
    pub mean_modulus: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerReport {
    pub circles: Vec<CircleSample>,
    pub bounded_by_one: bool,
    pub means_increase: bool,
    pub pass: bool,
    pub tolerance: f64,
}

pub const INNER_CHECK_RADII: [f64; 2] = [0.9, 0.99];

/// Samples `|f|` at `grid` equispaced points on the circles `|z| = 0.9, 0.99`.
/// Passes when every sample is at most `1 + residual_tol` and the circle
/// means increase with the radius. A necessary condition for inner-ness only.
pub fn inner_check(f: &PowerSeries, grid: usize, tol: &Tolerances) -> Result<InnerReport> {
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let mut circles = Vec::with_capacity(INNER_CHECK_RADII.len());
    for rho in INNER_CHECK_RADII {
        let tail = f.tail_bound(rho);
        if !(tail <= tol.tail_tol) {
            return Err(Error::TailNotConvergent { cap: f.order() });
        }
        let moduli: Vec<f64> = (0..grid)
            .map(|j| f.eval(C64::from_polar(rho, std::f64::consts::TAU * j as f64 / grid as f64)).norm())
            .collect();
        circles.push(CircleSample {
            radius: rho,
            max_modulus: moduli.iter().copied().fold(0.0, f64::max),
            mean_modulus: moduli.iter().sum::<f64>() / grid as f64,
            tail_bound: tail,
        });
    }
    let bounded_by_one = circles.iter().all(|c| c.max_modulus <= 1.0 + tol.residual_tol + c.tail_bound);
    let means_increase = circles.windows(2).all(|w| w[1].mean_modulus >= w[0].mean_modulus - tol.residual_tol);
    Ok(InnerReport { circles, bounded_by_one, means_increase, pass: bounded_by_one && means_increase, tolerance: tol.residual_tol })
}

/// Finite section of a Toeplitz operator: `(i, j) -> c_{i-j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzTrunc {
    /// `c_0, c_1, ...` (below and on the diagonal)
    nonnegative: Vec<C64>,
    /// `c_{-1}, c_{-2}, ...` (above the diagonal)
    negative: Vec<C64>,
    n: usize,
}

impl ToeplitzTrunc {
    pub fn new(nonnegative: Vec<C64>, negative: Vec<C64>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Toeplitz truncation needs n >= 1".into()));
        }
        if !nonnegative.iter().chain(&negative).all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite { context: "Toeplitz symbol" });
        }
        Ok(Self { nonnegative, negative, n })
    }

    /// Analytic symbol: lower-triangular truncation of multiplication by `phi`.
    pub fn analytic(phi: &PowerSeries, n: usize) -> Result<Self> {
        Self::new(phi.coeffs().to_vec(), Vec::new(), n)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Fourier coefficient `c_k` of the symbol.
    pub fn symbol(&self, k: isize) -> C64 {
        if k >= 0 {
            self.nonnegative.get(k as usize).copied().unwrap_or(ZERO)
        } else {
            self.negative.get((-k - 1) as usize).copied().unwrap_or(ZERO)
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, |i, j| self.symbol(i as isize - j as isize))
    }

    /// Truncation of the adjoint symbol `conj(c_{-k})`.
    pub fn adjoint(&self) -> Self {
        let conj = |v: &[C64]| v.iter().map(|z| z.conj()).collect::<Vec<_>>();
        let mut nonnegative = vec![self.symbol(0).conj()];
        nonnegative.extend(conj(&self.negative));
        Self { nonnegative, negative: conj(&self.nonnegative[1.min(self.nonnegative.len())..]), n: self.n }
    }
}

fn check_symbol_order(phi: &PowerSeries, n: usize) -> Result<()> {
    if phi.order() + 1 < n {
        return Err(Error::TruncationTooSmall(format!("symbol has {} coefficients, dimension {n} needs {n}", phi.order() + 1)));
    }
    Ok(())
}

/// Orthonormal basis (coefficient vectors of length `n`) of the truncated
/// model space: the left singular vectors of the analytic Toeplitz truncation
/// of `phi` whose singular values fall below the relative rank cutoff.
///
/// For a finite Blaschke product of degree `d` the truncation has `n - d`
/// singular values equal to one and `d` of size about `max|a|^n`, so the gap
/// is clean once `n >= 4d` and the coefficients of `phi` beyond `3n/4` are
/// below `tail_tol`.
pub fn model_space_basis(phi: &PowerSeries, n: usize, tol: &Tolerances) -> Result<Vec<Vec<C64>>> {
    check_symbol_order(phi, n)?;
    let late = (3 * n / 4..n).map(|k| phi.get(k).norm()).fold(0.0, f64::max);
    if late > tol.tail_tol {
        return Err(Error::TruncationTooSmall(format!(
            "symbol coefficients beyond degree {} reach {late:e}; enlarge n",
            3 * n / 4
        )));
    }
    let basis = numkit::orthonormal_cokernel_basis(&ToeplitzTrunc::analytic(phi, n)?.matrix(), tol)?;
    if 4 * basis.len() > n {
        return Err(Error::TruncationTooSmall(format!("model space of dimension {} needs n >= {}", basis.len(), 4 * basis.len())));
    }
    Ok(basis)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderReport {
    pub model_space_dim: usize,
    pub levels: usize,
    pub dimension: usize,
    /// largest `|<u, v>|` between vectors of different levels
    pub off_block_max: f64,
    /// largest `|G - I|` within a level (multiplication by an inner function is isometric)
    pub in_block_residual: f64,
    pub total_dim: usize,
    pub expected_total_dim: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Builds `phi^k K_phi` for `k = 0..=m` and checks the levels are mutually
/// orthogonal with total dimension `(m + 1) dim K_phi`. Off-block Gram entries
/// are compared with `tail_tol`.
pub fn verify_ladder_decomposition(phi: &PowerSeries, m: usize, n: usize, tol: &Tolerances) -> Result<LadderReport> {
    let basis = model_space_basis(phi, n, tol)?;
    let d = basis.len();
    if n < 2 * (m + 2) * d {
        return Err(Error::TruncationTooSmall(format!("{m} levels of dimension {d} need n >= {}", 2 * (m + 2) * d)));
    }
    let phi_n = phi.truncate(n - 1);
    let mut levels: Vec<Vec<PowerSeries>> = Vec::with_capacity(m + 1);
    levels.push(basis.iter().map(|v| PowerSeries { coeffs: v.clone() }).collect());
    for k in 1..=m {
        let next = levels[k - 1].iter().map(|f| phi_n.mul(f)).collect();
        levels.push(next);
    }

    let mut off_block_max: f64 = 0.0;
    let mut in_block_residual: f64 = 0.0;
    for (i, li) in levels.iter().enumerate() {
        for (j, lj) in levels.iter().enumerate().skip(i) {
            for (a, u) in li.iter().enumerate() {
                for (b, v) in lj.iter().enumerate() {
                    let g = numkit::inner(u.coeffs(), v.coeffs());
                    if i == j {
                        let want = if a == b { ONE } else { ZERO };
                        in_block_residual = in_block_residual.max((g - want).norm());
                    } else {
                        off_block_max = off_block_max.max(g.norm());
                    }
                }
            }
        }
    }
    let all: Vec<Vec<C64>> = levels.iter().flatten().map(|f| f.coeffs.clone()).collect();
    let total_dim = numkit::orthonormal_span(&all, n, tol).len();
    let expected_total_dim = (m + 1) * d;
    let tolerance = tol.tail_tol;
    Ok(LadderReport {
        model_space_dim: d,
        levels: m,
        dimension: n,
        off_block_max,
        in_block_residual,
        total_dim,
        expected_total_dim,
        tolerance,
        pass: off_block_max <= tolerance && total_dim == expected_total_dim,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaradusReport {
    pub dimension: usize,
    pub rank: usize,
    /// `n - rank` of the truncation as a matrix
    pub kernel_dim: usize,
    pub surjective: bool,
    /// largest `i - j` with a nonzero entry
    pub lower_bandwidth: usize,
    /// largest `j - i` with a nonzero entry
    pub upper_bandwidth: usize,
    /// nullity of the leading `n - lower_bandwidth` columns, whose images are not cut off
    pub interior_kernel_dim: usize,
    /// every `e_i` with `i < n - upper_bandwidth` lies in the range
    pub interior_surjective: bool,
    pub kernel_truncation_artifact: bool,
    pub surjectivity_truncation_artifact: bool,
    /// declared block multiplicity, the kernel dimension of the untruncated operator
    pub multiplicity: Option<usize>,
    pub caveat: &'static str,
}

const CARADUS_CAVEAT: &str = "finite truncation: an infinite-dimensional kernel is certified only through the declared block multiplicity, \
     and surjectivity only on coordinates whose preimages stay inside the truncation";

/// Kernel and range certificate for a truncated operator. Banded truncations
/// lose columns near the boundary, so the report separates raw matrix counts
/// from interior counts and flags the difference.
pub fn caradus_certificate(m: &ComplexMatrix, multiplicity: Option<usize>, tol: &Tolerances) -> Result<CaradusReport> {
    m.ensure_finite("caradus_certificate")?;
    let n = m.dim();
    let threshold = tol.rank_tol * m.max_abs();
    let (mut lower, mut upper) = (0usize, 0usize);
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)].norm() > threshold {
                if i > j {
                    lower = lower.max(i - j);
                } else {
                    upper = upper.max(j - i);
                }
            }
        }
    }
    let (range, _) = numkit::range_and_complement(m, tol)?;
    let rank = range.len();

    let interior_cols = n.saturating_sub(lower);
    let interior_kernel_dim = if interior_cols == 0 {
        0
    } else {
        let cols: Vec<Vec<C64>> = (0..interior_cols).map(|j| m.column(j)).collect();
        let largest = numkit::singular_values(m).first().copied().unwrap_or(0.0);
        interior_cols - numkit::orthonormal_span_above(&cols, n, tol.rank_tol * largest).len()
    };
    let in_range = |i: usize| {
        let captured: f64 = range.iter().map(|q| q[i].norm_sqr()).sum();
        (1.0 - captured).max(0.0).sqrt() <= tol.rank_tol.sqrt()
    };
    let interior_surjective = (0..n.saturating_sub(upper)).all(in_range);
    let surjective = rank == n;
    Ok(CaradusReport {
        dimension: n,
        rank,
        kernel_dim: n - rank,
        surjective,
        lower_bandwidth: lower,
        upper_bandwidth: upper,
        interior_kernel_dim,
        interior_surjective,
        kernel_truncation_artifact: interior_kernel_dim != n - rank,
        surjectivity_truncation_artifact: interior_surjective != surjective,
        multiplicity,
        caveat: CARADUS_CAVEAT,
    })
}

/// `(i, i + d) -> 1`: the backward shift of multiplicity `d` on `C^n`.
pub fn block_backward_shift(d: usize, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| if j == i + d { ONE } else { ZERO })
}

/// `(i + d, i) -> 1`: the forward shift of multiplicity `d` on `C^n`.
pub fn block_forward_shift(d: usize, n: usize) -> ComplexMatrix {
    block_backward_shift(d, n).adjoint()
}

/// `(Ac)_k = (k + 1) c_{k+1}` truncated to `n x n`, the generator of the
/// backward-shift semigroup in Taylor coordinates.
pub fn shift_generator_trunc(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| if j == i + 1 { C64::new(j as f64, 0.0) } else { ZERO })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelProfileEntry {
    pub lambda: C64,
    pub interior_kernel_dim: usize,
}

/// Interior kernel dimension of `A - lambda I` for the truncated shift
/// generator over a grid of `lambda`; an illustration that eigenspaces are at
/// most one-dimensional.
pub fn shift_generator_kernel_profile(n: usize, lambdas: &[C64], tol: &Tolerances) -> Result<Vec<KernelProfileEntry>> {
    let a = shift_generator_trunc(n);
    lambdas
        .iter()
        .map(|&lambda| {
            let r = caradus_certificate(&a.shift_diag(-lambda), None, tol)?;
            Ok(KernelProfileEntry { lambda, interior_kernel_dim: r.interior_kernel_dim })
        })
        .collect()
}

/// Truncated composition operator for the automorphism `(z + r)/(1 + r z)`:
/// column `j` holds the Taylor coefficients of `phi^j` through degree `n - 1`.
pub fn composition_operator_trunc(r: f64, n: usize) -> Result<ComplexMatrix> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidAutomorphism { r });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let order = n - 1;
    // (z + r) sum (-r z)^k
    let mut c = vec![ZERO; n];
    c[0] = C64::new(r, 0.0);
    let mut p = 1.0;
    for ck in c.iter_mut().skip(1) {
        *ck = C64::new(p * (1.0 - r * r), 0.0);
        p *= -r;
    }
    let phi = PowerSeries { coeffs: c };
    let mut cols = Vec::with_capacity(n);
    let mut power = PowerSeries::one(order);
    for _ in 0..n {
        cols.push(power.coeffs.clone());
        power = power.mul(&phi);
    }
    Ok(ComplexMatrix::from_fn(n, |i, j| cols[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn series(v: &[f64]) -> PowerSeries {
        PowerSeries::from_real(v).unwrap()
    }

    #[test]
    fn series_examples() {
        assert_eq!(PowerSeries::zero(5).exp(), PowerSeries::one(5));
        let geo = series(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0]).inv().unwrap();
        assert_eq!(geo, series(&[1.0; 6]));
        assert_eq!(series(&[1.0, -1.0, 0.0, 0.0]).mul(&series(&[1.0; 4])), PowerSeries::one(3));
        assert_eq!(series(&[0.0, 1.0]).inv(), Err(Error::ZeroConstantTerm));
        // exp(z): 1/n!
        let e = series(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).exp();
        let mut fact = 1.0;
        for (n, cn) in e.coeffs().iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((cn - c(1.0 / fact)).norm() < 1e-16);
        }
        assert!((series(&[2.0, 3.0, 1.0]).eval(c(2.0)) - c(12.0)).norm() == 0.0);
    }

    #[test]
    fn blaschke_examples() {
        let b = BlaschkeSpec::with_zeros(vec![c(0.0)]).unwrap();
        assert_eq!(blaschke_series(&b, 3), series(&[0.0, 1.0, 0.0, 0.0]));
        let b = BlaschkeSpec::with_zeros(vec![c(0.5)]).unwrap();
        let s = blaschke_series(&b, 3);
        for (got, want) in s.coeffs().iter().zip([0.5, -0.75, -0.375, -0.1875]) {
            assert!((got - c(want)).norm() < 1e-16);
        }
        let b2 = BlaschkeSpec::with_zeros(vec![C64::new(0.3, 0.2), c(-0.4)]).unwrap();
        for j in 0..64 {
            let z = C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 64.0);
            assert!((b2.eval(z).norm() - 1.0).abs() < 1e-12);
        }
        let s = blaschke_series(&b2, 200);
        let z = C64::new(0.3, -0.5);
        assert!((s.eval(z) - b2.eval(z)).norm() < 1e-14);
        assert!(matches!(BlaschkeSpec::with_zeros(vec![c(1.0)]), Err(Error::ZeroOnBoundary { .. })));
    }

    #[test]
    fn inner_symbol_examples() {
        let z = PowerSeries::monomial(1, 64);
        let s = inner_semigroup_symbol(&z, 1.0).unwrap();
        assert!((s.get(0) - c((-1.0f64).exp())).norm() < 1e-15);
        assert_eq!(inner_semigroup_symbol(&z, 0.0).unwrap(), PowerSeries::one(64));
        let prod = inner_semigroup_symbol(&z, 0.4).unwrap().mul(&inner_semigroup_symbol(&z, 0.7).unwrap());
        let direct = inner_semigroup_symbol(&z, 1.1).unwrap();
        assert!(prod.sub(&direct).coeffs().iter().all(|d| d.norm() < 1e-10));
        assert_eq!(inner_semigroup_symbol(&PowerSeries::one(4), 1.0), Err(Error::SymbolSingularAtOrigin));
    }

    #[test]
    fn inner_check_examples() {
        let tol = Tolerances::default();
        let z = PowerSeries::monomial(1, 3000);
        let r = inner_check(&z, 64, &tol).unwrap();
        assert!(r.pass);
        assert!((r.circles[1].max_modulus - 0.99).abs() < 1e-14);

        let b = blaschke_series(&BlaschkeSpec::with_zeros(vec![c(0.5)]).unwrap(), 3000);
        let r = inner_check(&b, 256, &tol).unwrap();
        assert!(r.pass && r.circles[1].max_modulus >= 0.97);

        let e = inner_semigroup_symbol(&PowerSeries::monomial(1, 3000), 1.0).unwrap();
        assert!(inner_check(&e, 128, &tol).unwrap().pass);

        let expanding = series(&[0.0, 1.5]).truncate(3000);
        assert!(!inner_check(&expanding, 16, &tol).unwrap().pass);
        assert!(matches!(inner_check(&PowerSeries::monomial(1, 50), 8, &tol), Err(Error::TailNotConvergent { .. })));
    }

    #[test]
    fn model_space_examples() {
        let tol = Tolerances::default();
        let zd = PowerSeries::monomial(3, 63);
        let basis = model_space_basis(&zd, 64, &tol).unwrap();
        assert_eq!(basis.len(), 3);
        for v in &basis {
            assert!(v[3..].iter().all(|x| x.norm() < 1e-14));
        }

        let b = blaschke_series(&BlaschkeSpec::with_zeros(vec![c(0.5)]).unwrap(), 63);
        let basis = model_space_basis(&b, 64, &tol).unwrap();
        assert_eq!(basis.len(), 1);
        // proportional to the kernel 1/(1 - 0.5 z)
        let k: Vec<C64> = (0..64).map(|i| c(0.5f64.powi(i))).collect();
        let overlap = numkit::inner(&basis[0], &k).norm() / numkit::vec_norm(&k);
        assert!((overlap - 1.0).abs() < 1e-12);

        let b2 = blaschke_series(&BlaschkeSpec::with_zeros(vec![c(0.3), c(-0.4)]).unwrap(), 63);
        assert_eq!(model_space_basis(&b2, 64, &tol).unwrap().len(), 2);

        assert!(matches!(model_space_basis(&PowerSeries::monomial(3, 10), 10, &tol), Err(Error::TruncationTooSmall(_))));
        let slow = blaschke_series(&BlaschkeSpec::with_zeros(vec![c(0.95)]).unwrap(), 63);
        assert!(matches!(model_space_basis(&slow, 64, &tol), Err(Error::TruncationTooSmall(_))));
    }

    #[test]
    fn ladder_examples() {
        let tol = Tolerances::default();
        let r = verify_ladder_decomposition(&PowerSeries::monomial(1, 63), 3, 64, &tol).unwrap();
        assert!(r.pass && r.off_block_max == 0.0 && r.total_dim == 4);
        let b = blaschke_series(&BlaschkeSpec::with_zeros(vec![c(0.5)]).unwrap(), 63);
        let r = verify_ladder_decomposition(&b, 4, 64, &tol).unwrap();
        assert!(r.pass, "{r:?}");
        let b2 = blaschke_series(&BlaschkeSpec::with_zeros(vec![c(0.3), c(-0.4)]).unwrap(), 63);
        let r = verify_ladder_decomposition(&b2, 3, 64, &tol).unwrap();
        assert!(r.pass && r.total_dim == 8, "{r:?}");
        assert!(matches!(
            verify_ladder_decomposition(&PowerSeries::monomial(4, 63), 8, 64, &tol),
            Err(Error::TruncationTooSmall(_))
        ));
    }

    #[test]
    fn caradus_examples() {
        let tol = Tolerances::default();
        let back = caradus_certificate(&block_backward_shift(1, 10), Some(1), &tol).unwrap();
        assert_eq!(back.kernel_dim, 1);
        assert!(back.interior_surjective && !back.surjective && back.surjectivity_truncation_artifact);

        let fwd = caradus_certificate(&block_forward_shift(1, 10), None, &tol).unwrap();
        assert_eq!(fwd.kernel_dim, 1);
        assert_eq!(fwd.interior_kernel_dim, 0);
        assert!(fwd.kernel_truncation_artifact && !fwd.interior_surjective);

        let b4 = caradus_certificate(&block_backward_shift(4, 20), Some(4), &tol).unwrap();
        assert_eq!((b4.kernel_dim, b4.interior_kernel_dim), (4, 4));
        assert!(b4.interior_surjective);
    }

    #[test]
    fn shift_generator_profile() {
        let tol = Tolerances::default();
        let lambdas: Vec<C64> = [-1.0, -0.5, 0.0, 0.5, 1.0].iter().map(|&x| c(x)).collect();
        let prof = shift_generator_kernel_profile(24, &lambdas, &tol).unwrap();
        assert!(prof.iter().all(|e| e.interior_kernel_dim <= 1));
        assert_eq!(prof[2].interior_kernel_dim, 1);
    }

    #[test]
    fn toeplitz_adjoint_and_product() {
        let phi = series(&[1.0, 2.0, -1.0]);
        let psi = series(&[0.5, 0.0, 3.0, 1.0]);
        let n = 8;
        let tphi = ToeplitzTrunc::analytic(&phi.truncate(n), n).unwrap();
        let tpsi = ToeplitzTrunc::analytic(&psi.truncate(n), n).unwrap();
        let prod = ToeplitzTrunc::analytic(&phi.truncate(n).mul(&psi.truncate(n)), n).unwrap();
        assert_eq!(prod.matrix(), tphi.matrix().matmul(&tpsi.matrix()));
        assert_eq!(tphi.adjoint().matrix(), tphi.matrix().adjoint());
        let mixed = ToeplitzTrunc::new(vec![c(1.0), c(2.0)], vec![C64::new(0.0, 3.0)], 4).unwrap();
        assert_eq!(mixed.adjoint().matrix(), mixed.matrix().adjoint());
    }

    #[test]
    fn composition_examples() {
        assert_eq!(composition_operator_trunc(0.0, 5).unwrap(), ComplexMatrix::identity(5));
        let m = composition_operator_trunc(0.5, 6).unwrap();
        assert_eq!(m[(0, 0)], ONE);
        assert!((1..6).all(|i| m[(i, 0)] == ZERO));
        assert!((m[(0, 1)] - c(0.5)).norm() < 1e-16);
        assert!(matches!(composition_operator_trunc(1.0, 3), Err(Error::InvalidAutomorphism { .. })));
        assert!(matches!(composition_operator_trunc(-0.2, 3), Err(Error::InvalidAutomorphism { .. })));
    }
}
