//! Analytic model of a bounded below, pure operator `T` with the wandering
//! subspace property: with the Cauchy dual `T' = T (T*T)^{-1}`, `L = T'*` and
//! `P = I - T L` (the projection onto `E = H ⊖ TH`), the map
//! `x -> sum_n (P L^n x) z^n` carries `T` to multiplication by `z` on a space
//! of `E`-valued analytic functions with kernel
//! `k(lambda, z) = P (I - z L)^{-1} (I - conj(lambda) L*)^{-1}`.
//!
//! Only the shift regime (weighted shifts and direct sums of them) is accepted,
//! since a finite-dimensional operator cannot be both bounded below and pure.
//! Every identity is then exact on finitely supported vectors.
//!
//! Evaluation happens on the open disc of radius `1/||L||`, where the Neumann
//! series of `(I - z L)^{-1}` converges; `r(T')` is kept as metadata.
//!
//! Also here: the multiplier semigroup `e_t(z) = exp(t (z + 1)/(z - 1))` and
//! Wold-type decompositions of dense operators.

use serde::Serialize;

use crate::classify::{self, stable_range_capped, wandering_span_dim_scaled};
use crate::error::{Error, Result};
use crate::hardy::PowerSeries;
use crate::numkit::{self, ComplexMatrix, Tolerances, C64};
use crate::operators::{Ambient, FiniteSupportVector, StructuredOperator};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Largest truncation order used by adaptive series summation.
pub const MAX_ORDER: usize = 10_000;

pub const SIGN_CONVENTION: &str =
    "multiplier semigroup uses exp(t (z + 1)/(z - 1)), which has modulus at most 1 on the disc";

pub const RADIUS_CONVENTION: &str =
    "evaluation disc has radius 1/||L||, where the Neumann series converges; r(T') is reported alongside";

#[derive(Debug, Clone)]
pub struct AnalyticModel {
    source: StructuredOperator,
    dual: StructuredOperator,
    defect_basis: Vec<FiniteSupportVector>,
    l_norm: f64,
    radius: f64,
    dual_spectral_radius: f64,
}

/// Residuals of the construction-time identities, measured on test vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelInvariants {
    /// `max ||L T x - x||`
    pub left_inverse: f64,
    /// `max ||P^2 x - P x||`
    pub idempotent: f64,
    /// `max |<P x, y> - <x, P y>|`
    pub self_adjoint: f64,
    /// `max ||P T x||`
    pub annihilates_range: f64,
    /// `max |G - I|` for the defect basis Gram matrix
    pub defect_gram: f64,
}

impl AnalyticModel {
    pub fn source(&self) -> &StructuredOperator {
        &self.source
    }

    /// Cauchy dual `T'`; the model operator `L` is its adjoint.
    pub fn cauchy_dual(&self) -> &StructuredOperator {
        &self.dual
    }

    pub fn defect_basis(&self) -> &[FiniteSupportVector] {
        &self.defect_basis
    }

    pub fn defect_dim(&self) -> usize {
        self.defect_basis.len()
    }

    pub fn l_norm(&self) -> f64 {
        self.l_norm
    }

    /// Radius of the open evaluation disc.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `r(T')`, the disc radius in the classical statement of the model.
    pub fn dual_spectral_radius(&self) -> f64 {
        self.dual_spectral_radius
    }

    /// `beta_n = w_0 ... w_{n-1}` when the source is a single weighted shift.
    pub fn beta(&self, n: usize) -> Option<f64> {
        match &self.source {
            StructuredOperator::Shift(s) => Some(s.beta(n)),
            _ => None,
        }
    }

    fn ambient(&self) -> Ambient {
        self.source.ambient()
    }

    /// `L x = T'* x`
    pub fn apply_l(&self, x: &FiniteSupportVector) -> Result<FiniteSupportVector> {
        self.dual.adjoint_apply(x)
    }

    /// `L* x = T' x`
    pub fn apply_l_adjoint(&self, x: &FiniteSupportVector) -> Result<FiniteSupportVector> {
        self.dual.apply(x)
    }

    /// `P x = x - T L x`
    pub fn project(&self, x: &FiniteSupportVector) -> Result<FiniteSupportVector> {
        Ok(x.sub(&self.source.apply(&self.apply_l(x)?)?))
    }

    /// Coordinates `<v, e_j>` in the defect basis.
    pub fn defect_coordinates(&self, v: &FiniteSupportVector) -> Vec<C64> {
        self.defect_basis.iter().map(|e| v.inner(e)).collect()
    }

    /// `sum_j c_j e_j`
    pub fn defect_vector(&self, coords: &[C64]) -> Result<FiniteSupportVector> {
        if coords.len() != self.defect_dim() {
            return Err(Error::DimensionMismatch { expected: self.defect_dim(), actual: coords.len() });
        }
        Ok(self
            .defect_basis
            .iter()
            .zip(coords)
            .fold(FiniteSupportVector::zero(self.ambient()), |acc, (e, &c)| acc.axpy(c, e)))
    }

    fn check_vector(&self, x: &FiniteSupportVector) -> Result<()> {
        if x.ambient() != self.ambient() {
            return Err(Error::AmbientMismatch { operator: self.ambient().to_string(), vector: x.ambient().to_string() });
        }
        Ok(())
    }

    fn check_point(&self, w: C64) -> Result<()> {
        if !(w.norm() < self.radius) {
            return Err(Error::OutsideDisc { modulus: w.norm(), radius: self.radius });
        }
        Ok(())
    }

    /// Measures the model identities on the defect basis and on
    /// `e_0, ..., e_{probe_len - 1}`.
    pub fn invariants(&self, probe_len: usize) -> Result<ModelInvariants> {
        let mut probes: Vec<FiniteSupportVector> = self.defect_basis.clone();
        for k in 0..probe_len {
            if let Ambient::Finite(n) = self.ambient() {
                if k >= n {
                    break;
                }
            }
            probes.push(FiniteSupportVector::basis(self.ambient(), k)?);
        }
        let mut inv = ModelInvariants {
            left_inverse: 0.0,
            idempotent: 0.0,
            self_adjoint: 0.0,
            annihilates_range: 0.0,
            defect_gram: 0.0,
        };
        for x in &probes {
            let tx = self.source.apply(x)?;
            inv.left_inverse = inv.left_inverse.max(self.apply_l(&tx)?.sub(x).norm());
            let px = self.project(x)?;
            inv.idempotent = inv.idempotent.max(self.project(&px)?.sub(&px).norm());
            inv.annihilates_range = inv.annihilates_range.max(self.project(&tx)?.norm());
            for y in &probes {
                let lhs = px.inner(y);
                let rhs = x.inner(&self.project(y)?);
                inv.self_adjoint = inv.self_adjoint.max((lhs - rhs).norm());
            }
        }
        for (i, ei) in self.defect_basis.iter().enumerate() {
            for (j, ej) in self.defect_basis.iter().enumerate() {
                let want = if i == j { ONE } else { ZERO };
                inv.defect_gram = inv.defect_gram.max((ej.inner(ei) - want).norm());
            }
        }
        Ok(inv)
    }
}

/// Builds the analytic model of a bounded below, pure operator with the
/// wandering subspace property. Dense leaves are rejected.
pub fn build_model(t: &StructuredOperator, tol: &Tolerances) -> Result<AnalyticModel> {
    if !t.is_shift_regime() {
        return Err(Error::UnsupportedRegime(
            "analytic models need weighted shifts or direct sums of them; a dense operator is never both bounded below and pure"
                .into(),
        ));
    }
    let report = classify::classify_operator(t, tol)?;
    if !report.bounded_below.holds {
        return Err(Error::NotBoundedBelow { margin: report.bounded_below.margin });
    }
    if !report.pure.holds {
        return Err(Error::NotPure);
    }
    if !report.wandering.holds {
        return Err(Error::NoWanderingSubspace);
    }
    let dual = t.cauchy_dual(tol)?;
    let l_norm = dual.norm();
    let model = AnalyticModel {
        source: t.clone(),
        defect_basis: t.defect_basis(tol)?,
        radius: 1.0 / l_norm,
        dual_spectral_radius: dual.spectral_radius_estimate(),
        dual,
        l_norm,
    };
    let inv = model.invariants(8)?;
    let checks = [
        ("L T = I", inv.left_inverse),
        ("P idempotent", inv.idempotent),
        ("P self-adjoint", inv.self_adjoint),
        ("P T = 0", inv.annihilates_range),
        ("defect basis orthonormal", inv.defect_gram),
    ];
    for (name, residual) in checks {
        if residual > 1e-12 {
            return Err(Error::InvariantViolated { name, residual });
        }
    }
    Ok(model)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelCoefficients {
    /// `coeffs[n]` are the defect coordinates of `P L^n x`.
    pub coeffs: Vec<Vec<C64>>,
    pub order: usize,
    /// `true` when `L^{N+1} x = 0`, so that the expansion is complete.
    pub exhausted: bool,
    /// Bound on `sum_{n > N} ||P L^n x|| rho^n` at `rho = radius / 2`.
    pub tail_bound: f64,
    x_norm: f64,
    l_norm: f64,
}

impl ModelCoefficients {
    /// `sum_{n > N} ||P L^n x|| rho^n <= ||x|| q^{N+1} / (1 - q)`, `q = rho ||L||`.
    pub fn tail_bound_at(&self, rho: f64) -> f64 {
        if self.exhausted {
            return 0.0;
        }
        let q = rho * self.l_norm;
        if q >= 1.0 {
            return f64::INFINITY;
        }
        self.x_norm * q.powi(self.order as i32 + 1) / (1.0 - q)
    }

    /// `(Ux)(lambda) = sum_n lambda^n coeffs[n]` in defect coordinates.
    pub fn evaluate(&self, lambda: C64) -> Vec<C64> {
        let dim = self.coeffs.first().map_or(0, Vec::len);
        let mut out = vec![ZERO; dim];
        for c in self.coeffs.iter().rev() {
            for (o, ci) in out.iter_mut().zip(c) {
                *o = *o * lambda + ci;
            }
        }
        out
    }
}

/// Taylor coefficients `P L^n x`, `n = 0..=order`, in defect coordinates.
/// A single weighted shift uses the closed form `x_n / beta_n`.
pub fn coefficients(m: &AnalyticModel, x: &FiniteSupportVector, order: usize) -> Result<ModelCoefficients> {
    m.check_vector(x)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    let exhausted = x.max_index().is_none_or(|k| k <= order);
    if let StructuredOperator::Shift(s) = &m.source {
        for n in 0..=order {
            coeffs.push(vec![x.get(n) / s.beta(n)]);
        }
    } else {
        let mut y = x.clone();
        for n in 0..=order {
            if n > 0 {
                y = m.apply_l(&y)?;
            }
            coeffs.push(m.defect_coordinates(&m.project(&y)?));
        }
    }
    let mut out = ModelCoefficients { coeffs, order, exhausted, tail_bound: 0.0, x_norm: x.norm(), l_norm: m.l_norm };
    out.tail_bound = out.tail_bound_at(0.5 * m.radius);
    Ok(out)
}

/// Smallest `N` with `q^{N+1} / ((1 - q)(1 - q_other)) <= tail_tol`.
fn adaptive_order(q: f64, q_other: f64, tol: &Tolerances) -> Result<usize> {
    if q == 0.0 {
        return Ok(0);
    }
    let denom = (1.0 - q) * (1.0 - q_other);
    let target = tol.tail_tol * denom;
    let n = ((target.ln() / q.ln()).ceil() as i64 - 1).max(0) as usize;
    if n > MAX_ORDER {
        return Err(Error::TailNotConvergent { cap: MAX_ORDER });
    }
    Ok(n)
}

/// `sum_{m=0}^{N} (conj(lambda) L*)^m v`
fn resolvent_adjoint(m: &AnalyticModel, lambda: C64, v: &FiniteSupportVector, order: usize) -> Result<FiniteSupportVector> {
    let lb = lambda.conj();
    let mut term = v.clone();
    let mut sum = v.clone();
    for _ in 0..order {
        term = m.apply_l_adjoint(&term)?.scale(lb);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    Ok(sum)
}

/// `P (I - zL)^{-1} y` for finitely supported `y`; the series terminates
/// because `L` lowers the support.
fn project_resolvent(m: &AnalyticModel, z: C64, y: &FiniteSupportVector) -> Result<FiniteSupportVector> {
    let mut term = y.clone();
    let mut sum = FiniteSupportVector::zero(y.ambient());
    let mut zn = ONE;
    loop {
        sum = sum.axpy(zn, &m.project(&term)?);
        term = m.apply_l(&term)?;
        if term.is_zero() {
            break;
        }
        zn *= z;
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelValue {
    /// `(i, j) -> <k(lambda, z) e_j, e_i>`
    pub matrix: ComplexMatrix,
    pub order: usize,
    pub tail_bound: f64,
}

/// `k(lambda, z)` compressed to `E`. The `conj(lambda) L*` series is cut at an
/// order chosen from the geometric tail bound; the `z L` series is summed
/// exactly.
pub fn kernel_eval(m: &AnalyticModel, lambda: C64, z: C64, tol: &Tolerances) -> Result<KernelValue> {
    m.check_point(lambda)?;
    m.check_point(z)?;
    let ql = lambda.norm() * m.l_norm;
    let qz = z.norm() * m.l_norm;
    let order = adaptive_order(ql, qz, tol)?;
    let d = m.defect_dim();
    let mut matrix = ComplexMatrix::zeros(d);
    for (j, ej) in m.defect_basis.iter().enumerate() {
        let y = resolvent_adjoint(m, lambda, ej, order)?;
        let col = m.defect_coordinates(&project_resolvent(m, z, &y)?);
        for (i, c) in col.into_iter().enumerate() {
            matrix[(i, j)] = c;
        }
    }
    let tail_bound = if ql == 0.0 { 0.0 } else { ql.powi(order as i32 + 1) / ((1.0 - ql) * (1.0 - qz)) };
    Ok(KernelValue { matrix, order, tail_bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntertwiningReport {
    pub order: usize,
    /// `max_n |coeffs(Tx)[n] - coeffs(x)[n-1]|`, including `|coeffs(Tx)[0]|`
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks that the coefficients of `Tx` are those of `x` shifted by one.
pub fn verify_intertwining(m: &AnalyticModel, x: &FiniteSupportVector, order: usize) -> Result<IntertwiningReport> {
    let cx = coefficients(m, x, order)?;
    let ctx = coefficients(m, &m.source.apply(x)?, order)?;
    let mut residual = ctx.coeffs[0].iter().map(|c| c.norm()).fold(0.0, f64::max);
    for n in 1..=order {
        for (a, b) in ctx.coeffs[n].iter().zip(&cx.coeffs[n - 1]) {
            residual = residual.max((a - b).norm());
        }
    }
    let tolerance = 1e-12;
    Ok(IntertwiningReport { order, residual, tolerance, pass: residual <= tolerance })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproducingReport {
    /// `<(Ux)(lambda), e>_E`
    pub evaluation: C64,
    /// `<x, (I - conj(lambda) L*)^{-1} e>`
    pub pairing: C64,
    pub residual: f64,
    pub tail_bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares the two sides of the reproducing identity
/// `<(Ux)(lambda), e> = <x, (I - conj(lambda) L*)^{-1} e>` for `e` in `E`.
pub fn verify_reproducing(
    m: &AnalyticModel,
    x: &FiniteSupportVector,
    lambda: C64,
    e: &FiniteSupportVector,
    tol: &Tolerances,
) -> Result<ReproducingReport> {
    m.check_vector(x)?;
    m.check_vector(e)?;
    m.check_point(lambda)?;
    let e_coords = m.defect_coordinates(e);
    let distance = e.sub(&m.defect_vector(&e_coords)?).norm();
    if distance > tol.residual_tol * e.norm().max(1.0) {
        return Err(Error::NotInDefectSpace { distance });
    }

    let cx = coefficients(m, x, x.max_index().unwrap_or(0))?;
    let evaluation = numkit::inner(&cx.evaluate(lambda), &e_coords);

    let q = lambda.norm() * m.l_norm;
    let order = adaptive_order(q, 0.0, tol)?;
    let pairing = x.inner(&resolvent_adjoint(m, lambda, e, order)?);
    let tail_bound = if q == 0.0 { 0.0 } else { x.norm() * e.norm() * q.powi(order as i32 + 1) / (1.0 - q) };

    let residual = (evaluation - pairing).norm();
    let tolerance = tail_bound + tol.residual_tol;
    Ok(ReproducingReport { evaluation, pairing, residual, tail_bound, tolerance, pass: residual <= tolerance })
}

/// Taylor coefficients of `e_t(z) = exp(t (z + 1)/(z - 1))` through degree
/// `order`, from `e_t = e^{-t} exp(-2t sum_{n>=1} z^n)` and the recurrence
/// `n g_n = -2t sum_{k=1}^n k g_{n-k}`.
pub fn semigroup_multiplier(t: f64, order: usize) -> Result<PowerSeries> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
    }
    let mut g = vec![ZERO; order + 1];
    g[0] = ONE;
    for n in 1..=order {
        let s: f64 = (1..=n).map(|k| k as f64 * g[n - k].re).sum();
        g[n] = C64::new(-2.0 * t * s / n as f64, 0.0);
    }
    let scale = (-t).exp();
    PowerSeries::new(g.into_iter().map(|c| c * scale).collect())
}

/// `(z + 1)/(z - 1) = -1 - 2 sum_{n>=1} z^n`
pub fn generator_symbol(order: usize) -> PowerSeries {
    let coeffs = (0..=order).map(|n| C64::new(if n == 0 { -1.0 } else { -2.0 }, 0.0)).collect();
    PowerSeries::new(coeffs).expect("finite coefficients")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemigroupModelReport {
    pub t: f64,
    pub order: usize,
    /// `max |e_0 - 1|` coefficientwise
    pub identity_residual: f64,
    /// central-difference `d/dt (e_t f)` against `(z + 1)/(z - 1) e_t f`
    pub derivative_residual: f64,
    pub derivative_tolerance: f64,
    /// `e_t (z f)` against `z (e_t f)` through degree `order - 1`
    pub commutation_residual: f64,
    pub pass: bool,
    pub convention: &'static str,
}

/// Finite-difference step of the derivative check.
pub const DERIVATIVE_STEP: f64 = 1e-5;

/// Model-side checks of the multiplier semigroup on the coefficient series of
/// `Ux` (one per defect coordinate) and on `f = 1`.
pub fn verify_semigroup_model(m: &AnalyticModel, t: f64, x: &FiniteSupportVector, order: usize) -> Result<SemigroupModelReport> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!("time must be finite and nonnegative, got {t}")));
    }
    let cx = coefficients(m, x, order)?;
    let mut fs = vec![PowerSeries::one(order)];
    for j in 0..m.defect_dim() {
        fs.push(PowerSeries::new(cx.coeffs.iter().map(|c| c[j]).collect())?);
    }

    let e0 = semigroup_multiplier(0.0, order)?;
    let identity_residual = e0.sub(&PowerSeries::one(order)).coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);

    let h = DERIVATIVE_STEP;
    let et = semigroup_multiplier(t, order)?;
    let shifted = |k: f64| semigroup_multiplier(t + k * h, order);
    let (p1, p2, m1, m2) = (shifted(1.0)?, shifted(2.0)?, shifted(-1.0)?, shifted(-2.0)?);
    // fourth-order central difference
    let de: Vec<C64> = (0..=order)
        .map(|k| (-p2.get(k) + p1.get(k) * 8.0 - m1.get(k) * 8.0 + m2.get(k)) / (12.0 * h))
        .collect();
    let de = PowerSeries::new(de)?;
    let g = generator_symbol(order);

    let mut derivative_residual: f64 = 0.0;
    let mut commutation_residual: f64 = 0.0;
    for f in &fs {
        let lhs = de.mul(f);
        let rhs = g.mul(&et).mul(f);
        derivative_residual = lhs.sub(&rhs).coeffs().iter().map(|c| c.norm()).fold(derivative_residual, f64::max);

        let a = et.mul(&f.times_z());
        let b = et.mul(f).times_z();
        for k in 0..order {
            commutation_residual = commutation_residual.max((a.get(k) - b.get(k)).norm());
        }
    }
    let derivative_tolerance = 1e-6;
    Ok(SemigroupModelReport {
        t,
        order,
        identity_residual,
        derivative_residual,
        derivative_tolerance,
        commutation_residual,
        pass: identity_residual == 0.0 && derivative_residual <= derivative_tolerance && commutation_residual == 0.0,
        convention: SIGN_CONVENTION,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WoldBlock {
    /// dimension of the unitary part
    pub unitary_dim: usize,
    /// dimension of the pure part; `None` for an infinite-dimensional shift block
    pub pure_dim: Option<usize>,
    pub unitarity_residual: f64,
    pub invariance_residual: f64,
    /// the compression to the pure part has the wandering subspace property
    pub wandering_full: bool,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WoldReport {
    pub unitary_dim: usize,
    pub pure_dim: Option<usize>,
    pub unitarity_residual: f64,
    pub invariance_residual: f64,
    pub wandering_full: bool,
    pub blocks: Vec<WoldBlock>,
}

fn wold_dense(v: &ComplexMatrix, steps: usize, tol: &Tolerances) -> Result<WoldBlock> {
    v.ensure_finite("wold_decompose")?;
    let n = v.dim();
    let stable = stable_range_capped(v, tol, steps);
    let q = &stable.basis;
    let k = q.len();

    let images: Vec<Vec<C64>> = q.iter().map(|u| v.mul_vec(u)).collect();
    let mut unitarity_residual: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let want = if i == j { ONE } else { ZERO };
            unitarity_residual = unitarity_residual.max((numkit::inner(&images[j], &images[i]) - want).norm());
        }
    }
    let mut invariance_residual: f64 = 0.0;
    for w in &images {
        let mut r = w.clone();
        for u in q {
            let c = numkit::inner(w, u);
            for (ri, ui) in r.iter_mut().zip(u) {
                *ri -= c * ui;
            }
        }
        invariance_residual = invariance_residual.max(numkit::vec_norm(&r));
    }

    let padded = ComplexMatrix::from_fn(n, |i, j| if j < k { q[j][i] } else { ZERO });
    let complement = if k == 0 {
        (0..n).map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect()).collect()
    } else {
        numkit::orthonormal_cokernel_basis(&padded, tol)?
    };
    let p = complement.len();
    let wandering_full = if p == 0 {
        true
    } else {
        let compressed =
            ComplexMatrix::from_fn(p, |i, j| numkit::inner(&v.mul_vec(&complement[j]), &complement[i]));
        wandering_span_dim_scaled(&compressed, tol, v.norm_two())? == p
    };
    Ok(WoldBlock {
        unitary_dim: k,
        pure_dim: Some(p),
        unitarity_residual,
        invariance_residual,
        wandering_full,
        steps: stable.steps,
    })
}

/// Splits `V` into a unitary part `⋂ V^k H` (approximated by the range of
/// powers once its dimension stabilizes, at most `steps` iterations) and its
/// orthogonal complement. Shift blocks are pure with an infinite pure part.
pub fn wold_decompose(v: &StructuredOperator, steps: usize, tol: &Tolerances) -> Result<WoldReport> {
    let blocks: Vec<WoldBlock> = match v {
        StructuredOperator::Dense(m) => vec![wold_dense(m, steps, tol)?],
        StructuredOperator::Shift(_) => vec![shift_block()],
        StructuredOperator::DirectSum(parts) => parts
            .iter()
            .map(|p| match p {
                StructuredOperator::Dense(m) => wold_dense(m, steps, tol),
                StructuredOperator::Shift(_) => Ok(shift_block()),
                StructuredOperator::DirectSum(_) => {
                    Err(Error::UnsupportedRegime("nested direct sums in a Wold decomposition".into()))
                }
            })
            .collect::<Result<_>>()?,
    };
    let pure_dim = blocks.iter().try_fold(0usize, |acc, b| b.pure_dim.map(|d| acc + d));
    Ok(WoldReport {
        unitary_dim: blocks.iter().map(|b| b.unitary_dim).sum(),
        pure_dim,
        unitarity_residual: blocks.iter().map(|b| b.unitarity_residual).fold(0.0, f64::max),
        invariance_residual: blocks.iter().map(|b| b.invariance_residual).fold(0.0, f64::max),
        wandering_full: blocks.iter().all(|b| b.wandering_full),
        blocks,
    })
}

fn shift_block() -> WoldBlock {
    WoldBlock {
        unitary_dim: 0,
        pure_dim: None,
        unitarity_residual: 0.0,
        invariance_residual: 0.0,
        wandering_full: true,
        steps: 0,
    }
}
