//! Uniformly continuous semigroups `T_t = exp(tA)` on `C^n`: evolution, the
//! Cayley cogenerator `V = (A + I)(A - I)^{-1}` and its inverse, the growth
//! bound, quasicontractive rescaling, and a check of the four equivalent
//! descriptions of concavity (every `T_t` concave; `t -> ||T_t x||^2` concave;
//! the generator inequality `Re<A^2 y, y> + ||Ay||^2 <= 0`; `V` concave).

use serde::Serialize;

use crate::classify::{self, Flag};
use crate::error::{Error, Result};
use crate::numkit::{self, ComplexMatrix, Tolerances, C64};
use crate::operators::StructuredOperator;
use crate::random;

#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupSpec {
    pub generator: ComplexMatrix,
    pub label: Option<String>,
}

impl SemigroupSpec {
    pub fn new(generator: ComplexMatrix) -> Self {
        Self { generator, label: None }
    }

    pub fn labeled(generator: ComplexMatrix, label: impl Into<String>) -> Self {
        Self { generator, label: Some(label.into()) }
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }
}

/// `T_t = exp(tA)`; `T_0 = I` exactly.
pub fn evolve(s: &SemigroupSpec, t: f64) -> Result<ComplexMatrix> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!("time must be finite and nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(ComplexMatrix::identity(s.dim()));
    }
    numkit::expm(&s.generator.scale_real(t))
}

/// `(M + I)(M - I)^{-1}`, which is its own inverse map.
fn cayley(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    m.ensure_finite("cayley")?;
    let minus = m.shift_diag(C64::new(-1.0, 0.0));
    let ratio = numkit::inverse_condition(&minus);
    if ratio < tol.rank_tol {
        return Err(Error::OneInSpectrum { ratio });
    }
    let plus = m.shift_diag(C64::new(1.0, 0.0));
    // (M+I) and (M-I)^{-1} commute
    numkit::solve_matrix(&minus, &plus, tol).map_err(|_| Error::OneInSpectrum { ratio })
}

/// Cogenerator `V = (A + I)(A - I)^{-1}`.
pub fn cogenerator(s: &SemigroupSpec, tol: &Tolerances) -> Result<ComplexMatrix> {
    cayley(&s.generator, tol)
}

/// Generator from a cogenerator: `A = (V + I)(V - I)^{-1}`.
pub fn inverse_cayley(v: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    cayley(v, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthBound {
    pub omega: f64,
    pub method: &'static str,
}

/// `omega = max Re sigma(A)`, exact for matrix generators.
pub fn growth_bound(s: &SemigroupSpec) -> Result<GrowthBound> {
    let omega = numkit::eigenvalues(&s.generator)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(GrowthBound { omega, method: "spectral" })
}

/// `|(1/t) log r(T_t) - omega|` for `t > 0`.
pub fn growth_bound_log_residual(s: &SemigroupSpec, bound: &GrowthBound, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument("log-limit check needs t > 0".into()));
    }
    let r = numkit::spectral_radius(&evolve(s, t)?)?;
    Ok((r.ln() / t - bound.omega).abs())
}

/// Generator `A - lambda I`, so that the new semigroup is `e^{-lambda t} T_t`.
pub fn quasicontractive_rescale(s: &SemigroupSpec, lambda: f64) -> SemigroupSpec {
    SemigroupSpec { generator: s.generator.shift_diag(C64::new(-lambda, 0.0)), label: s.label.clone() }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceConfig {
    pub t_grid: Vec<f64>,
    /// Step of the second differences in condition (ii).
    pub step: f64,
    /// Number of random unit vectors in condition (ii), besides the standard basis.
    pub samples: usize,
    /// Allowed positive second difference; `None` means `10 * residual_tol`.
    pub slack: Option<f64>,
    pub seed: u64,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        Self {
            t_grid: (1..=20).map(|k| k as f64 / 10.0).collect(),
            step: 0.05,
            samples: 16,
            slack: None,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    /// (i) every `T_t` on the grid concave; margin: worst defect eigenvalue.
    pub semigroup_concave: Flag,
    /// (ii) `t -> ||T_t x||^2` has nonpositive second differences; margin: worst one.
    pub norm_profile_concave: Flag,
    /// (iii) generator inequality; margin: largest eigenvalue of the form.
    pub generator_inequality: Flag,
    /// (iv) cogenerator concave; margin: its worst defect eigenvalue.
    pub cogenerator_concave: Flag,
    pub agree: bool,
    pub slack: f64,
}

impl EquivalenceReport {
    pub fn conditions(&self) -> [bool; 4] {
        [
            self.semigroup_concave.holds,
            self.norm_profile_concave.holds,
            self.generator_inequality.holds,
            self.cogenerator_concave.holds,
        ]
    }
}

/// Evaluates the four concavity conditions independently and reports
/// whether they agree. Conditions (i) and (ii) are checked on a finite time
/// grid, so they are desk-scale surrogates for the continuum statements.
pub fn concavity_equivalence_suite(
    s: &SemigroupSpec,
    config: &EquivalenceConfig,
    tol: &Tolerances,
) -> Result<EquivalenceReport> {
    let n = s.dim();
    let v = cogenerator(s, tol)?;
    let slack = config.slack.unwrap_or(10.0 * tol.residual_tol);

    // (i)
    let mut worst_i = f64::NEG_INFINITY;
    for &t in &config.t_grid {
        let report = classify::classify_operator(&StructuredOperator::Dense(evolve(s, t)?), tol)?;
        worst_i = worst_i.max(report.concave.margin);
    }
    let cond_i = Flag { holds: worst_i <= tol.psd_tol, margin: worst_i };

    // (ii)
    let mut rng = random::rng(config.seed);
    let mut probes: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    probes.extend((0..config.samples).map(|_| random::unit_vector(&mut rng, n)));
    let step_op = evolve(s, config.step)?;
    let mut worst_ii = f64::NEG_INFINITY;
    for t in std::iter::once(0.0).chain(config.t_grid.iter().copied()) {
        let t0 = evolve(s, t)?;
        let t1 = step_op.matmul(&t0);
        let t2 = step_op.matmul(&t1);
        for x in &probes {
            let phi = |m: &ComplexMatrix| numkit::vec_norm(&m.mul_vec(x)).powi(2);
            let second = phi(&t2) + phi(&t0) - 2.0 * phi(&t1);
            worst_ii = worst_ii.max(second);
        }
    }
    let cond_ii = Flag { holds: worst_ii <= slack, margin: worst_ii };

    // (iii)
    let cond_iii = classify::generator_concavity_criterion(&s.generator, tol)?;

    // (iv)
    let cond_iv = classify::classify_operator(&StructuredOperator::Dense(v), tol)?.concave;

    let all = [cond_i.holds, cond_ii.holds, cond_iii.holds, cond_iv.holds];
    Ok(EquivalenceReport {
        semigroup_concave: cond_i,
        norm_profile_concave: cond_ii,
        generator_inequality: cond_iii,
        cogenerator_concave: cond_iv,
        agree: all.iter().all(|&b| b == all[0]),
        slack,
    })
}
