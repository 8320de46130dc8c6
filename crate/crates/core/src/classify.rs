//! Operator classes built on the defect `D = T*^2 T^2 - 2 T*T + I`:
//! concave (`D <= 0`), 2-isometry (`D = 0`), 2-contraction (`D >= 0`); plus
//! bounded below, pure and wandering-subspace tests.
//!
//! Weighted shifts are decided in closed form (`D` is diagonal with entries
//! `w_k^2 w_{k+1}^2 - 2 w_k^2 + 1`). Dense matrices use Hermitian spectra.
//!
//! A finite-dimensional operator is pure exactly when it is nilpotent, and so
//! can never be bounded below and pure at once; analytic models therefore
//! require the shift regime.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::{self, ComplexMatrix, Tolerances, C64};
use crate::operators::{FiniteSupportVector, StructuredOperator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Flag {
    pub holds: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodFlag {
    pub holds: bool,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    /// margin: `inf ||Tx||/||x||`
    pub bounded_below: Flag,
    /// margin: largest eigenvalue of `D`
    pub concave: Flag,
    /// margin: `||D||`
    pub two_isometry: Flag,
    /// margin: smallest eigenvalue of `D`
    pub two_contraction: Flag,
    pub pure: MethodFlag,
    pub wandering: MethodFlag,
}

struct Pieces {
    lower_bound: f64,
    bounded_below: bool,
    defect_min: f64,
    defect_max: f64,
    pure: bool,
    pure_method: String,
    wandering: bool,
    wandering_method: String,
}

impl Pieces {
    fn into_report(self, tol: &Tolerances) -> ClassificationReport {
        let concave = self.defect_max <= tol.psd_tol;
        let two_contraction = self.defect_min >= -tol.psd_tol;
        ClassificationReport {
            bounded_below: Flag { holds: self.bounded_below, margin: self.lower_bound },
            concave: Flag { holds: concave, margin: self.defect_max },
            two_isometry: Flag {
                holds: concave && two_contraction,
                margin: self.defect_max.abs().max(self.defect_min.abs()),
            },
            two_contraction: Flag { holds: two_contraction, margin: self.defect_min },
            pure: MethodFlag { holds: self.pure, method: self.pure_method },
            wandering: MethodFlag { holds: self.wandering, method: self.wandering_method },
        }
    }
}

pub fn classify_operator(t: &StructuredOperator, tol: &Tolerances) -> Result<ClassificationReport> {
    Ok(pieces(t, tol)?.into_report(tol))
}

fn pieces(t: &StructuredOperator, tol: &Tolerances) -> Result<Pieces> {
    match t {
        StructuredOperator::Dense(m) => dense_pieces(m, tol),
        StructuredOperator::Shift(s) => {
            let (lo, hi) = s.defect_extrema();
            Ok(Pieces {
                lower_bound: s.inf_weight(),
                bounded_below: true,
                defect_min: lo,
                defect_max: hi,
                pure: true,
                pure_method: "closed form: weighted shifts are pure".into(),
                wandering: true,
                wandering_method: "closed form: e_0 generates".into(),
            })
        }
        StructuredOperator::DirectSum(parts) => {
            let all = parts.iter().map(|p| pieces(p, tol)).collect::<Result<Vec<_>>>()?;
            Ok(Pieces {
                lower_bound: all.iter().map(|p| p.lower_bound).fold(f64::INFINITY, f64::min),
                bounded_below: all.iter().all(|p| p.bounded_below),
                defect_min: all.iter().map(|p| p.defect_min).fold(f64::INFINITY, f64::min),
                defect_max: all.iter().map(|p| p.defect_max).fold(f64::NEG_INFINITY, f64::max),
                pure: all.iter().all(|p| p.pure),
                pure_method: "blockwise".into(),
                wandering: all.iter().all(|p| p.wandering),
                wandering_method: "blockwise".into(),
            })
        }
    }
}

/// `T*^2 T^2 - 2 T*T + I`
pub fn concavity_defect_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    let gram = m.adjoint().matmul(m);
    let sq = m.matmul(m);
    let gram2 = sq.adjoint().matmul(&sq);
    (&gram2 - &gram.scale_real(2.0)).shift_diag(C64::new(1.0, 0.0))
}

fn dense_pieces(m: &ComplexMatrix, tol: &Tolerances) -> Result<Pieces> {
    m.ensure_finite("classify_operator")?;
    let n = m.dim();
    let sv = numkit::singular_values(m);
    let (largest, smallest) = (sv[0], sv[n - 1]);
    let bounded_below = largest > 0.0 && smallest > tol.rank_tol * largest;

    let eig = numkit::hermitian_eigenvalues(&concavity_defect_matrix(m))?;

    let stable = stable_range(m, tol);
    let wandering = wandering_span_dim(m, tol)? == n;
    Ok(Pieces {
        lower_bound: smallest,
        bounded_below,
        defect_min: eig[n - 1],
        defect_max: eig[0],
        pure: stable.basis.is_empty(),
        pure_method: format!("nilpotency: range of powers stabilized at dimension {} after {} steps", stable.basis.len(), stable.steps),
        wandering,
        wandering_method: "dimension of span{T^k E}".into(),
    })
}

/// Orthonormal basis of `⋂ T^k H` found by iterating `Q <- orth(T Q)` until the
/// dimension is unchanged for two consecutive steps. Directions are kept when
/// their singular value exceeds `rank_tol * ||T||`.
pub struct StableRange {
    pub basis: Vec<Vec<C64>>,
    pub steps: usize,
}

pub fn stable_range(m: &ComplexMatrix, tol: &Tolerances) -> StableRange {
    stable_range_capped(m, tol, m.dim() + 1)
}

pub fn stable_range_capped(m: &ComplexMatrix, tol: &Tolerances, max_steps: usize) -> StableRange {
    let n = m.dim();
    let cutoff = tol.rank_tol * m.norm_two();
    let mut basis: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();
    let mut steps = 0;
    while steps < max_steps {
        let images: Vec<Vec<C64>> = basis.iter().map(|v| m.mul_vec(v)).collect();
        let next = numkit::orthonormal_span_above(&images, n, cutoff);
        steps += 1;
        let stalled = next.len() == basis.len();
        basis = next;
        if stalled || basis.is_empty() {
            break;
        }
    }
    StableRange { basis, steps }
}

/// Dimension of `span{T^k E : k >= 0}` with `E = H ⊖ TH`.
pub fn wandering_span_dim(m: &ComplexMatrix, tol: &Tolerances) -> Result<usize> {
    wandering_span_dim_scaled(m, tol, m.norm_two())
}

/// As [`wandering_span_dim`], with singular values below `rank_tol * scale`
/// treated as zero. Compressions of a larger operator should pass its norm.
pub fn wandering_span_dim_scaled(m: &ComplexMatrix, tol: &Tolerances, scale: f64) -> Result<usize> {
    let n = m.dim();
    let cutoff = tol.rank_tol * scale;
    let mut frontier = numkit::range_and_complement_above(m, cutoff)?.1;
    let mut span = frontier.clone();
    for _ in 0..n {
        if frontier.is_empty() || span.len() == n {
            break;
        }
        let images: Vec<Vec<C64>> = frontier.iter().map(|v| m.mul_vec(v)).collect();
        frontier = numkit::orthonormal_span_above(&images, n, cutoff);
        let mut all = span.clone();
        all.extend(frontier.iter().cloned());
        span = numkit::orthonormal_span_above(&all, n, tol.rank_tol);
    }
    Ok(span.len())
}

/// Generator-side concavity: the largest eigenvalue of
/// `(A^2 + (A^2)*)/2 + A*A` must not exceed `psd_tol`. In finite dimension
/// the domain of `A^2` is the whole space, so this is exact.
pub fn generator_concavity_criterion(a: &ComplexMatrix, tol: &Tolerances) -> Result<Flag> {
    a.ensure_finite("generator_concavity_criterion")?;
    let margin = numkit::hermitian_max_eig(&generator_concavity_form(a))?;
    Ok(Flag { holds: margin <= tol.psd_tol, margin })
}

/// `(A^2 + (A^2)*)/2 + A*A`, whose quadratic form is `Re<A^2 y, y> + ||Ay||^2`.
pub fn generator_concavity_form(a: &ComplexMatrix) -> ComplexMatrix {
    let sq = a.matmul(a);
    &sq.hermitian_part() + &a.adjoint().matmul(a)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerGrowthReport {
    pub holds: bool,
    /// `max_n ||T^n x||^2 - (||x||^2 + n (||Tx||^2 - ||x||^2))`
    pub worst_excess: f64,
    pub steps: usize,
    pub tolerance: f64,
}

/// Concave increment bound `||T^n x||^2 <= ||x||^2 + n (||Tx||^2 - ||x||^2)`
/// for `n = 1..=steps`, which follows from nonpositive second differences of
/// `n -> ||T^n x||^2`.
pub fn concave_power_growth_check(
    t: &StructuredOperator,
    x: &FiniteSupportVector,
    steps: usize,
    tol: &Tolerances,
) -> Result<PowerGrowthReport> {
    let report = classify_operator(t, tol)?;
    if !report.concave.holds {
        return Err(Error::NotConcave { defect: report.concave.margin });
    }
    let base = x.norm_sqr();
    let mut y = t.apply(x)?;
    let increment = y.norm_sqr() - base;
    let mut worst = f64::NEG_INFINITY;
    for n in 1..=steps {
        if n > 1 {
            y = t.apply(&y)?;
        }
        let excess = y.norm_sqr() - (base + n as f64 * increment);
        worst = worst.max(excess);
    }
    Ok(PowerGrowthReport { holds: worst <= tol.residual_tol, worst_excess: worst, steps, tolerance: tol.residual_tol })
}
