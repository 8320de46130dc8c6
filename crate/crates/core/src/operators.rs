//! Operators acting exactly on finitely supported vectors: dense matrices on a
//! finite ambient, weighted forward shifts on `l^2(N)`, and direct sums of
//! both.
//!
//! Weighted shifts carry a finite head of weights followed by a closed-form
//! tail `w_k = c * sqrt((k + a) / (k + b))`. Taking `a = b` gives an
//! eventually-constant tail; `(a, b) = (2, 1)` gives the Dirichlet shift and
//! `(1, 2)` its Cauchy dual. Every quantity the models need (`T*T`, bounds,
//! spectral radius, the Cauchy dual) stays in this family and is evaluated in
//! closed form.
//!
//! Direct sums lay out coordinates as follows: the finite-dimensional parts
//! come first, concatenated in order; the infinite parts follow, interleaved
//! (local index `k` of the `j`-th infinite part among `q` sits at
//! `offset + k * q + j`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{self, ComplexMatrix, Tolerances, C64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Finite(n) => write!(f, "finite({n})"),
            Ambient::Infinite => write!(f, "infinite"),
        }
    }
}

impl Ambient {
    fn admits(&self, index: usize) -> bool {
        match *self {
            Ambient::Finite(n) => index < n,
            Ambient::Infinite => true,
        }
    }
}

/// A vector with finitely many nonzero coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSupportVector {
    ambient: Ambient,
    entries: BTreeMap<usize, C64>,
}

impl FiniteSupportVector {
    pub fn zero(ambient: Ambient) -> Self {
        Self { ambient, entries: BTreeMap::new() }
    }

    pub fn basis(ambient: Ambient, index: usize) -> Result<Self> {
        Self::from_entries(ambient, [(index, C64::new(1.0, 0.0))])
    }

    pub fn from_entries(ambient: Ambient, entries: impl IntoIterator<Item = (usize, C64)>) -> Result<Self> {
        let mut out = Self::zero(ambient);
        for (k, z) in entries {
            if !ambient.admits(k) {
                return Err(Error::InvalidArgument(format!("index {k} outside ambient {ambient}")));
            }
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { context: "FiniteSupportVector" });
            }
            out.add_at(k, z);
        }
        Ok(out)
    }

    pub fn from_dense(ambient: Ambient, data: &[C64]) -> Result<Self> {
        Self::from_entries(ambient, data.iter().copied().enumerate())
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn get(&self, index: usize) -> C64 {
        self.entries.get(&index).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.entries.iter().map(|(&k, &z)| (k, z))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    fn add_at(&mut self, index: usize, z: C64) {
        if z == ZERO {
            return;
        }
        let slot = self.entries.entry(index).or_insert(ZERO);
        *slot += z;
        if *slot == ZERO {
            self.entries.remove(&index);
        }
    }

    /// Dense coordinates `0..len`; entries beyond `len` are dropped.
    pub fn to_dense(&self, len: usize) -> Vec<C64> {
        let mut out = vec![ZERO; len];
        for (k, z) in self.iter().filter(|&(k, _)| k < len) {
            out[k] = z;
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().fold(0.0, |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self, other> = sum self_k conj(other_k)`
    pub fn inner(&self, other: &Self) -> C64 {
        let (small, large, swap) = if self.nnz() <= other.nnz() { (self, other, false) } else { (other, self, true) };
        let s: C64 = small
            .iter()
            .filter_map(|(k, z)| large.entries.get(&k).map(|&w| z * w.conj()))
            .sum();
        if swap {
            s.conj()
        } else {
            s
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero(self.ambient);
        for (k, z) in self.iter() {
            out.add_at(k, z * s);
        }
        out
    }

    /// `self + s * other`
    pub fn axpy(&self, s: C64, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, z) in other.iter() {
            out.add_at(k, s * z);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(C64::new(-1.0, 0.0), other)
    }
}

/// Wire format: `{"ambient": n | null, "data": [[re, im], ...]}` (dense from index 0).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    #[serde(default)]
    pub ambient: Option<usize>,
    pub data: Vec<[f64; 2]>,
}

impl TryFrom<VectorJson> for FiniteSupportVector {
    type Error = Error;
    fn try_from(raw: VectorJson) -> Result<Self> {
        let ambient = raw.ambient.map_or(Ambient::Infinite, Ambient::Finite);
        let data: Vec<C64> = raw.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        FiniteSupportVector::from_dense(ambient, &data)
    }
}

/// Closed-form tail `w_k = scale * sqrt((k + num_offset) / (k + den_offset))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftTail {
    pub scale: f64,
    pub num_offset: f64,
    pub den_offset: f64,
}

impl ShiftTail {
    pub fn constant(w: f64) -> Self {
        Self { scale: w, num_offset: 1.0, den_offset: 1.0 }
    }

    fn ratio(&self, k: f64) -> f64 {
        (k + self.num_offset) / (k + self.den_offset)
    }

    fn weight_sq(&self, k: usize) -> f64 {
        self.scale * self.scale * self.ratio(k as f64)
    }

    fn is_constant(&self) -> bool {
        self.num_offset == self.den_offset
    }
}

/// Weighted forward shift `e_k -> w_k e_{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedShift {
    head: Vec<f64>,
    tail: ShiftTail,
}

impl WeightedShift {
    /// Head weights followed by a constant tail.
    pub fn new(head_weights: Vec<f64>, tail_weight: f64) -> Result<Self> {
        Self::with_tail(head_weights, ShiftTail::constant(tail_weight))
    }

    pub fn with_tail(head_weights: Vec<f64>, tail: ShiftTail) -> Result<Self> {
        if let Some(w) = head_weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidArgument(format!("shift weights must be positive, got {w}")));
        }
        if !(tail.scale.is_finite() && tail.scale > 0.0) {
            return Err(Error::InvalidArgument(format!("tail weight must be positive, got {}", tail.scale)));
        }
        if !(tail.num_offset.is_finite() && tail.num_offset > 0.0 && tail.den_offset.is_finite() && tail.den_offset > 0.0)
        {
            return Err(Error::InvalidArgument("tail offsets must be positive".into()));
        }
        Ok(Self { head: head_weights, tail })
    }

    /// Unweighted unilateral shift.
    pub fn isometric() -> Self {
        Self { head: Vec::new(), tail: ShiftTail::constant(1.0) }
    }

    /// Shift on the Dirichlet space in its monomial basis: `w_k = sqrt((k+2)/(k+1))`.
    pub fn dirichlet() -> Self {
        Self { head: Vec::new(), tail: ShiftTail { scale: 1.0, num_offset: 2.0, den_offset: 1.0 } }
    }

    pub fn head_weights(&self) -> &[f64] {
        &self.head
    }

    pub fn tail(&self) -> ShiftTail {
        self.tail
    }

    pub fn weight(&self, k: usize) -> f64 {
        match self.head.get(k) {
            Some(&w) => w,
            None => self.tail.weight_sq(k).sqrt(),
        }
    }

    pub fn weight_sq(&self, k: usize) -> f64 {
        match self.head.get(k) {
            Some(&w) => w * w,
            None => self.tail.weight_sq(k),
        }
    }

    /// `beta_n = w_0 ... w_{n-1}`, so that `T^n e_0 = beta_n e_n`.
    pub fn beta(&self, n: usize) -> f64 {
        (0..n).map(|k| self.weight(k)).product()
    }

    fn tail_range(&self) -> (f64, f64) {
        let r = self.tail.ratio(self.head.len() as f64);
        let s = self.tail.scale;
        (s * r.min(1.0).sqrt(), s * r.max(1.0).sqrt())
    }

    /// `inf_k w_k`, the bounded-below constant.
    pub fn inf_weight(&self) -> f64 {
        self.head.iter().copied().fold(self.tail_range().0, f64::min)
    }

    /// `sup_k w_k = ||T||`.
    pub fn sup_weight(&self) -> f64 {
        self.head.iter().copied().fold(self.tail_range().1, f64::max)
    }

    /// `lim w_k`, which is also the spectral radius.
    pub fn limit_weight(&self) -> f64 {
        self.tail.scale
    }

    /// Weights `1 / w_k`; the tail family is closed under this map.
    pub fn reciprocal(&self) -> Self {
        Self {
            head: self.head.iter().map(|w| 1.0 / w).collect(),
            tail: ShiftTail {
                scale: 1.0 / self.tail.scale,
                num_offset: self.tail.den_offset,
                den_offset: self.tail.num_offset,
            },
        }
    }

    /// `d_k = w_k^2 w_{k+1}^2 - 2 w_k^2 + 1`, the value of
    /// `T*^2 T^2 - 2 T*T + I` on `e_k` (the operator is diagonal).
    pub fn concavity_defect(&self, k: usize) -> f64 {
        let a = self.weight_sq(k);
        let b = self.weight_sq(k + 1);
        a * b - 2.0 * a + 1.0
    }

    /// `(inf_k d_k, sup_k d_k)` over all `k >= 0`, evaluated exactly.
    ///
    /// On the tail `d_k` is a degree-(2,2) rational function of `k`; its
    /// extrema over the integers `k >= m` are attained at `k = m`, next to a
    /// real critical point, or approached at infinity.
    pub fn defect_extrema(&self) -> (f64, f64) {
        let m = self.head.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut visit = |d: f64| {
            lo = lo.min(d);
            hi = hi.max(d);
        };
        for k in 0..m {
            visit(self.concavity_defect(k));
        }
        visit(self.concavity_defect(m));
        let c2 = self.tail.scale * self.tail.scale;
        let limit = (c2 - 1.0) * (c2 - 1.0);
        visit(limit);
        if self.tail.is_constant() {
            return (lo, hi);
        }
        let (a, b) = (self.tail.num_offset, self.tail.den_offset);
        let c4 = c2 * c2;
        let alpha1 = c4 * (2.0 * a + 1.0) - 2.0 * c2 * (a + b + 1.0) + (2.0 * b + 1.0);
        let alpha0 = c4 * a * (a + 1.0) - 2.0 * c2 * a * (b + 1.0) + b * (b + 1.0);
        let beta = alpha1 - limit * (2.0 * b + 1.0);
        let gamma = alpha0 - limit * b * (b + 1.0);
        // critical points solve -beta k^2 - 2 gamma k + beta b (b+1) - gamma (2b+1) = 0
        let qa = -beta;
        let qb = -2.0 * gamma;
        let qc = beta * b * (b + 1.0) - gamma * (2.0 * b + 1.0);
        let mut roots = Vec::new();
        if qa.abs() > 0.0 {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                roots.push((-qb + sq) / (2.0 * qa));
                roots.push((-qb - sq) / (2.0 * qa));
            }
        } else if qb.abs() > 0.0 {
            roots.push(-qc / qb);
        }
        for r in roots {
            if r.is_finite() && r > m as f64 {
                let k = r.floor() as usize;
                visit(self.concavity_defect(k.max(m)));
                visit(self.concavity_defect(k + 1));
            }
        }
        (lo, hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StructuredOperator {
    Dense(ComplexMatrix),
    Shift(WeightedShift),
    DirectSum(Vec<StructuredOperator>),
}

impl From<ComplexMatrix> for StructuredOperator {
    fn from(m: ComplexMatrix) -> Self {
        StructuredOperator::Dense(m)
    }
}

impl From<WeightedShift> for StructuredOperator {
    fn from(s: WeightedShift) -> Self {
        StructuredOperator::Shift(s)
    }
}

/// How a direct sum places its parts in global coordinates.
struct Layout {
    /// per part: (finite size or None, offset for finite, rank among infinite parts)
    slots: Vec<Slot>,
    finite_total: usize,
    infinite_count: usize,
}

#[derive(Clone, Copy)]
enum Slot {
    Finite { offset: usize, size: usize },
    Infinite { rank: usize },
}

impl Layout {
    fn of(parts: &[StructuredOperator]) -> Self {
        let mut slots = Vec::with_capacity(parts.len());
        let mut finite_total = 0;
        let mut infinite_count = 0;
        for p in parts {
            match p.ambient() {
                Ambient::Finite(size) => {
                    slots.push(Slot::Finite { offset: finite_total, size });
                    finite_total += size;
                }
                Ambient::Infinite => {
                    slots.push(Slot::Infinite { rank: infinite_count });
                    infinite_count += 1;
                }
            }
        }
        Self { slots, finite_total, infinite_count }
    }

    fn ambient(&self) -> Ambient {
        if self.infinite_count == 0 {
            Ambient::Finite(self.finite_total)
        } else {
            Ambient::Infinite
        }
    }

    fn to_global(&self, part: usize, local: usize) -> usize {
        match self.slots[part] {
            Slot::Finite { offset, .. } => offset + local,
            Slot::Infinite { rank } => self.finite_total + local * self.infinite_count + rank,
        }
    }

    fn to_local(&self, global: usize) -> (usize, usize) {
        if global < self.finite_total {
            for (p, slot) in self.slots.iter().enumerate() {
                if let Slot::Finite { offset, size } = *slot {
                    if global >= offset && global < offset + size {
                        return (p, global - offset);
                    }
                }
            }
            unreachable!("finite coordinate not covered by any part");
        }
        let rel = global - self.finite_total;
        let rank = rel % self.infinite_count;
        let local = rel / self.infinite_count;
        let part = self
            .slots
            .iter()
            .position(|s| matches!(s, Slot::Infinite { rank: r } if *r == rank))
            .expect("infinite rank exists");
        (part, local)
    }
}

impl StructuredOperator {
    pub fn direct_sum(parts: Vec<StructuredOperator>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("direct sum needs at least one part".into()));
        }
        Ok(StructuredOperator::DirectSum(parts))
    }

    pub fn ambient(&self) -> Ambient {
        match self {
            StructuredOperator::Dense(m) => Ambient::Finite(m.dim()),
            StructuredOperator::Shift(_) => Ambient::Infinite,
            StructuredOperator::DirectSum(parts) => Layout::of(parts).ambient(),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, StructuredOperator::Dense(_))
    }

    /// True when every leaf is a weighted shift.
    pub fn is_shift_regime(&self) -> bool {
        match self {
            StructuredOperator::Dense(_) => false,
            StructuredOperator::Shift(_) => true,
            StructuredOperator::DirectSum(parts) => parts.iter().all(|p| p.is_shift_regime()),
        }
    }

    pub fn parts(&self) -> Option<&[StructuredOperator]> {
        match self {
            StructuredOperator::DirectSum(parts) => Some(parts),
            _ => None,
        }
    }

    fn check_ambient(&self, x: &FiniteSupportVector) -> Result<()> {
        let ambient = self.ambient();
        if x.ambient() != ambient {
            return Err(Error::AmbientMismatch { operator: ambient.to_string(), vector: x.ambient().to_string() });
        }
        Ok(())
    }

    /// Splits a global vector into per-part local vectors.
    pub fn split(&self, x: &FiniteSupportVector) -> Result<Vec<FiniteSupportVector>> {
        self.check_ambient(x)?;
        let parts = match self {
            StructuredOperator::DirectSum(parts) => parts,
            _ => return Ok(vec![x.clone()]),
        };
        let layout = Layout::of(parts);
        let mut out: Vec<FiniteSupportVector> = parts.iter().map(|p| FiniteSupportVector::zero(p.ambient())).collect();
        for (k, z) in x.iter() {
            let (p, local) = layout.to_local(k);
            out[p].add_at(local, z);
        }
        Ok(out)
    }

    /// Inverse of [`split`](Self::split).
    pub fn join(&self, locals: &[FiniteSupportVector]) -> Result<FiniteSupportVector> {
        let parts = match self {
            StructuredOperator::DirectSum(parts) => parts,
            _ => {
                let x = locals.first().cloned().ok_or_else(|| Error::InvalidArgument("nothing to join".into()))?;
                self.check_ambient(&x)?;
                return Ok(x);
            }
        };
        if locals.len() != parts.len() {
            return Err(Error::DimensionMismatch { expected: parts.len(), actual: locals.len() });
        }
        let layout = Layout::of(parts);
        let mut out = FiniteSupportVector::zero(layout.ambient());
        for (p, (part, local)) in parts.iter().zip(locals).enumerate() {
            part.check_ambient(local)?;
            for (k, z) in local.iter() {
                out.add_at(layout.to_global(p, k), z);
            }
        }
        Ok(out)
    }

    fn blockwise(
        &self,
        x: &FiniteSupportVector,
        f: impl Fn(&StructuredOperator, &FiniteSupportVector) -> Result<FiniteSupportVector>,
    ) -> Result<FiniteSupportVector> {
        let parts = self.parts().expect("blockwise on a direct sum");
        let locals = self.split(x)?;
        let images = parts.iter().zip(&locals).map(|(p, l)| f(p, l)).collect::<Result<Vec<_>>>()?;
        self.join(&images)
    }

    /// Exact image `T x`.
    pub fn apply(&self, x: &FiniteSupportVector) -> Result<FiniteSupportVector> {
        self.check_ambient(x)?;
        match self {
            StructuredOperator::Dense(m) => {
                let y = m.mul_vec(&x.to_dense(m.dim()));
                FiniteSupportVector::from_dense(x.ambient(), &y)
            }
            StructuredOperator::Shift(s) => {
                let mut out = FiniteSupportVector::zero(Ambient::Infinite);
                for (k, z) in x.iter() {
                    out.add_at(k + 1, z * s.weight(k));
                }
                Ok(out)
            }
            StructuredOperator::DirectSum(_) => self.blockwise(x, |p, l| p.apply(l)),
        }
    }

    /// Exact image `T* x`.
    pub fn adjoint_apply(&self, x: &FiniteSupportVector) -> Result<FiniteSupportVector> {
        self.check_ambient(x)?;
        match self {
            StructuredOperator::Dense(m) => {
                let y = m.adjoint().mul_vec(&x.to_dense(m.dim()));
                FiniteSupportVector::from_dense(x.ambient(), &y)
            }
            StructuredOperator::Shift(s) => {
                let mut out = FiniteSupportVector::zero(Ambient::Infinite);
                for (k, z) in x.iter().filter(|&(k, _)| k > 0) {
                    out.add_at(k - 1, z * s.weight(k - 1));
                }
                Ok(out)
            }
            StructuredOperator::DirectSum(_) => self.blockwise(x, |p, l| p.adjoint_apply(l)),
        }
    }

    /// `(T*T)^{-1} x`. Exact (diagonal) for shifts.
    pub fn gram_apply_inverse(&self, x: &FiniteSupportVector, tol: &Tolerances) -> Result<FiniteSupportVector> {
        self.check_ambient(x)?;
        match self {
            StructuredOperator::Dense(m) => {
                let margin = dense_bounded_below_margin(m);
                if margin.1 <= tol.rank_tol {
                    return Err(Error::NotBoundedBelow { margin: margin.0 });
                }
                let gram = m.adjoint().matmul(m);
                let y = numkit::solve(&gram, &x.to_dense(m.dim()), tol)
                    .map_err(|_| Error::NotBoundedBelow { margin: margin.0 })?;
                FiniteSupportVector::from_dense(x.ambient(), &y)
            }
            StructuredOperator::Shift(s) => {
                let mut out = FiniteSupportVector::zero(Ambient::Infinite);
                for (k, z) in x.iter() {
                    out.add_at(k, z / s.weight_sq(k));
                }
                Ok(out)
            }
            StructuredOperator::DirectSum(_) => self.blockwise(x, |p, l| p.gram_apply_inverse(l, tol)),
        }
    }

    /// Spectral radius: closed form for shifts (the weight limit), Schur form
    /// for dense blocks with a Gelfand-formula fallback.
    pub fn spectral_radius_estimate(&self) -> f64 {
        match self {
            StructuredOperator::Dense(m) => numkit::spectral_radius(m).unwrap_or_else(|_| gelfand_estimate(m)),
            StructuredOperator::Shift(s) => s.limit_weight(),
            StructuredOperator::DirectSum(parts) => {
                parts.iter().map(|p| p.spectral_radius_estimate()).fold(0.0, f64::max)
            }
        }
    }

    /// Operator norm `||T||`.
    pub fn norm(&self) -> f64 {
        match self {
            StructuredOperator::Dense(m) => m.norm_two(),
            StructuredOperator::Shift(s) => s.sup_weight(),
            StructuredOperator::DirectSum(parts) => parts.iter().map(|p| p.norm()).fold(0.0, f64::max),
        }
    }

    /// `inf ||Tx|| / ||x||`: smallest singular value for dense blocks, the
    /// weight infimum for shifts.
    pub fn lower_bound(&self) -> f64 {
        match self {
            StructuredOperator::Dense(m) => dense_bounded_below_margin(m).0,
            StructuredOperator::Shift(s) => s.inf_weight(),
            StructuredOperator::DirectSum(parts) => {
                parts.iter().map(|p| p.lower_bound()).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Cauchy dual `T' = T (T*T)^{-1}`. Shifts map to the shift with weights `1/w_k`.
    pub fn cauchy_dual(&self, tol: &Tolerances) -> Result<Self> {
        match self {
            StructuredOperator::Dense(m) => {
                let margin = dense_bounded_below_margin(m);
                if margin.1 <= tol.rank_tol {
                    return Err(Error::NotBoundedBelow { margin: margin.0 });
                }
                let gram = m.adjoint().matmul(m);
                let inv = numkit::inverse(&gram, tol).map_err(|_| Error::NotBoundedBelow { margin: margin.0 })?;
                Ok(StructuredOperator::Dense(m.matmul(&inv)))
            }
            StructuredOperator::Shift(s) => Ok(StructuredOperator::Shift(s.reciprocal())),
            StructuredOperator::DirectSum(parts) => Ok(StructuredOperator::DirectSum(
                parts.iter().map(|p| p.cauchy_dual(tol)).collect::<Result<Vec<_>>>()?,
            )),
        }
    }

    /// Orthonormal basis of `H ⊖ TH = ker T*`.
    pub fn defect_basis(&self, tol: &Tolerances) -> Result<Vec<FiniteSupportVector>> {
        match self {
            StructuredOperator::Dense(m) => numkit::orthonormal_cokernel_basis(m, tol)?
                .iter()
                .map(|v| FiniteSupportVector::from_dense(self.ambient(), v))
                .collect(),
            StructuredOperator::Shift(_) => Ok(vec![FiniteSupportVector::basis(Ambient::Infinite, 0)?]),
            StructuredOperator::DirectSum(parts) => {
                let mut out = Vec::new();
                for (p, part) in parts.iter().enumerate() {
                    for local in part.defect_basis(tol)? {
                        let mut locals: Vec<FiniteSupportVector> =
                            parts.iter().map(|q| FiniteSupportVector::zero(q.ambient())).collect();
                        locals[p] = local;
                        out.push(self.join(&locals)?);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Dense matrix of the whole operator when the ambient is finite.
    pub fn to_dense(&self) -> Option<ComplexMatrix> {
        let Ambient::Finite(n) = self.ambient() else {
            return None;
        };
        let cols: Vec<Vec<C64>> = (0..n)
            .map(|j| {
                let e = FiniteSupportVector::basis(Ambient::Finite(n), j).expect("in range");
                self.apply(&e).expect("ambient matches").to_dense(n)
            })
            .collect();
        Some(ComplexMatrix::from_fn(n, |i, j| cols[j][i]))
    }
}

/// `(sigma_min, sigma_min / sigma_max)`
fn dense_bounded_below_margin(m: &ComplexMatrix) -> (f64, f64) {
    let s = numkit::singular_values(m);
    let smallest = s[s.len() - 1];
    let ratio = if s[0] > 0.0 { smallest / s[0] } else { 0.0 };
    (smallest, ratio)
}

fn gelfand_estimate(m: &ComplexMatrix) -> f64 {
    // ||M^(2^j)||^(1/2^j) with renormalization to avoid overflow
    let mut p = m.clone();
    let mut log_scale = 0.0;
    let mut power = 1.0;
    for _ in 0..20 {
        let norm = p.norm_two();
        if norm == 0.0 {
            return 0.0;
        }
        p = p.scale_real(1.0 / norm);
        log_scale += norm.ln() / power;
        p = p.matmul(&p);
        power *= 2.0;
    }
    (log_scale + p.norm_two().ln() / power).exp()
}

/// Wire format for operators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorJson {
    Shift {
        #[serde(default)]
        head_weights: Vec<f64>,
        tail_weight: f64,
        /// `[a, b]` for `w_k = tail_weight * sqrt((k+a)/(k+b))` beyond the head.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_offsets: Option<[f64; 2]>,
    },
    Dense {
        matrix: ComplexMatrix,
    },
    DirectSum {
        parts: Vec<OperatorJson>,
    },
}

impl TryFrom<OperatorJson> for StructuredOperator {
    type Error = Error;
    fn try_from(raw: OperatorJson) -> Result<Self> {
        match raw {
            OperatorJson::Shift { head_weights, tail_weight, tail_offsets } => {
                let [a, b] = tail_offsets.unwrap_or([1.0, 1.0]);
                let tail = ShiftTail { scale: tail_weight, num_offset: a, den_offset: b };
                Ok(StructuredOperator::Shift(WeightedShift::with_tail(head_weights, tail)?))
            }
            OperatorJson::Dense { matrix } => Ok(StructuredOperator::Dense(matrix)),
            OperatorJson::DirectSum { parts } => StructuredOperator::direct_sum(
                parts.into_iter().map(StructuredOperator::try_from).collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

impl From<&StructuredOperator> for OperatorJson {
    fn from(op: &StructuredOperator) -> Self {
        match op {
            StructuredOperator::Dense(m) => OperatorJson::Dense { matrix: m.clone() },
            StructuredOperator::Shift(s) => {
                let t = s.tail();
                OperatorJson::Shift {
                    head_weights: s.head_weights().to_vec(),
                    tail_weight: t.scale,
                    tail_offsets: (!t.is_constant()).then_some([t.num_offset, t.den_offset]),
                }
            }
            StructuredOperator::DirectSum(parts) => {
                OperatorJson::DirectSum { parts: parts.iter().map(OperatorJson::from).collect() }
            }
        }
    }
}

impl StructuredOperator {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: OperatorJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }
}
