//! States, projectors, orthogonal resolutions and the constraint families
//! `Q_L` (commutant), `Q_qJ` (trace-pinned) and `Q_sL` (face).

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::specmat::{
    self, c, commutator, hermitian_part, hermitian_residual, identity, is_finite,
    max_abs_diff, CMat, Spectral, C64,
};
use crate::tol::{RANK_TOL, TOL_HERM, TOL_PROJ, TOL_PSD, TOL_TRACE};

/// Positive semidefinite Hermitian matrix together with its trace.
///
/// Normalized states have trace one; unnormalized positive functionals (for
/// example a state compressed to a subspace) are allowed and keep their trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMat,
    trace: f64,
}

impl DensityOperator {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_normalized(&self) -> bool {
        (self.trace - 1.0).abs() <= TOL_TRACE
    }

    pub fn spectral(&self) -> Spectral {
        specmat::eigh_unchecked(&self.matrix)
    }

    /// Projector onto the range.
    pub fn support(&self) -> CMat {
        self.spectral().support_projector(RANK_TOL)
    }

    pub fn rank(&self) -> usize {
        self.spectral().rank(RANK_TOL)
    }

    /// `tr(ρ X)`.
    pub fn expectation(&self, x: &CMat) -> C64 {
        (&self.matrix * x).trace()
    }

    /// Square-root representative in Hilbert–Schmidt space.
    pub fn hs_vector(&self) -> HsVector {
        HsVector {
            matrix: self.spectral().rebuild(|l| c(l.max(0.0).sqrt(), 0.0)),
        }
    }

    /// Builds a state from a matrix already known to be PSD (solver output).
    /// The matrix is symmetrized and the trace recorded.
    pub(crate) fn from_psd_unchecked(m: CMat) -> Self {
        let matrix = hermitian_part(&m);
        let trace = matrix.trace().re;
        DensityOperator { matrix, trace }
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator {
            matrix: identity(d).unscale(d as f64),
            trace: 1.0,
        }
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(v: &DVector<C64>) -> Result<Self> {
        let n = v.norm();
        if (n - 1.0).abs() > TOL_TRACE {
            return Err(Error::NotNormalized(n * n));
        }
        validate_state(&specmat::outer(v), true)
    }

    /// Real diagonal state.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        validate_state(&specmat::diag(p), false)
    }

    /// Rescales to unit trace.
    pub fn normalized(&self) -> Result<Self> {
        if self.trace <= 0.0 {
            return Err(Error::NotNormalized(self.trace));
        }
        Ok(DensityOperator {
            matrix: self.matrix.unscale(self.trace),
            trace: 1.0,
        })
    }
}

/// Square-root representative `ρ^{1/2}` of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct HsVector {
    pub matrix: CMat,
}

impl HsVector {
    pub fn norm_sqr(&self) -> f64 {
        specmat::hs_norm(&self.matrix).powi(2)
    }
}

/// Validates a candidate density matrix. Never rescales.
pub fn validate_state(m: &CMat, normalized: bool) -> Result<DensityOperator> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
    }
    if !is_finite(m) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let res = hermitian_residual(m);
    if res > TOL_HERM {
        return Err(Error::NonHermitian(res));
    }
    let matrix = hermitian_part(m);
    let spec = specmat::eigh_unchecked(&matrix);
    if spec.min_value() < -TOL_PSD {
        return Err(Error::NotPsd(spec.min_value()));
    }
    let trace = matrix.trace().re;
    if normalized && (trace - 1.0).abs() > TOL_TRACE {
        return Err(Error::NotNormalized(trace));
    }
    Ok(DensityOperator { matrix, trace })
}

/// Orthogonal projector `P = P² = P^†`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: CMat,
}

impl Projector {
    pub fn new(m: CMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
        }
        let herm = hermitian_residual(&m);
        let idem = max_abs_diff(&(&m * &m), &m);
        let res = herm.max(idem);
        if res > TOL_PROJ || !res.is_finite() {
            return Err(Error::NotProjector(res));
        }
        Ok(Projector {
            matrix: hermitian_part(&m),
        })
    }

    /// Projector onto the span of the given (orthonormal) columns.
    pub fn from_isometry(v: &CMat) -> Result<Self> {
        Projector::new(v * v.adjoint())
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round() as usize
    }

    /// `I - P`.
    pub fn complement(&self) -> Projector {
        Projector {
            matrix: identity(self.dim()) - &self.matrix,
        }
    }

    /// Orthonormal basis of the range, as a `d × rank` isometry.
    pub fn isometry(&self) -> CMat {
        specmat::eigh_unchecked(&self.matrix).support_isometry(0.5)
    }
}

/// Mutually orthogonal projectors summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalResolution {
    members: Vec<Projector>,
    dim: usize,
}

impl OrthogonalResolution {
    pub fn new(members: Vec<Projector>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::NotResolution(f64::INFINITY));
        };
        let d = first.dim();
        let mut sum = CMat::zeros(d, d);
        let mut worst = 0.0_f64;
        for (i, p) in members.iter().enumerate() {
            if p.dim() != d {
                return Err(Error::DimensionMismatch(d, p.dim()));
            }
            sum += p.matrix();
            for q in &members[i + 1..] {
                worst = worst.max(specmat::hs_norm(&(p.matrix() * q.matrix())));
            }
        }
        worst = worst.max(max_abs_diff(&sum, &identity(d)));
        if worst > TOL_PROJ {
            return Err(Error::NotResolution(worst));
        }
        Ok(OrthogonalResolution { members, dim: d })
    }

    /// `{I}`.
    pub fn trivial(d: usize) -> Self {
        OrthogonalResolution {
            members: vec![Projector {
                matrix: identity(d),
            }],
            dim: d,
        }
    }

    /// Rank-one projectors onto the computational basis vectors.
    pub fn computational(d: usize) -> Self {
        let groups: Vec<Vec<usize>> = (1..=d).map(|k| vec![k]).collect();
        resolution_from_groups(&identity(d), &groups).expect("identity basis is unitary")
    }

    pub fn members(&self) -> &[Projector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Σ_i P_i A P_i`.
    pub fn pinch(&self, a: &CMat) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for p in &self.members {
            out += p.matrix() * a * p.matrix();
        }
        out
    }

    /// Common refinement `{P_i Q_j ≠ 0}` of two resolutions with commuting
    /// members.
    pub fn refine(&self, other: &OrthogonalResolution) -> Result<OrthogonalResolution> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut members = Vec::new();
        for p in &self.members {
            for q in &other.members {
                let comm = specmat::hs_norm(&commutator(p.matrix(), q.matrix()));
                if comm > TOL_PROJ {
                    return Err(Error::InvalidInput(
                        "resolutions have non-commuting members".into(),
                    ));
                }
                let prod = p.matrix() * q.matrix();
                if prod.trace().re > 0.5 {
                    members.push(Projector::new(hermitian_part(&prod))?);
                }
            }
        }
        OrthogonalResolution::new(members)
    }
}

/// Builds `P_i = Σ_{k ∈ group_i} b_k b_k^†` from the columns of a unitary.
/// Groups are 1-indexed and must partition `1..=d`.
pub fn resolution_from_groups(basis: &CMat, groups: &[Vec<usize>]) -> Result<OrthogonalResolution> {
    let d = basis.nrows();
    if !basis.is_square() {
        return Err(Error::DimensionMismatch(basis.nrows(), basis.ncols()));
    }
    let unit = max_abs_diff(&(basis.adjoint() * basis), &identity(d));
    if unit > 1e-9 || !unit.is_finite() {
        return Err(Error::NotUnitary(unit));
    }
    let mut seen = vec![false; d];
    for g in groups {
        if g.is_empty() {
            return Err(Error::NotPartition(d));
        }
        for &k in g {
            if k == 0 || k > d || seen[k - 1] {
                return Err(Error::NotPartition(d));
            }
            seen[k - 1] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::NotPartition(d));
    }
    let members = groups
        .iter()
        .map(|g| {
            let mut p = CMat::zeros(d, d);
            for &k in g {
                let col = basis.column(k - 1);
                p += col * col.adjoint();
            }
            Projector::new(hermitian_part(&p))
        })
        .collect::<Result<Vec<_>>>()?;
    OrthogonalResolution::new(members)
}

/// Jeffrey weights `λ_i ≥ 0`, `Σ λ_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct JeffreyWeights(Vec<f64>);

impl JeffreyWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::WeightMismatch("weights must be finite and non-negative".into()));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::WeightMismatch(format!("weights sum to {s}, not 1")));
        }
        Ok(JeffreyWeights(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Convex feasible sets used as projection targets.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSet {
    /// States commuting with every member of the resolution.
    CommutantQL(OrthogonalResolution),
    /// States with `tr(ω P_i) = λ_i`.
    TracePinnedQqJ(OrthogonalResolution, JeffreyWeights),
    /// The face `tr(ω P) = tr(ω) = 1`.
    FaceQsL(Projector),
    /// Positive operators with `ω = P ω P` (no trace condition).
    SupportBlock(Projector),
}

impl ConstraintSet {
    pub fn dim(&self) -> usize {
        match self {
            ConstraintSet::CommutantQL(r) | ConstraintSet::TracePinnedQqJ(r, _) => r.dim(),
            ConstraintSet::FaceQsL(p) | ConstraintSet::SupportBlock(p) => p.dim(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConstraintSet::CommutantQL(_) => "commutant",
            ConstraintSet::TracePinnedQqJ(..) => "trace-pinned",
            ConstraintSet::FaceQsL(_) => "face",
            ConstraintSet::SupportBlock(_) => "support-block",
        }
    }
}

/// Outcome of a membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub residual: f64,
}

/// Largest constraint violation of `ω` with respect to `K`.
pub fn in_constraint(omega: &DensityOperator, k: &ConstraintSet, tol: f64) -> Result<Membership> {
    if omega.dim() != k.dim() {
        return Err(Error::DimensionMismatch(omega.dim(), k.dim()));
    }
    let m = omega.matrix();
    let norm_res = (omega.trace() - 1.0).abs();
    let residual = match k {
        ConstraintSet::CommutantQL(r) => r
            .members()
            .iter()
            .map(|p| max_entry(&commutator(p.matrix(), m)))
            .fold(norm_res, f64::max),
        ConstraintSet::TracePinnedQqJ(r, w) => {
            if r.len() != w.len() {
                return Err(Error::WeightMismatch(format!(
                    "{} weights for {} projectors",
                    w.len(),
                    r.len()
                )));
            }
            r.members()
                .iter()
                .zip(w.as_slice())
                .map(|(p, &l)| (omega.expectation(p.matrix()).re - l).abs())
                .fold(norm_res, f64::max)
        }
        ConstraintSet::FaceQsL(p) => (omega.expectation(p.matrix()).re - 1.0).abs().max(norm_res),
        ConstraintSet::SupportBlock(p) => {
            max_abs_diff(&(p.matrix() * m * p.matrix()), m)
        }
    };
    Ok(Membership {
        member: residual <= tol,
        residual,
    })
}

fn max_entry(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `supp(ω) ≤ supp(φ)`.
pub fn absolutely_continuous(omega: &DensityOperator, phi: &DensityOperator) -> bool {
    if omega.dim() != phi.dim() {
        return false;
    }
    let s_phi = phi.support();
    let complement = identity(phi.dim()) - s_phi;
    let om = omega.spectral();
    let v = om.support_isometry(RANK_TOL);
    v.ncols() == 0 || specmat::operator_norm(&(complement * v)) <= 1e-7
}

/// Diagonal blocks `P_i A P_i` and the off-diagonal remainder.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub blocks: Vec<CMat>,
    pub remainder: CMat,
}

impl BlockDecomposition {
    pub fn diagonal_part(&self) -> CMat {
        let d = self.remainder.nrows();
        self.blocks.iter().fold(CMat::zeros(d, d), |acc, b| acc + b)
    }
}

pub fn block_decompose(a: &CMat, r: &OrthogonalResolution) -> Result<BlockDecomposition> {
    if a.nrows() != r.dim() || !a.is_square() {
        return Err(Error::DimensionMismatch(a.nrows(), r.dim()));
    }
    let blocks: Vec<CMat> = r
        .members()
        .iter()
        .map(|p| p.matrix() * a * p.matrix())
        .collect();
    let mut remainder = a.clone();
    for b in &blocks {
        remainder -= b;
    }
    Ok(BlockDecomposition { blocks, remainder })
}

/// `V^† A V` for an isometry `V`.
pub(crate) fn compress(a: &CMat, v: &CMat) -> CMat {
    v.adjoint() * a * v
}
