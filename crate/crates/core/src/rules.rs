//! Closed-form update rules: the Lüders family, the strong von Neumann
//! reduction, quantum Jeffrey conditioning and the classical Bayes and
//! Jeffrey rules on finite joint tables.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::specmat::{self, CMat, C64};
use crate::states::{DensityOperator, JeffreyWeights, Membership, OrthogonalResolution, Projector};
use crate::tol::TOL_PROB;

fn check_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(a, b));
    }
    Ok(())
}

/// `tr(ρ P)`.
pub fn event_probability(rho: &DensityOperator, p: &Projector) -> f64 {
    rho.expectation(p.matrix()).re
}

/// Weak Lüders rule (pinching): `ρ ↦ Σ_i P_i ρ P_i`.
pub fn weak_lueders(rho: &DensityOperator, r: &OrthogonalResolution) -> Result<DensityOperator> {
    check_dim(rho.dim(), r.dim())?;
    Ok(DensityOperator::from_psd_unchecked(r.pinch(rho.matrix())))
}

/// Strong Lüders rule: `ρ ↦ PρP / tr(PρP)`.
pub fn strong_lueders(rho: &DensityOperator, p: &Projector) -> Result<DensityOperator> {
    check_dim(rho.dim(), p.dim())?;
    let prob = event_probability(rho, p);
    if prob <= TOL_PROB {
        return Err(Error::ZeroProbability(prob));
    }
    let m = p.matrix() * rho.matrix() * p.matrix();
    Ok(DensityOperator::from_psd_unchecked(m.unscale(prob)))
}

/// Semi-strong Lüders rule ("partial collapse") onto the members with
/// 0-based indices in `subset`.
pub fn semi_strong_lueders(
    rho: &DensityOperator,
    r: &OrthogonalResolution,
    subset: &[usize],
) -> Result<DensityOperator> {
    check_dim(rho.dim(), r.dim())?;
    if subset.is_empty() {
        return Err(Error::InvalidInput("empty index subset".into()));
    }
    let d = rho.dim();
    let mut acc = CMat::zeros(d, d);
    let mut seen = vec![false; r.len()];
    for &j in subset {
        let p = r
            .members()
            .get(j)
            .ok_or_else(|| Error::InvalidInput(format!("index {j} out of range")))?;
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidInput(format!("index {j} repeated")));
        }
        acc += p.matrix() * rho.matrix() * p.matrix();
    }
    let prob = acc.trace().re;
    if prob <= TOL_PROB {
        return Err(Error::ZeroProbability(prob));
    }
    Ok(DensityOperator::from_psd_unchecked(acc.unscale(prob)))
}

/// State vector reduction `ξ ↦ Pξ / ⟨ξ, Pξ⟩^{1/2}`.
pub fn strong_von_neumann(xi: &DVector<C64>, p: &Projector) -> Result<DVector<C64>> {
    check_dim(xi.len(), p.dim())?;
    let n = xi.norm();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(n * n));
    }
    let pxi = p.matrix() * xi;
    let prob = xi.dotc(&pxi).re;
    if prob <= TOL_PROB {
        return Err(Error::ZeroProbability(prob));
    }
    Ok(pxi.unscale(prob.sqrt()))
}

/// Quantum Jeffrey rule `ρ ↦ Σ_i λ_i P_i ρ P_i / tr(ρ P_i)`.
///
/// Members with `λ_i = 0` contribute nothing and need not have positive
/// probability under `ρ`.
pub fn quantum_jeffrey(
    rho: &DensityOperator,
    r: &OrthogonalResolution,
    weights: &JeffreyWeights,
) -> Result<DensityOperator> {
    check_dim(rho.dim(), r.dim())?;
    if weights.len() != r.len() {
        return Err(Error::WeightMismatch(format!(
            "{} weights for {} projectors",
            weights.len(),
            r.len()
        )));
    }
    let d = rho.dim();
    let mut acc = CMat::zeros(d, d);
    for (p, &lambda) in r.members().iter().zip(weights.as_slice()) {
        if lambda == 0.0 {
            continue;
        }
        let prob = event_probability(rho, p);
        if prob <= TOL_PROB {
            return Err(Error::ZeroProbability(prob));
        }
        acc += (p.matrix() * rho.matrix() * p.matrix()).scale(lambda / prob);
    }
    Ok(DensityOperator::from_psd_unchecked(acc))
}

/// Checks the block-proportionality form of the quantum Jeffrey condition:
/// `[ρ_new, P_i] = 0` and `P_i ρ_new P_i / tr(ρ_new P_i) = P_i ρ P_i / tr(ρ P_i)`
/// for every member that carries probability under `ρ_new`.
pub fn qj_consistency(
    rho_new: &DensityOperator,
    rho: &DensityOperator,
    r: &OrthogonalResolution,
    tol: f64,
) -> Result<Membership> {
    check_dim(rho_new.dim(), r.dim())?;
    check_dim(rho.dim(), r.dim())?;
    let mut residual = 0.0_f64;
    for p in r.members() {
        let pm = p.matrix();
        let comm = specmat::commutator(pm, rho_new.matrix());
        residual = residual.max(comm.iter().map(|z| z.norm()).fold(0.0, f64::max));
        let new_prob = event_probability(rho_new, p);
        if new_prob <= TOL_PROB {
            continue;
        }
        let old_prob = event_probability(rho, p);
        if old_prob <= TOL_PROB {
            return Err(Error::ZeroProbability(old_prob));
        }
        let a = (pm * rho_new.matrix() * pm).unscale(new_prob);
        let b = (pm * rho.matrix() * pm).unscale(old_prob);
        residual = residual.max(specmat::max_abs_diff(&a, &b));
    }
    Ok(Membership {
        member: residual <= tol,
        residual,
    })
}

/// Joint probability table `p(x, θ)` on a finite grid, stored row-major with
/// rows indexed by the observation `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    nx: usize,
    ntheta: usize,
    entries: Vec<f64>,
}

impl JointTable {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let nx = rows.len();
        let ntheta = rows.first().map_or(0, Vec::len);
        if nx == 0 || ntheta == 0 || rows.iter().any(|r| r.len() != ntheta) {
            return Err(Error::InvalidInput("joint table must be a non-empty rectangle".into()));
        }
        let entries: Vec<f64> = rows.iter().flatten().copied().collect();
        if entries.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidInput("joint table entries must be non-negative".into()));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(total));
        }
        Ok(JointTable { nx, ntheta, entries })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ntheta(&self) -> usize {
        self.ntheta
    }

    pub fn get(&self, x: usize, theta: usize) -> f64 {
        self.entries[x * self.ntheta + theta]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.ntheta).map(<[f64]>::to_vec).collect()
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        self.entries.chunks(self.ntheta).map(|r| r.iter().sum()).collect()
    }

    pub fn marginal_theta(&self) -> Vec<f64> {
        (0..self.ntheta)
            .map(|t| (0..self.nx).map(|x| self.get(x, t)).sum())
            .collect()
    }

    /// `p(θ | x)`, or `None` when `p(x) = 0`.
    pub fn conditional_theta(&self, x: usize) -> Option<Vec<f64>> {
        let row = &self.entries[x * self.ntheta..(x + 1) * self.ntheta];
        let px: f64 = row.iter().sum();
        (px > TOL_PROB).then(|| row.iter().map(|p| p / px).collect())
    }
}

/// Evidence about the observation variable.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassicalEvidence {
    /// The observation is known to be `b` (0-based).
    Sharp(usize),
    /// The observation marginal is externally set to `f`.
    Soft(Vec<f64>),
}

/// Bayes–Laplace rule: `p_new(θ) = p(θ | b)`.
pub fn bayes_update(prior: &JointTable, b: usize) -> Result<Vec<f64>> {
    if b >= prior.nx() {
        return Err(Error::InvalidInput(format!("observation {b} out of range")));
    }
    prior.conditional_theta(b).ok_or(Error::ZeroEvidence)
}

/// Jeffrey's rule: `p_new(θ) = Σ_x p(θ | x) f(x)`.
pub fn jeffrey_update(prior: &JointTable, f: &[f64]) -> Result<Vec<f64>> {
    if f.len() != prior.nx() {
        return Err(Error::WeightMismatch(format!(
            "{} evidence weights for {} observations",
            f.len(),
            prior.nx()
        )));
    }
    if f.iter().any(|w| !w.is_finite() || *w < 0.0) || (f.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::WeightMismatch("soft evidence must be a distribution".into()));
    }
    let mut out = vec![0.0; prior.ntheta()];
    for (x, &fx) in f.iter().enumerate() {
        if fx == 0.0 {
            continue;
        }
        let cond = prior.conditional_theta(x).ok_or_else(|| {
            Error::SupportViolation(format!("evidence puts mass on observation {x} of prior probability 0"))
        })?;
        for (o, p) in out.iter_mut().zip(cond) {
            *o += fx * p;
        }
    }
    Ok(out)
}

pub fn classical_update(prior: &JointTable, evidence: &ClassicalEvidence) -> Result<Vec<f64>> {
    match evidence {
        ClassicalEvidence::Sharp(b) => bayes_update(prior, *b),
        ClassicalEvidence::Soft(f) => jeffrey_update(prior, f),
    }
}
