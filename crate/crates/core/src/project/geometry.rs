//! Pythagorean residuals, sequential projections and the face-compressed `D₀`.

use super::{entropic_project, ProjectionResult, SolverConfig};
use crate::diverge::{self, DivergenceKind, ExtendedReal};
use crate::error::{Error, Result};
use crate::specmat::{self, CMat};
use crate::states::{compress, ConstraintSet, DensityOperator, Projector};
use crate::tol::{TOL_PROB, TOL_PROJ};

/// `D₀` restricted to `ran(P)`: `D₀(PφP, PψP)` with the compressed `ψ` left
/// unnormalized, so its trace is `tr(Pψ) ≤ 1`.
pub fn regularized_d0p(phi: &DensityOperator, psi: &DensityOperator, p: &Projector) -> Result<ExtendedReal> {
    if phi.dim() != p.dim() || psi.dim() != p.dim() {
        return Err(Error::DimensionMismatch(phi.dim().max(psi.dim()), p.dim()));
    }
    let weight = psi.expectation(p.matrix()).re;
    if weight <= TOL_PROB {
        return Err(Error::ZeroProbability(weight));
    }
    let v = p.isometry();
    let phi_p = DensityOperator::from_psd_unchecked(specmat::hermitian_part(&compress(phi.matrix(), &v)));
    let psi_p = DensityOperator::from_psd_unchecked(specmat::hermitian_part(&compress(psi.matrix(), &v)));
    Ok(diverge::d0(&phi_p, &psi_p))
}

/// `D(φ, ψ) − D(φ, ρ) − D(ρ, ψ)`; zero when `ρ` is the projection of `ψ` onto
/// a set containing `φ` and the divergence is Pythagorean there.
pub fn triangle_residual(
    kind: DivergenceKind,
    phi: &DensityOperator,
    rho: &DensityOperator,
    psi: &DensityOperator,
) -> Result<f64> {
    let parts = [
        diverge::evaluate(kind, phi, psi),
        diverge::evaluate(kind, phi, rho),
        diverge::evaluate(kind, rho, psi),
    ];
    match parts {
        [ExtendedReal::Finite(a), ExtendedReal::Finite(b), ExtendedReal::Finite(c)] => Ok(a - b - c),
        _ => Err(Error::InfiniteDivergence(format!("{kind} triangle has an infinite side"))),
    }
}

fn generators(k: &ConstraintSet) -> Vec<&CMat> {
    match k {
        ConstraintSet::CommutantQL(r) | ConstraintSet::TracePinnedQqJ(r, _) => {
            r.members().iter().map(|p| p.matrix()).collect()
        }
        ConstraintSet::FaceQsL(p) | ConstraintSet::SupportBlock(p) => vec![p.matrix()],
    }
}

fn check_commuting(constraints: &[ConstraintSet]) -> Result<()> {
    for (i, a) in constraints.iter().enumerate() {
        for b in &constraints[i + 1..] {
            if a.dim() != b.dim() {
                return Err(Error::DimensionMismatch(a.dim(), b.dim()));
            }
            for p in generators(a) {
                for q in generators(b) {
                    let r = specmat::operator_norm(&specmat::commutator(p, q));
                    if r > TOL_PROJ.sqrt() {
                        return Err(Error::InvalidInput(format!(
                            "constraint generators do not commute (residual {r:.3e})"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Intersection of commutant constraints with pairwise commuting resolutions:
/// the commutant of their common refinement.
pub fn joint_constraint(constraints: &[ConstraintSet]) -> Result<ConstraintSet> {
    check_commuting(constraints)?;
    let mut resolutions = constraints.iter().map(|k| match k {
        ConstraintSet::CommutantQL(r) => Ok(r),
        other => Err(Error::InvalidInput(format!(
            "joint constraint needs commutant sets, got {}",
            other.name()
        ))),
    });
    let first = resolutions
        .next()
        .ok_or_else(|| Error::InvalidInput("no constraints".into()))??
        .clone();
    let mut joint = first;
    for r in resolutions {
        joint = joint.refine(r?)?;
    }
    Ok(ConstraintSet::CommutantQL(joint))
}

/// Projects `ψ` onto each constraint in turn. The constraints must be
/// generated by pairwise commuting projectors. Returns the result of the last
/// projection.
pub fn sequential_projection(
    kind: DivergenceKind,
    psi: &DensityOperator,
    constraints: &[ConstraintSet],
    cfg: &SolverConfig,
) -> Result<ProjectionResult> {
    check_commuting(constraints)?;
    let (last, rest) = constraints
        .split_last()
        .ok_or_else(|| Error::InvalidInput("no constraints".into()))?;
    let mut current = psi.clone();
    for k in rest {
        current = entropic_project(kind, &current, k, cfg)?.minimizer;
    }
    entropic_project(kind, &current, last, cfg)
}
