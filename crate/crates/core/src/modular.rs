//! Relative modular operators on Hilbert–Schmidt space, Connes cocycles and
//! the two modular expressions of the Araki relative entropy.
//!
//! Matrices are column-stacked, so the superoperator `x ↦ A x B` is stored as
//! the `d² × d²` matrix `Bᵀ ⊗ A`.

use serde::Serialize;

use crate::diverge::ExtendedReal;
use crate::error::{Error, Result};
use crate::specmat::{self, c, kron, vectorize, CMat, ScalarFunction};
use crate::states::DensityOperator;
use crate::tol::RANK_TOL;

/// Dense linear map on `d × d` matrices together with the projector onto its
/// support.
#[derive(Debug, Clone)]
pub struct Superoperator {
    dim: usize,
    matrix: CMat,
    support: CMat,
}

impl Superoperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Projector (on HS space) onto the support.
    pub fn support(&self) -> &CMat {
        &self.support
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        specmat::unvectorize(&(&self.matrix * vectorize(x)), self.dim)
    }

    /// Ascending eigenvalues of the (Hermitian) superoperator.
    pub fn spectrum(&self) -> Vec<f64> {
        specmat::eigh_unchecked(&specmat::hermitian_part(&self.matrix)).values
    }

    /// `f(Δ)` computed on the support and extended by zero.
    ///
    /// `Δ` commutes with its support projector `S`, so `Δ + (I − S)` is
    /// invertible with the same eigenvectors; `f` is applied to it and the
    /// complement is cut away afterwards.
    pub fn function_on_support(&self, f: ScalarFunction) -> CMat {
        let n = self.matrix.nrows();
        let shifted = &self.matrix + (CMat::identity(n, n) - &self.support);
        let spec = specmat::eigh_unchecked(&specmat::hermitian_part(&shifted));
        let g = spec.rebuild(|l| f.eval(l.max(f64::MIN_POSITIVE)));
        &g * &self.support
    }
}

/// `Δ_{φ,ω}(x) = ρ_φ x ρ_ω⁻¹` with the inverse taken on `supp(ω)`.
pub fn relative_modular(phi: &DensityOperator, omega: &DensityOperator) -> Result<Superoperator> {
    if phi.dim() != omega.dim() {
        return Err(Error::DimensionMismatch(phi.dim(), omega.dim()));
    }
    let d = phi.dim();
    let om = omega.spectral();
    let omega_inv = om.rebuild_on_support(|l| c(1.0 / l, 0.0), RANK_TOL);
    let s_omega = om.support_projector(RANK_TOL);
    let s_phi = phi.support();
    Ok(Superoperator {
        dim: d,
        matrix: kron(&omega_inv.transpose(), phi.matrix()),
        support: kron(&s_omega.transpose(), &s_phi),
    })
}

/// `⟨ξ, X ξ⟩` for the column-stacked `ξ`.
fn expectation(op: &CMat, xi: &CMat) -> specmat::C64 {
    let v = vectorize(xi);
    (v.adjoint() * op * &v)[(0, 0)]
}

/// Araki relative entropy `(φ − ω)(I) − ⟨ω^{1/2}, log Δ_{φ,ω} ω^{1/2}⟩`,
/// evaluated through the superoperator logarithm.
///
/// The support test is done in HS space: `ω ≪ φ` iff `ω^{1/2}` lies in the
/// support of `Δ_{φ,ω}`.
pub fn araki_d1(omega: &DensityOperator, phi: &DensityOperator) -> Result<ExtendedReal> {
    let delta = relative_modular(phi, omega)?;
    let xi = omega.hs_vector().matrix;
    let v = vectorize(&xi);
    let leak = (&v - delta.support() * &v).norm();
    if leak > 1e-7 * v.norm().max(1.0) {
        return Ok(ExtendedReal::Infinite);
    }
    let log_delta = delta.function_on_support(ScalarFunction::Log);
    let inner = expectation(&log_delta, &xi).re;
    Ok(ExtendedReal::Finite(phi.trace() - omega.trace() - inner))
}

/// A sample of `(Dφ : Dω)_t`.
#[derive(Debug, Clone)]
pub struct CocycleSample {
    pub t: f64,
    pub matrix: CMat,
}

/// `(Dφ : Dω)_t = ρ_φ^{it} ρ_ω^{−it}` with imaginary powers on the supports.
/// Requires `[supp φ, supp ω] = 0`.
pub fn connes_cocycle(phi: &DensityOperator, omega: &DensityOperator, t: f64) -> Result<CocycleSample> {
    if phi.dim() != omega.dim() {
        return Err(Error::DimensionMismatch(phi.dim(), omega.dim()));
    }
    let sp = phi.support();
    let so = omega.support();
    if specmat::hs_norm(&specmat::commutator(&sp, &so)) > 1e-9 {
        return Err(Error::NonCommutingSupports);
    }
    let a = phi
        .spectral()
        .rebuild_on_support(|l| ScalarFunction::ImaginaryPower(t).eval(l), RANK_TOL);
    let b = omega
        .spectral()
        .rebuild_on_support(|l| ScalarFunction::ImaginaryPower(-t).eval(l), RANK_TOL);
    Ok(CocycleSample { t, matrix: a * b })
}

/// Modular automorphism `σ^ω_t(x) = ρ_ω^{it} x ρ_ω^{−it}`.
pub fn modular_automorphism(omega: &DensityOperator, t: f64, x: &CMat) -> CMat {
    let spec = omega.spectral();
    let u = spec.rebuild_on_support(|l| ScalarFunction::ImaginaryPower(t).eval(l), RANK_TOL);
    let u_inv = spec.rebuild_on_support(|l| ScalarFunction::ImaginaryPower(-t).eval(l), RANK_TOL);
    u * x * u_inv
}

/// One evaluation of the difference quotient `i·ω((Dφ:Dω)_t − I)/t`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PetzSample {
    pub t: f64,
    pub value: f64,
    pub imaginary: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PetzEstimate {
    /// Richardson-extrapolated limit.
    pub estimate: f64,
    /// Magnitude of the last extrapolation correction.
    pub error_bar: f64,
    pub samples: Vec<PetzSample>,
}

/// `1e-2, 1e-3, 1e-4, 1e-5`.
pub fn default_t_grid() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4, 1e-5]
}

/// Estimates `D₁(ω, φ)` from the cocycle difference quotient at small `t`,
/// extrapolated to `t → 0` with two Richardson levels.
pub fn petz_limit_d1(omega: &DensityOperator, phi: &DensityOperator, t_grid: &[f64]) -> Result<PetzEstimate> {
    if t_grid.len() < 3 {
        return Err(Error::InvalidInput("t grid needs at least three points".into()));
    }
    if t_grid.iter().any(|&t| t.is_nan() || t <= 0.0) || t_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("t grid must be positive and decreasing".into()));
    }
    if !crate::states::absolutely_continuous(omega, phi) {
        return Err(Error::SupportViolation("ω is not absolutely continuous w.r.t. φ".into()));
    }
    let tr = omega.trace();
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let u = connes_cocycle(phi, omega, t)?;
        let expect = omega.expectation(&u.matrix);
        // i·(z − tr ω)/t
        let q = specmat::c(0.0, 1.0) * (expect - c(tr, 0.0)) / t;
        samples.push(PetzSample {
            t,
            value: q.re,
            imaginary: q.im,
        });
    }

    // level 1 removes the O(t) term, level 2 the O(t²) term
    let level1: Vec<f64> = samples
        .windows(2)
        .map(|w| {
            let r = w[1].t / w[0].t;
            (w[1].value - r * w[0].value) / (1.0 - r)
        })
        .collect();
    let level2: Vec<f64> = samples
        .windows(3)
        .zip(level1.windows(2))
        .map(|(s, l)| {
            let r = s[2].t / s[1].t;
            let r2 = r * r;
            (l[1] - r2 * l[0]) / (1.0 - r2)
        })
        .collect();
    let estimate = *level2.last().expect("at least one level-2 value");
    let error_bar = (estimate - level1.last().expect("level-1 value")).abs();
    Ok(PetzEstimate {
        estimate,
        error_bar,
        samples,
    })
}

/// Least-squares slope of `log|err|` against `log t`, over samples whose
/// error is above `floor`. `None` when fewer than two such samples remain.
pub fn observed_order(samples: &[PetzSample], reference: f64, floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (s.t, (s.value - reference).abs()))
        .filter(|&(_, e)| e > floor)
        .map(|(t, e)| (t.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
