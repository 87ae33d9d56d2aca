//! Numerical entropic projection: minimization of a divergence `D(·, ψ)` over
//! one of the constraint families, plus the tools used to check the closed-form
//! update rules against it.
//!
//! Every supported feasible set is a product of scaled state spaces on the
//! blocks of an orthogonal resolution. The solver keeps each block in
//! exponential form `φ_b ∝ exp(H_b)`, so positivity and trace pins hold
//! exactly at every iterate. An iteration moves `H_b ← log φ_b − η G_b`, where
//! `G_b` is the block of the Euclidean gradient `∂D/∂φ`, then renormalizes each
//! trace-pinned group. Steps are accepted by an Armijo test on the objective.
//! For `D₀` the gradient is `I − Dlog_φ[ψ]`, which makes `η = 1` a Newton step
//! in the exponential coordinates.

mod geometry;
pub mod harness;
mod oracle;

pub use geometry::{joint_constraint, regularized_d0p, sequential_projection, triangle_residual};
pub use harness::{verify, HarnessReport, TheoremId, TrialRow};
pub use oracle::sampling_oracle;

use rand::Rng;

use crate::diverge::{self, DivergenceKind, ExtendedReal};
use crate::error::{Error, Result};
use crate::random::{random_simplex, random_unitary, rng_from_seed};
use crate::specmat::{self, c, CMat, Spectral, C64};
use nalgebra::DVector;
use crate::states::{in_constraint, ConstraintSet, DensityOperator, Projector};
use crate::tol::{RANK_TOL, TOL_PROB};

/// Solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iter: usize,
    /// Initial mirror step `η`.
    pub step_init: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo_sufficient: f64,
    /// Backtracking factor.
    pub armijo_shrink: f64,
    pub grad_tol: f64,
    pub feas_tol: f64,
    pub seed: u64,
    pub restarts: usize,
    /// Start every restart from a random feasible point (otherwise the first
    /// restart starts from the block-uniform state).
    pub random_start: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iter: 5000,
            step_init: 1.0,
            armijo_sufficient: 1e-4,
            armijo_shrink: 0.5,
            grad_tol: 1e-10,
            feas_tol: 1e-9,
            seed: 0,
            restarts: 1,
            random_start: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.step_init, self.armijo_sufficient, self.grad_tol, self.feas_tol];
        if positive.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidInput("solver tolerances must be positive".into()));
        }
        if !(self.armijo_shrink > 0.0 && self.armijo_shrink < 1.0) || self.armijo_sufficient >= 1.0 {
            return Err(Error::InvalidInput("Armijo parameters must lie in (0, 1)".into()));
        }
        if self.restarts == 0 || self.max_iter == 0 {
            return Err(Error::InvalidInput("restarts and max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a projection run.
#[derive(Debug, Clone)]
pub struct ProjectionResult {
    pub minimizer: DensityOperator,
    pub objective: ExtendedReal,
    pub grad_residual: f64,
    pub feas_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Surrogate objective after each accepted iteration (starting point first).
    pub history: Vec<f64>,
}

/// A block of the feasible set: the columns of `iso` span its range.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub(crate) dim: usize,
    pub(crate) isos: Vec<CMat>,
    pub(crate) groups: Vec<Group>,
}

/// Blocks whose traces are tied together: their total is `mass`, or free
/// when `mass` is `None`.
#[derive(Debug, Clone)]
pub(crate) struct Group {
    pub(crate) blocks: Vec<usize>,
    pub(crate) mass: Option<f64>,
}

impl Layout {
    pub(crate) fn assemble(&self, blocks: &[CMat]) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (v, b) in self.isos.iter().zip(blocks) {
            out += v * b * v.adjoint();
        }
        out
    }
}

/// Which smooth function of `φ` the solver actually descends. Monotone
/// transforms of a divergence (squares of norms) share its minimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Surrogate {
    D0,
    D1,
    DHalf,
    SqrtHsSquared,
    HsStatesSquared,
    BuresSquared,
    Wgkl,
}

fn surrogate_for(kind: DivergenceKind) -> Result<Surrogate> {
    Ok(match kind {
        DivergenceKind::D0 => Surrogate::D0,
        DivergenceKind::D1Umegaki => Surrogate::D1,
        DivergenceKind::DHalf => Surrogate::DHalf,
        DivergenceKind::L2HsSqrt => Surrogate::SqrtHsSquared,
        DivergenceKind::L2HsStates => Surrogate::HsStatesSquared,
        DivergenceKind::Bures => Surrogate::BuresSquared,
        DivergenceKind::Wgkl => Surrogate::Wgkl,
        DivergenceKind::L1Jmgk => {
            return Err(Error::InvalidInput(
                "l1-jmgk is not smooth; use the sampling oracle".into(),
            ))
        }
    })
}

/// Builds the block layout of `K`. For `D₀` each block is further restricted
/// to the support of the compressed `ψ` (the minimizer lives there) and blocks
/// where `ψ` has no weight are dropped.
fn layout_for(k: &ConstraintSet, psi: &DensityOperator, kind: DivergenceKind) -> Result<Layout> {
    let d = k.dim();
    if psi.dim() != d {
        return Err(Error::DimensionMismatch(psi.dim(), d));
    }
    let restrict = kind == DivergenceKind::D0;
    let psi_weight = |p: &Projector| psi.expectation(p.matrix()).re;

    let mut isos = Vec::new();
    let mut groups = Vec::new();
    let push_block = |p: &Projector, isos: &mut Vec<CMat>| -> Option<usize> {
        let mut v = p.isometry();
        if restrict {
            let comp = specmat::hermitian_part(&(v.adjoint() * psi.matrix() * &v));
            let spec = specmat::eigh_unchecked(&comp);
            let w = spec.support_isometry(RANK_TOL);
            if w.ncols() == 0 {
                return None;
            }
            v *= w;
        }
        isos.push(v);
        Some(isos.len() - 1)
    };

    match k {
        ConstraintSet::CommutantQL(r) => {
            let mut blocks = Vec::new();
            for p in r.members() {
                if restrict && psi_weight(p) <= TOL_PROB {
                    continue;
                }
                if let Some(b) = push_block(p, &mut isos) {
                    blocks.push(b);
                }
            }
            if blocks.is_empty() {
                return Err(Error::Infeasible("no block carries weight".into()));
            }
            groups.push(Group {
                blocks,
                mass: Some(1.0),
            });
        }
        ConstraintSet::TracePinnedQqJ(r, w) => {
            if r.len() != w.len() {
                return Err(Error::WeightMismatch(format!(
                    "{} weights for {} projectors",
                    w.len(),
                    r.len()
                )));
            }
            for (p, &lambda) in r.members().iter().zip(w.as_slice()) {
                if lambda == 0.0 {
                    continue;
                }
                if restrict && psi_weight(p) <= TOL_PROB {
                    return Err(Error::ZeroProbability(psi_weight(p)));
                }
                let b = push_block(p, &mut isos).ok_or(Error::ZeroProbability(0.0))?;
                groups.push(Group {
                    blocks: vec![b],
                    mass: Some(lambda),
                });
            }
        }
        ConstraintSet::FaceQsL(p) => {
            if p.rank() == 0 {
                return Err(Error::Infeasible("face of the zero projector is empty".into()));
            }
            if restrict && psi_weight(p) <= TOL_PROB {
                return Err(Error::ZeroProbability(psi_weight(p)));
            }
            let b = push_block(p, &mut isos).ok_or(Error::ZeroProbability(0.0))?;
            groups.push(Group {
                blocks: vec![b],
                mass: Some(1.0),
            });
        }
        ConstraintSet::SupportBlock(p) => {
            if p.rank() == 0 {
                return Err(Error::Infeasible("zero projector".into()));
            }
            if let Some(b) = push_block(p, &mut isos) {
                groups.push(Group {
                    blocks: vec![b],
                    mass: None,
                });
            } else {
                return Err(Error::Infeasible("ψ has no weight in the block".into()));
            }
        }
    }
    Ok(Layout { dim: d, isos, groups })
}

/// Iterate: block matrices with their eigendecompositions.
#[derive(Clone)]
struct Point {
    blocks: Vec<CMat>,
    spectra: Vec<Spectral>,
}

impl Point {
    fn new(blocks: Vec<CMat>) -> Point {
        let spectra = blocks.iter().map(specmat::eigh_unchecked).collect();
        Point { blocks, spectra }
    }

    fn trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.trace().re).sum()
    }
}

struct Problem<'a> {
    surrogate: Surrogate,
    layout: Layout,
    psi: &'a DensityOperator,
    /// `V_b^† ψ V_b`.
    psi_blocks: Vec<CMat>,
    /// `V_b^† ψ^{1/2} V_b`.
    sqrt_blocks: Vec<CMat>,
    /// `V_b^† log ψ V_b`.
    log_blocks: Vec<CMat>,
    psi_sqrt: CMat,
    constant: f64,
}

impl<'a> Problem<'a> {
    fn new(surrogate: Surrogate, layout: Layout, psi: &'a DensityOperator) -> Result<Self> {
        let spec = psi.spectral();
        let psi_sqrt = spec.rebuild(|l| c(l.max(0.0).sqrt(), 0.0));
        let compress = |m: &CMat| -> Vec<CMat> {
            layout
                .isos
                .iter()
                .map(|v| specmat::hermitian_part(&(v.adjoint() * m * v)))
                .collect()
        };
        let psi_blocks = compress(psi.matrix());
        let sqrt_blocks = compress(&psi_sqrt);
        let mut log_blocks = Vec::new();
        let mut constant = 0.0;
        match surrogate {
            Surrogate::D0 => {
                // tr ψ log ψ − tr ψ, with ψ restricted to the blocks
                for b in &psi_blocks {
                    let s = specmat::eigh_unchecked(b);
                    constant += (0..s.dim())
                        .filter(|&k| s.in_support(k, RANK_TOL))
                        .map(|k| s.values[k] * s.values[k].ln())
                        .sum::<f64>();
                }
                constant -= psi_blocks.iter().map(|b| b.trace().re).sum::<f64>();
            }
            Surrogate::D1 => {
                if spec.rank(RANK_TOL) < psi.dim() {
                    return Err(Error::SupportViolation(
                        "d1-umegaki projection needs a faithful ψ".into(),
                    ));
                }
                let log_psi = spec.rebuild(|l| c(l.ln(), 0.0));
                log_blocks = compress(&log_psi);
                constant = psi.trace();
            }
            Surrogate::Wgkl if psi.matrix().diagonal().iter().any(|z| z.re <= 0.0) => {
                return Err(Error::SupportViolation(
                    "wgkl projection needs a strictly positive diagonal".into(),
                ));
            }
            _ => {}
        }
        Ok(Problem {
            surrogate,
            layout,
            psi,
            psi_blocks,
            sqrt_blocks,
            log_blocks,
            psi_sqrt,
            constant,
        })
    }

    fn value(&self, x: &Point) -> f64 {
        let tr_phi = x.trace();
        let tr_psi = self.psi.trace();
        match self.surrogate {
            Surrogate::D0 => {
                let cross: f64 = x
                    .spectra
                    .iter()
                    .zip(&self.psi_blocks)
                    .map(|(s, p)| (p * log_of(s)).trace().re)
                    .sum();
                tr_phi + self.constant - cross
            }
            Surrogate::D1 => {
                let ent: f64 = x
                    .spectra
                    .iter()
                    .map(|s| s.values.iter().filter(|&&l| l > 0.0).map(|l| l * l.ln()).sum::<f64>())
                    .sum();
                let cross: f64 = x
                    .blocks
                    .iter()
                    .zip(&self.log_blocks)
                    .map(|(b, l)| (b * l).trace().re)
                    .sum();
                self.constant - tr_phi + ent - cross
            }
            Surrogate::DHalf => 2.0 * (tr_phi + tr_psi) - 4.0 * self.sqrt_overlap(x),
            Surrogate::SqrtHsSquared => tr_phi + tr_psi - 2.0 * self.sqrt_overlap(x),
            Surrogate::HsStatesSquared => {
                let diff = self.layout.assemble(&x.blocks) - self.psi.matrix();
                specmat::hs_norm(&diff).powi(2)
            }
            Surrogate::BuresSquared => {
                let m = self.bures_inner(x);
                let root = specmat::trace_sqrt_psd(&m);
                tr_phi + tr_psi - 2.0 * root
            }
            Surrogate::Wgkl => {
                let phi = self.layout.assemble(&x.blocks);
                let p: Vec<f64> = phi.diagonal().iter().map(|z| z.re).collect();
                let q: Vec<f64> = self.psi.matrix().diagonal().iter().map(|z| z.re).collect();
                diverge::wgkl_distribution(&p, &q).value()
            }
        }
    }

    fn sqrt_overlap(&self, x: &Point) -> f64 {
        x.spectra
            .iter()
            .zip(&self.sqrt_blocks)
            .map(|(s, q)| (s.rebuild(|l| c(l.max(0.0).sqrt(), 0.0)) * q).trace().re)
            .sum()
    }

    fn bures_inner(&self, x: &Point) -> CMat {
        let phi = self.layout.assemble(&x.blocks);
        specmat::hermitian_part(&(&self.psi_sqrt * phi * &self.psi_sqrt))
    }

    /// Blocks of `∂f/∂φ`.
    fn gradient(&self, x: &Point) -> Vec<CMat> {
        let nb = x.blocks.len();
        let ident = |b: usize| CMat::identity(x.blocks[b].nrows(), x.blocks[b].nrows());
        match self.surrogate {
            Surrogate::D0 => (0..nb)
                .map(|b| ident(b) - specmat::frechet_with(&x.spectra[b], &self.psi_blocks[b], safe_log_dd))
                .collect(),
            Surrogate::D1 => (0..nb).map(|b| log_of(&x.spectra[b]) - &self.log_blocks[b]).collect(),
            Surrogate::DHalf => (0..nb)
                .map(|b| {
                    ident(b).scale(2.0) - specmat::frechet_sqrt_spectral(&x.spectra[b], &self.sqrt_blocks[b]).scale(4.0)
                })
                .collect(),
            Surrogate::SqrtHsSquared => (0..nb)
                .map(|b| ident(b) - specmat::frechet_sqrt_spectral(&x.spectra[b], &self.sqrt_blocks[b]).scale(2.0))
                .collect(),
            Surrogate::HsStatesSquared => {
                let diff = self.layout.assemble(&x.blocks) - self.psi.matrix();
                self.compress_all(&diff.scale(2.0))
            }
            Surrogate::BuresSquared => {
                let m = self.bures_inner(x);
                let inv_root = specmat::eigh_unchecked(&m)
                    .rebuild_on_support(|l| c(1.0 / l.sqrt(), 0.0), RANK_TOL);
                let full = CMat::identity(self.layout.dim, self.layout.dim)
                    - &self.psi_sqrt * inv_root * &self.psi_sqrt;
                self.compress_all(&full)
            }
            Surrogate::Wgkl => {
                let phi = self.layout.assemble(&x.blocks);
                let g: Vec<f64> = (0..self.layout.dim)
                    .map(|i| phi[(i, i)].re.max(f64::MIN_POSITIVE).ln() - self.psi.matrix()[(i, i)].re.ln())
                    .collect();
                self.compress_all(&specmat::diag(&g))
            }
        }
    }

    fn compress_all(&self, m: &CMat) -> Vec<CMat> {
        self.layout
            .isos
            .iter()
            .map(|v| specmat::hermitian_part(&(v.adjoint() * m * v)))
            .collect()
    }

    /// Step direction in the exponential coordinates. For `D₀` the block
    /// gradient is rescaled by `tr φ_b / tr ψ_b`, which turns `η = 1` into a
    /// Newton step on blocks whose pinned mass differs from the weight of `ψ`.
    fn direction(&self, x: &Point, grad: &[CMat]) -> Vec<CMat> {
        match self.surrogate {
            Surrogate::D0 => grad
                .iter()
                .zip(&x.blocks)
                .zip(&self.psi_blocks)
                .map(|((g, phi), psi)| g.scale(phi.trace().re / psi.trace().re))
                .collect(),
            _ => grad.to_vec(),
        }
    }

    /// Trace multiplier `μ_g` of each group: the φ-weighted mean of the
    /// gradient, zero for groups with free mass.
    fn multipliers(&self, x: &Point, grad: &[CMat]) -> Vec<f64> {
        self.layout
            .groups
            .iter()
            .map(|g| match g.mass {
                Some(_) => {
                    let num: f64 = g.blocks.iter().map(|&b| (&x.blocks[b] * &grad[b]).trace().re).sum();
                    let den: f64 = g.blocks.iter().map(|&b| x.blocks[b].trace().re).sum();
                    num / den
                }
                None => 0.0,
            })
            .collect()
    }

    /// Lowest eigenpair of `G_b − μ_g` over the blocks of each group.
    fn lowest_modes(&self, grad: &[CMat], mu: &[f64]) -> Vec<(usize, f64, DVector<C64>)> {
        self.layout
            .groups
            .iter()
            .zip(mu)
            .map(|(g, &m)| {
                g.blocks
                    .iter()
                    .map(|&b| {
                        let s = specmat::eigh_unchecked(&specmat::hermitian_part(&grad[b]));
                        (b, s.values[0] - m, s.vectors.column(0).into_owned())
                    })
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("groups are non-empty")
            })
            .collect()
    }

    /// Optimality residual. The first part, `max_b ‖φ_b^{1/2}(G_b − μ_g)φ_b^{1/2}‖`,
    /// is complementary slackness; the second, `m_g · max(0, −λ_min(G_b − μ_g))`,
    /// is dual infeasibility, which for a pinned group is the Frank–Wolfe gap
    /// and so bounds the excess objective. Mirror iterates cannot see the
    /// second part once an eigenvalue has collapsed to zero.
    fn stationarity(&self, x: &Point, grad: &[CMat]) -> f64 {
        let mu = self.multipliers(x, grad);
        let r = self.complementarity(x, grad, &mu).max(self.dual_gap(grad, &mu));
        // `f64::max` drops NaN, so a singular gradient must be caught here
        let finite = grad.iter().all(specmat::is_finite) && mu.iter().all(|m| m.is_finite());
        if finite { r } else { f64::INFINITY }
    }

    fn complementarity(&self, x: &Point, grad: &[CMat], mu: &[f64]) -> f64 {
        let mut worst = 0.0_f64;
        for (g, &m) in self.layout.groups.iter().zip(mu) {
            for &b in &g.blocks {
                let s = x.spectra[b].rebuild(|l| c(l.max(0.0).sqrt(), 0.0));
                let r = grad[b].clone() - CMat::identity(grad[b].nrows(), grad[b].nrows()).scale(m);
                worst = worst.max(specmat::hs_norm(&(&s * r * &s)));
            }
        }
        worst
    }

    fn dual_gap(&self, grad: &[CMat], mu: &[f64]) -> f64 {
        let tr_psi = self.psi.trace();
        self.layout
            .groups
            .iter()
            .zip(self.lowest_modes(grad, mu))
            .map(|(g, (_, low, _))| g.mass.unwrap_or(tr_psi) * (-low).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Frank–Wolfe step towards the vertex `m_g v v^†` of each pinned group,
    /// `v` the lowest mode of `G − μ_g`. Returns the accepted point with its
    /// value, or `None` when no step length decreases the objective.
    fn frank_wolfe(&self, x: &Point, f: f64, grad: &[CMat], sufficient: f64) -> Option<(Point, f64)> {
        let mu = self.multipliers(x, grad);
        let mut dir: Vec<CMat> = x.blocks.iter().map(|b| CMat::zeros(b.nrows(), b.ncols())).collect();
        for (g, (b_low, low, v)) in self.layout.groups.iter().zip(self.lowest_modes(grad, &mu)) {
            let Some(mass) = g.mass else { continue };
            if low >= 0.0 {
                continue;
            }
            for &b in &g.blocks {
                dir[b] = -x.blocks[b].clone();
            }
            dir[b_low] += specmat::outer(&v).scale(mass);
        }
        let slope: f64 = dir.iter().zip(grad).map(|(d, g)| specmat::hs_inner(g, d).re).sum();
        if slope >= 0.0 {
            return None;
        }
        // stopping short of the vertex keeps the iterate faithful, where the
        // gradients of the root and log surrogates are finite
        let mut gamma = 0.5;
        while gamma > 1e-14 {
            let y = Point::new(
                x.blocks
                    .iter()
                    .zip(&dir)
                    .map(|(b, d)| specmat::hermitian_part(&(b + d.scale(gamma))))
                    .collect(),
            );
            let fy = self.value(&y);
            if fy.is_finite() && fy <= f + sufficient * gamma * slope && fy < f {
                return Some((y, fy));
            }
            gamma *= 0.5;
        }
        None
    }

    /// `exp(log φ_b − η G_b)`, renormalized per group.
    fn mirror_step(&self, x: &Point, dir: &[CMat], eta: f64) -> Point {
        let mut blocks: Vec<CMat> = vec![CMat::zeros(0, 0); x.blocks.len()];
        for g in &self.layout.groups {
            let logs: Vec<(usize, CMat)> = g
                .blocks
                .iter()
                .map(|&b| (b, log_of(&x.spectra[b]) - dir[b].scale(eta)))
                .collect();
            let spectra: Vec<(usize, Spectral)> = logs
                .iter()
                .map(|(b, h)| (*b, specmat::eigh_unchecked(&specmat::hermitian_part(h))))
                .collect();
            let shift = match g.mass {
                Some(_) => spectra.iter().map(|(_, s)| s.max_value()).fold(f64::NEG_INFINITY, f64::max),
                None => 0.0,
            };
            let exps: Vec<(usize, CMat)> = spectra
                .iter()
                .map(|(b, s)| (*b, s.rebuild(|l| c((l - shift).exp(), 0.0))))
                .collect();
            let scale = match g.mass {
                Some(m) => m / exps.iter().map(|(_, e)| e.trace().re).sum::<f64>(),
                None => 1.0,
            };
            for (b, e) in exps {
                blocks[b] = specmat::hermitian_part(&e.scale(scale));
            }
        }
        Point::new(blocks)
    }

    /// Exact minimizer of the squared HS distance: each block keeps the
    /// eigenbasis of `ψ_b`, and the pooled eigenvalues of a group are
    /// projected onto the simplex of the group's mass.
    fn hs_closed_form(&self) -> Point {
        let mut blocks: Vec<CMat> = vec![CMat::zeros(0, 0); self.layout.isos.len()];
        for g in &self.layout.groups {
            let spectra: Vec<Spectral> = g.blocks.iter().map(|&b| specmat::eigh_unchecked(&self.psi_blocks[b])).collect();
            let pooled: Vec<f64> = spectra.iter().flat_map(|s| s.values.iter().copied()).collect();
            let shift = match g.mass {
                Some(m) => simplex_shift(&pooled, m),
                None => 0.0,
            };
            for (&b, s) in g.blocks.iter().zip(&spectra) {
                blocks[b] = specmat::hermitian_part(&s.rebuild(|l| c((l - shift).max(0.0), 0.0)));
            }
        }
        Point::new(blocks)
    }

    fn start(&self, random: bool, rng: &mut impl Rng) -> Point {
        let mut blocks: Vec<CMat> = vec![CMat::zeros(0, 0); self.layout.isos.len()];
        for g in &self.layout.groups {
            let total_rank: usize = g.blocks.iter().map(|&b| self.layout.isos[b].ncols()).sum();
            let mass = g.mass.unwrap_or_else(|| self.psi.trace().max(TOL_PROB));
            let masses: Vec<f64> = if random {
                random_simplex(g.blocks.len(), rng).into_iter().map(|w| 0.1 / g.blocks.len() as f64 + 0.9 * w).collect()
            } else {
                g.blocks.iter().map(|&b| self.layout.isos[b].ncols() as f64 / total_rank as f64).collect()
            };
            for (&b, share) in g.blocks.iter().zip(masses) {
                let r = self.layout.isos[b].ncols();
                let block = if random {
                    let u = random_unitary(r, rng);
                    let w: Vec<f64> = random_simplex(r, rng).into_iter().map(|x| 0.1 / r as f64 + 0.9 * x).collect();
                    &u * specmat::diag(&w) * u.adjoint()
                } else {
                    CMat::identity(r, r).unscale(r as f64)
                };
                blocks[b] = specmat::hermitian_part(&block.scale(mass * share));
            }
        }
        Point::new(blocks)
    }

    fn descend(&self, start: Point, cfg: &SolverConfig) -> Run {
        let mut x = start;
        let mut f = self.value(&x);
        let mut history = vec![f];
        let mut eta = cfg.step_init;
        let eta_max = cfg.step_init * 1e4;
        let mut iterations = 0;
        let mut grad = self.gradient(&x);
        let mut residual = self.stationarity(&x, &grad);
        while iterations < cfg.max_iter && residual > cfg.grad_tol {
            let noise = 64.0 * f64::EPSILON * (1.0 + f.abs());
            let mu = self.multipliers(&x, &grad);
            let gap = self.dual_gap(&grad, &mu);
            // a dominant gap means mass is missing from a direction the mirror
            // step has already driven to zero
            if gap > 10.0 * self.complementarity(&x, &grad, &mu) {
                if let Some((y, fy)) = self.frank_wolfe(&x, f, &grad, cfg.armijo_sufficient) {
                    iterations += 1;
                    grad = self.gradient(&y);
                    residual = self.stationarity(&y, &grad);
                    x = y;
                    f = fy;
                    history.push(f);
                    continue;
                }
            }
            let dir = self.direction(&x, &grad);
            let mut accepted = None;
            let mut trial_eta = eta;
            while trial_eta > 1e-20 {
                let y = self.mirror_step(&x, &dir, trial_eta);
                let fy = self.value(&y);
                let predicted: f64 = y
                    .blocks
                    .iter()
                    .zip(&x.blocks)
                    .zip(&grad)
                    .map(|((yb, xb), gb)| specmat::hs_inner(gb, &(yb - xb)).re)
                    .sum();
                if fy.is_finite() {
                    if fy <= f + cfg.armijo_sufficient * predicted && fy < f {
                        accepted = Some((y, fy, (f - fy) / -predicted, None));
                        break;
                    }
                    // below the resolution of f, progress is judged by the residual
                    if predicted.abs() <= noise && fy <= f + noise {
                        let g = self.gradient(&y);
                        let r = self.stationarity(&y, &g);
                        if r < residual {
                            accepted = Some((y, fy, 0.0, Some((g, r))));
                            break;
                        }
                    }
                }
                trial_eta *= cfg.armijo_shrink;
            }
            let Some((y, fy, ratio, cached)) = accepted else {
                if let Some((y, fy)) = self.frank_wolfe(&x, f, &grad, cfg.armijo_sufficient) {
                    iterations += 1;
                    grad = self.gradient(&y);
                    residual = self.stationarity(&y, &grad);
                    x = y;
                    f = fy;
                    history.push(f);
                    continue;
                }
                break;
            };
            iterations += 1;
            // a nearly linear model means the step can grow; a Newton-like
            // step realizes about half of the linear prediction
            eta = if ratio > 0.75 { (trial_eta * 2.0).min(eta_max) } else { trial_eta };
            let (new_grad, new_residual) = match cached {
                Some(gr) => gr,
                None => {
                    let g = self.gradient(&y);
                    let r = self.stationarity(&y, &g);
                    (g, r)
                }
            };
            x = y;
            f = fy;
            grad = new_grad;
            residual = new_residual;
            history.push(f);
        }
        Run {
            point: x,
            value: f,
            residual,
            iterations,
            history,
        }
    }
}

struct Run {
    point: Point,
    value: f64,
    residual: f64,
    iterations: usize,
    history: Vec<f64>,
}

/// The `θ` with `Σ max(v_i − θ, 0) = mass`.
fn simplex_shift(v: &[f64], mass: f64) -> f64 {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut sum = 0.0;
    let mut theta = 0.0;
    for (j, &x) in u.iter().enumerate() {
        sum += x;
        let t = (sum - mass) / (j + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    theta
}

fn log_of(s: &Spectral) -> CMat {
    s.rebuild(|l| c(l.max(f64::MIN_POSITIVE).ln(), 0.0))
}

fn safe_log_dd(a: f64, b: f64) -> f64 {
    specmat::log_divided_difference(a.max(f64::MIN_POSITIVE), b.max(f64::MIN_POSITIVE))
}

/// The objective reported for `kind` over `K`: on the face `Q_sL`, `D₀` is
/// replaced by its compression to `ran(P)` (the plain `D₀` is infinite on the
/// whole face unless `ψ` already lives in `ran(P)`).
pub fn projection_objective(
    kind: DivergenceKind,
    k: &ConstraintSet,
    phi: &DensityOperator,
    psi: &DensityOperator,
) -> Result<ExtendedReal> {
    match (kind, k) {
        (DivergenceKind::D0, ConstraintSet::FaceQsL(p)) => regularized_d0p(phi, psi, p),
        _ => Ok(diverge::evaluate(kind, phi, psi)),
    }
}

/// Minimizes `D(φ, ψ)` over `φ ∈ K`.
///
/// Returns the best iterate with `converged = false` when the iteration budget
/// runs out before the stationarity and feasibility tolerances are met.
pub fn entropic_project(
    kind: DivergenceKind,
    psi: &DensityOperator,
    k: &ConstraintSet,
    cfg: &SolverConfig,
) -> Result<ProjectionResult> {
    cfg.validate()?;
    let surrogate = surrogate_for(kind)?;
    let layout = layout_for(k, psi, kind)?;
    let problem = Problem::new(surrogate, layout, psi)?;

    let mut best: Option<Run> = None;
    if surrogate == Surrogate::HsStatesSquared {
        let point = problem.hs_closed_form();
        let value = problem.value(&point);
        let residual = problem.stationarity(&point, &problem.gradient(&point));
        best = Some(Run {
            point,
            value,
            residual,
            iterations: 1,
            history: vec![value],
        });
    }
    let restarts = if best.is_some() { 0 } else { cfg.restarts };
    for restart in 0..restarts {
        let random = cfg.random_start || restart > 0;
        let mut rng = rng_from_seed(crate::random::derive_seed(cfg.seed, &[restart as u64]));
        let start = problem.start(random, &mut rng);
        let run = problem.descend(start, cfg);
        let better = match &best {
            None => true,
            Some(b) => run.value < b.value,
        };
        if better {
            best = Some(run);
        }
    }
    let run = best.expect("at least one restart");
    let minimizer = DensityOperator::from_psd_unchecked(problem.layout.assemble(&run.point.blocks));
    let feas_residual = in_constraint(&minimizer, k, cfg.feas_tol)?.residual;
    let objective = projection_objective(kind, k, &minimizer, psi)?;
    Ok(ProjectionResult {
        converged: run.residual <= cfg.grad_tol && feas_residual <= cfg.feas_tol,
        minimizer,
        objective,
        grad_residual: run.residual,
        feas_residual,
        iterations: run.iterations,
        history: run.history,
    })
}
