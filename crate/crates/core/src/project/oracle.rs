//! Derivative-free corroboration of projections.
//!
//! Feasible points are parametrized as `φ_b = m_b A_b A_b^† / Σ tr(A A^†)`
//! on each block, with free complex matrices `A_b` and free positive block
//! weights. The search draws random feasible points (flat simplex spectra in
//! Haar-random block bases), then runs a shrinking pattern search over the
//! real coordinates from the best draws. It does not share code with the
//! gradient solver and also handles non-smooth objectives such as `l1-jmgk`.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{projection_objective, ProjectionResult};
use crate::diverge::DivergenceKind;
use crate::error::{Error, Result};
use crate::random::{random_simplex, random_unitary, rng_from_seed, SeededRng};
use crate::specmat::{c, CMat};
use crate::states::{in_constraint, ConstraintSet, DensityOperator};
use crate::tol::TOL_PROB;

struct Blocks {
    dim: usize,
    isos: Vec<CMat>,
    /// Groups of block indices with their pinned total trace (`None` = free).
    groups: Vec<(Vec<usize>, Option<f64>)>,
}

fn blocks_of(k: &ConstraintSet) -> Result<Blocks> {
    let dim = k.dim();
    let (isos, groups) = match k {
        ConstraintSet::CommutantQL(r) => {
            let isos: Vec<CMat> = r.members().iter().map(|p| p.isometry()).collect();
            let all = (0..isos.len()).collect();
            (isos, vec![(all, Some(1.0))])
        }
        ConstraintSet::TracePinnedQqJ(r, w) => {
            if r.len() != w.len() {
                return Err(Error::WeightMismatch(format!("{} weights for {} projectors", w.len(), r.len())));
            }
            let mut isos = Vec::new();
            let mut groups = Vec::new();
            for (p, &l) in r.members().iter().zip(w.as_slice()) {
                if l > 0.0 {
                    isos.push(p.isometry());
                    groups.push((vec![isos.len() - 1], Some(l)));
                }
            }
            (isos, groups)
        }
        ConstraintSet::FaceQsL(p) => (vec![p.isometry()], vec![(vec![0], Some(1.0))]),
        ConstraintSet::SupportBlock(p) => (vec![p.isometry()], vec![(vec![0], None)]),
    };
    if isos.iter().any(|v| v.ncols() == 0) || isos.is_empty() {
        return Err(Error::Infeasible("empty block".into()));
    }
    Ok(Blocks { dim, isos, groups })
}

/// Search coordinates: per block the real and imaginary parts of `A_b`, then
/// one log-weight per block.
#[derive(Clone)]
struct Params {
    factors: Vec<CMat>,
    log_weights: Vec<f64>,
}

impl Params {
    fn len(&self) -> usize {
        self.factors.iter().map(|a| 2 * a.len()).sum::<usize>() + self.log_weights.len()
    }

    fn coord_mut(&mut self, mut i: usize) -> Coord<'_> {
        for a in self.factors.iter_mut() {
            let n = a.len();
            if i < 2 * n {
                return Coord::Complex(&mut a[i / 2], i % 2 == 1);
            }
            i -= 2 * n;
        }
        Coord::Real(&mut self.log_weights[i])
    }

    fn shift(&mut self, i: usize, delta: f64) {
        match self.coord_mut(i) {
            Coord::Complex(z, imag) => {
                if imag {
                    z.im += delta
                } else {
                    z.re += delta
                }
            }
            Coord::Real(x) => *x += delta,
        }
    }
}

enum Coord<'a> {
    Complex(&'a mut crate::specmat::C64, bool),
    Real(&'a mut f64),
}

impl Blocks {
    fn state(&self, p: &Params) -> Option<DensityOperator> {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (members, mass) in &self.groups {
            let raw: Vec<CMat> = members
                .iter()
                .map(|&b| {
                    let a = &p.factors[b];
                    let g = a * a.adjoint();
                    let t = g.trace().re;
                    g.unscale(t).scale(p.log_weights[b].exp())
                })
                .collect();
            let total: f64 = raw.iter().map(|g| g.trace().re).sum();
            if !total.is_finite() || total <= 0.0 {
                return None;
            }
            let scale = mass.map_or(1.0, |m| m / total);
            for (&b, g) in members.iter().zip(raw) {
                let v = &self.isos[b];
                out += v * g.scale(scale) * v.adjoint();
            }
        }
        Some(DensityOperator::from_psd_unchecked(crate::specmat::hermitian_part(&out)))
    }

    fn random_params(&self, psi_trace: f64, rng: &mut SeededRng) -> Params {
        let mut factors = vec![CMat::zeros(0, 0); self.isos.len()];
        let mut log_weights = vec![0.0; self.isos.len()];
        for (members, mass) in &self.groups {
            let shares = random_simplex(members.len(), rng);
            for (&b, share) in members.iter().zip(shares) {
                let r = self.isos[b].ncols();
                let u = random_unitary(r, rng);
                let spectrum = random_simplex(r, rng);
                let root = CMat::from_fn(r, r, |i, j| if i == j { c(spectrum[i].sqrt(), 0.0) } else { c(0.0, 0.0) });
                factors[b] = u * root;
                let free_scale = if mass.is_none() { rng.random_range(0.0..2.0) * psi_trace } else { 1.0 };
                log_weights[b] = (share * free_scale).max(1e-300).ln();
            }
        }
        Params { factors, log_weights }
    }
}

/// Minimizes `D(φ, ψ)` over `K` by random sampling and pattern search with
/// `budget` objective evaluations. Deterministic for a fixed `seed`.
///
/// The returned `grad_residual` is the final pattern-search step length;
/// `converged` reports whether that step fell below `1e-9` within budget.
pub fn sampling_oracle(
    kind: DivergenceKind,
    psi: &DensityOperator,
    k: &ConstraintSet,
    budget: usize,
    seed: u64,
) -> Result<ProjectionResult> {
    if psi.dim() != k.dim() {
        return Err(Error::DimensionMismatch(psi.dim(), k.dim()));
    }
    if budget == 0 {
        return Err(Error::InvalidInput("budget must be positive".into()));
    }
    let blocks = blocks_of(k)?;
    let mut rng = rng_from_seed(seed);
    let mut evaluations = 0usize;
    let mut objective = |p: &Params, evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        match blocks.state(p) {
            Some(phi) => Ok(projection_objective(kind, k, &phi, psi)?.value()),
            None => Ok(f64::INFINITY),
        }
    };

    // random draws
    let draws = (budget / 5).max(1);
    let keep = 4usize;
    let mut pool: Vec<(f64, Params)> = Vec::new();
    for _ in 0..draws {
        let p = blocks.random_params(psi.trace().max(TOL_PROB), &mut rng);
        let f = objective(&p, &mut evaluations)?;
        pool.push((f, p));
        pool.sort_by(|a, b| a.0.total_cmp(&b.0));
        pool.truncate(keep);
    }

    // pattern search from the best draws, sharing the remaining budget
    let remaining = budget.saturating_sub(evaluations);
    let per_start = (remaining / pool.len()).max(1);
    let mut best: Option<(f64, Params, f64)> = None;
    for (f0, p0) in pool {
        let (f, p, step) = pattern_search(&mut objective, p0, f0, per_start, &mut rng, &mut evaluations)?;
        if best.as_ref().is_none_or(|b| f < b.0) {
            best = Some((f, p, step));
        }
    }
    let (_, params, step) = best.expect("non-empty pool");
    let minimizer = blocks.state(&params).ok_or_else(|| Error::Infeasible("degenerate sample".into()))?;
    let feas_residual = in_constraint(&minimizer, k, 1.0)?.residual;
    let objective = projection_objective(kind, k, &minimizer, psi)?;
    Ok(ProjectionResult {
        minimizer,
        objective,
        grad_residual: step,
        feas_residual,
        iterations: evaluations,
        converged: step < 1e-9,
        history: Vec::new(),
    })
}

type Objective<'a> = dyn FnMut(&Params, &mut usize) -> Result<f64> + 'a;

fn pattern_search(
    objective: &mut Objective<'_>,
    mut p: Params,
    mut f: f64,
    budget: usize,
    rng: &mut SeededRng,
    evaluations: &mut usize,
) -> Result<(f64, Params, f64)> {
    let n = p.len();
    let mut step = 0.25;
    let mut used = 0usize;
    while used < budget && step >= 1e-9 {
        let mut improved = false;
        // coordinate moves
        for i in 0..n {
            for sign in [1.0, -1.0] {
                if used >= budget {
                    break;
                }
                let mut q = p.clone();
                q.shift(i, sign * step);
                let fq = objective(&q, evaluations)?;
                used += 1;
                if fq < f {
                    p = q;
                    f = fq;
                    improved = true;
                    break;
                }
            }
        }
        // random directions help across kinks of non-smooth objectives
        for _ in 0..n {
            if used >= budget {
                break;
            }
            let dir: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mut q = p.clone();
            for (i, x) in dir.iter().enumerate() {
                q.shift(i, step * x / norm);
            }
            let fq = objective(&q, evaluations)?;
            used += 1;
            if fq < f {
                p = q;
                f = fq;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((f, p, step))
}
