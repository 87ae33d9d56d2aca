//! Invariant checks shared by the property tests and the acceptance suite.
//! Each check draws its inputs from `seed` and reports the first violation.
#![allow(dead_code)]

use qproj_core::diverge::{self, DivergenceKind};
use qproj_core::modular::{araki_d1, connes_cocycle, default_t_grid, observed_order, petz_limit_d1, relative_modular};
use qproj_core::project::harness::classical_mre;
use qproj_core::random::*;
use qproj_core::rules::{self, ClassicalEvidence, JointTable};
use qproj_core::specmat::{self, CMat, ScalarFunction};
use qproj_core::tol::RANK_TOL;
use qproj_core::states::{
    absolutely_continuous, block_decompose, in_constraint, resolution_from_groups, validate_state, ConstraintSet,
    DensityOperator, JeffreyWeights, OrthogonalResolution, Projector,
};
use qproj_core::{entropic_project, sampling_oracle, SolverConfig};
use rand::Rng;

pub type Check = std::result::Result<(), String>;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn random_hermitian(d: usize, rng: &mut SeededRng) -> CMat {
    let g = ginibre(d, d, rng);
    specmat::hermitian_part(&g)
}

fn state_from(m: CMat) -> DensityOperator {
    validate_state(&m, true).expect("valid state")
}

/// State with the given spectrum in a Haar-random basis.
pub fn state_with_spectrum(spectrum: &[f64], rng: &mut SeededRng) -> DensityOperator {
    let u = random_unitary(spectrum.len(), rng);
    let m = &u * specmat::diag(spectrum) * u.adjoint();
    let tr = m.trace().re;
    state_from(specmat::hermitian_part(&m.unscale(tr)))
}

// ---- specmat ----

pub fn reconstruction(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let h = random_hermitian(d, &mut rng);
    let s = specmat::eigh(&h).map_err(|e| e.to_string())?;
    let err = specmat::hs_norm(&(s.reconstruct() - &h));
    ensure(err <= 1e-10 * specmat::hs_norm(&h), || format!("reconstruction error {err:e}"))
}

pub fn exp_after_log(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    // eigenvalues log-uniform over eight decades, some of them exactly zero
    let rank = if d > 1 && rng.random_bool(0.5) { rng.random_range(1..d) } else { d };
    let spectrum: Vec<f64> = (0..d)
        .map(|k| if k < rank { 10f64.powf(-8.0 * rng.random::<f64>()) } else { 0.0 })
        .collect();
    let u = random_unitary(d, &mut rng);
    let a = specmat::hermitian_part(&(&u * specmat::diag(&spectrum) * u.adjoint()));
    let log = specmat::fn_on_support(&a, ScalarFunction::Log, RANK_TOL).map_err(|e| e.to_string())?;
    let p = specmat::support(&a).map_err(|e| e.to_string())?;
    let back = &p * specmat::map_hermitian(&log, f64::exp).map_err(|e| e.to_string())? * &p;
    let err = specmat::max_abs_diff(&back, &a);
    ensure(err <= 1e-9, || format!("exp(log A) error {err:e} at rank {rank}"))
}

pub fn frechet_linearity(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let a = random_state(d, &mut rng);
    let v = random_hermitian(d, &mut rng);
    let w = random_hermitian(d, &mut rng);
    let (alpha, beta): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let f = |x: &CMat| specmat::frechet_log(a.matrix(), x).expect("positive definite");
    let lhs = f(&(v.scale(alpha) + w.scale(beta)));
    let rhs = f(&v).scale(alpha) + f(&w).scale(beta);
    let err = specmat::max_abs_diff(&lhs, &rhs);
    ensure(err <= 1e-10 * (1.0 + specmat::max_abs_diff(&lhs, &CMat::zeros(d, d))), || {
        format!("linearity error {err:e}")
    })
}

pub fn frechet_finite_difference(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let a = random_state(d, &mut rng);
    let v = random_hermitian(d, &mut rng);
    let h = 1e-5;
    let plus = specmat::log_psd(&(a.matrix() + v.scale(h))).map_err(|e| e.to_string())?;
    let minus = specmat::log_psd(&(a.matrix() - v.scale(h))).map_err(|e| e.to_string())?;
    let fd = (plus - minus).unscale(2.0 * h);
    let exact = specmat::frechet_log(a.matrix(), &v).map_err(|e| e.to_string())?;
    let rel = specmat::hs_norm(&(&fd - &exact)) / specmat::hs_norm(&exact);
    ensure(rel <= 1e-5, || format!("finite-difference relative error {rel:e}"))
}

// ---- states ----

pub fn resolution_identities(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let r = random_resolution(d, &mut rng);
    let sum = r
        .members()
        .iter()
        .fold(CMat::zeros(d, d), |acc, p| acc + p.matrix());
    let err = specmat::max_abs_diff(&sum, &specmat::identity(d));
    ensure(err <= 1e-12, || format!("ΣP − I = {err:e}"))?;
    for (i, p) in r.members().iter().enumerate() {
        for (j, q) in r.members().iter().enumerate() {
            let expect = if i == j { p.matrix().clone() } else { CMat::zeros(d, d) };
            let err = specmat::max_abs_diff(&(p.matrix() * q.matrix()), &expect);
            ensure(err <= 1e-12, || format!("P{i}P{j} error {err:e}"))?;
        }
    }
    Ok(())
}

/// States supported on the first `rank` columns of `u`.
fn state_on(u: &CMat, rank: usize, rng: &mut SeededRng) -> DensityOperator {
    let v = u.columns(0, rank).into_owned();
    let inner = random_state(rank, rng);
    state_from(specmat::hermitian_part(&(&v * inner.matrix() * v.adjoint())))
}

pub fn absolute_continuity_preorder(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let u = random_unitary(d, &mut rng);
    let mut ranks: Vec<usize> = (0..3).map(|_| rng.random_range(1..=d)).collect();
    if rng.random_bool(0.5) {
        ranks.sort_unstable();
    }
    let states: Vec<DensityOperator> = ranks.iter().map(|&r| state_on(&u, r, &mut rng)).collect();
    for s in &states {
        ensure(absolutely_continuous(s, s), || "not reflexive".into())?;
    }
    let ac = |i: usize, j: usize| absolutely_continuous(&states[i], &states[j]);
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        // nested supports decide the relation
        ensure(ac(i, j) == (ranks[i] <= ranks[j]), || format!("wrong relation for ranks {ranks:?}"))?;
    }
    ensure(!(ac(0, 1) && ac(1, 2)) || ac(0, 2), || "not transitive".into())
}

pub fn weak_lueders_in_commutant(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let psi = random_state(d, &mut rng);
    let r = random_resolution(d, &mut rng);
    let out = rules::weak_lueders(&psi, &r).map_err(|e| e.to_string())?;
    let m = in_constraint(&out, &ConstraintSet::CommutantQL(r), 1e-9).map_err(|e| e.to_string())?;
    ensure(m.member, || format!("residual {:e}", m.residual))
}

pub fn pinching_is_orthogonal(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let a = ginibre(d, d, &mut rng);
    let r = random_resolution(d, &mut rng);
    let bd = block_decompose(&a, &r).map_err(|e| e.to_string())?;
    let blocks: f64 = bd.blocks.iter().map(|b| specmat::hs_norm(b).powi(2)).sum();
    let total = specmat::hs_norm(&a).powi(2);
    // compared squared: the square root amplifies cancellation when the
    // remainder vanishes
    let err = (specmat::hs_norm(&bd.remainder).powi(2) - (total - blocks)).abs();
    ensure(err <= 1e-10 * total, || format!("remainder norm error {err:e}"))
}

// ---- diverge ----

fn diagonal_state(d: usize, rng: &mut SeededRng) -> DensityOperator {
    DensityOperator::diagonal(&random_weights(d, 0.01, rng)).expect("probability vector")
}

pub fn nonnegativity_and_identity(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let (a, b) = if seed.is_multiple_of(2) {
        (random_state(d, &mut rng), random_state(d, &mut rng))
    } else {
        (diagonal_state(d, &mut rng), diagonal_state(d, &mut rng))
    };
    let diagonal = seed % 2 == 1;
    for kind in DivergenceKind::ALL {
        let same = diverge::evaluate(kind, &a, &a).value();
        // Bures takes a square root of a roundoff-sized difference
        let id_tol = if kind == DivergenceKind::Bures { 1e-7 } else { 1e-10 };
        ensure(same.abs() <= id_tol, || format!("{kind}(a, a) = {same:e}"))?;
        let v = diverge::evaluate(kind, &a, &b).value();
        ensure(v >= -1e-12, || format!("{kind} negative: {v:e}"))?;
        // WGKL only separates states through their diagonals
        if kind != DivergenceKind::Wgkl || diagonal {
            ensure(v > 1e-12, || format!("{kind} vanishes on distinct states"))?;
        }
    }
    Ok(())
}

pub fn commutative_reduction(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let (a, b) = (diagonal_state(d, &mut rng), diagonal_state(d, &mut rng));
    let q = diverge::d1_umegaki(&a, &b).value();
    let w = diverge::wgkl(&a, &b).value();
    ensure((q - w).abs() <= 1e-12, || format!("d1 {q} vs wgkl {w}"))
}

pub fn flip_identity(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let (w, f) = (random_state(d, &mut rng), random_state(d, &mut rng));
    // D₀(ω, φ) from its own trace formula: tr ω − tr φ + tr φ(log φ − log ω)
    let log_w = specmat::log_psd(w.matrix()).unwrap();
    let log_f = specmat::log_psd(f.matrix()).unwrap();
    let direct = w.trace() - f.trace() + (f.matrix() * (log_f - log_w)).trace().re;
    let d0 = diverge::d0(&w, &f).value();
    let d1 = diverge::d1_umegaki(&f, &w).value();
    ensure((d0 - d1).abs() <= 1e-12 && (d0 - direct).abs() <= 1e-12, || {
        format!("d0 {d0}, d1 flipped {d1}, direct {direct}")
    })
}

pub fn d_half_identity(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let (a, b) = (random_state(d, &mut rng), random_state(d, &mut rng));
    let dh = diverge::d_half(&a, &b);
    let via_tp = 2.0 * (a.trace() + b.trace()) - 4.0 * diverge::tp_raggio(&a, &b);
    let via_hs = 2.0 * diverge::l2_sqrt(&a, &b).powi(2);
    ensure((dh - via_tp).abs() <= 1e-12 && (dh - via_hs).abs() <= 1e-12, || {
        format!("d_half {dh}, via TP_R {via_tp}, via HS {via_hs}")
    })
}

pub fn commuting_transition_probabilities(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let u = random_unitary(d, &mut rng);
    let make = |p: Vec<f64>| state_from(specmat::hermitian_part(&(&u * specmat::diag(&p) * u.adjoint())));
    let a = make(random_weights(d, 0.01, &mut rng));
    let b = make(random_weights(d, 0.01, &mut rng));
    let (cu, r) = (diverge::tp_cu(&a, &b), diverge::tp_raggio(&a, &b));
    ensure((cu - r * r).abs() <= 1e-10, || format!("TP_CU {cu} ≠ TP_R² {}", r * r))
}

pub fn joint_convexity(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let w1 = random_state(d, &mut rng);
    let w2 = random_state(d, &mut rng);
    let f1 = random_state(d, &mut rng);
    let f2 = random_state(d, &mut rng);
    let l: f64 = rng.random();
    let mix = |a: &DensityOperator, b: &DensityOperator| state_from(a.matrix().scale(l) + b.matrix().scale(1.0 - l));
    let lhs = diverge::d1_umegaki(&mix(&w1, &w2), &mix(&f1, &f2)).value();
    let rhs = l * diverge::d1_umegaki(&w1, &f1).value() + (1.0 - l) * diverge::d1_umegaki(&w2, &f2).value();
    ensure(lhs <= rhs + 1e-9, || format!("{lhs} > {rhs}"))
}

// ---- modular ----

pub fn modular_spectrum(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let lp = random_weights(d, 0.02, &mut rng);
    let lw = random_weights(d, 0.02, &mut rng);
    let phi = state_with_spectrum(&lp, &mut rng);
    let omega = state_with_spectrum(&lw, &mut rng);
    let mut got = relative_modular(&phi, &omega).map_err(|e| e.to_string())?.spectrum();
    let mut want: Vec<f64> = lp.iter().flat_map(|a| lw.iter().map(move |b| a / b)).collect();
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    let err = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(err <= 1e-9, || format!("spectrum error {err:e}"))
}

pub fn araki_equals_umegaki(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let (w, f) = (random_state(d, &mut rng), random_state(d, &mut rng));
    let a = araki_d1(&w, &f).map_err(|e| e.to_string())?.value();
    let u = diverge::d1_umegaki(&w, &f).value();
    ensure((a - u).abs() <= 1e-9, || format!("araki {a} vs umegaki {u}"))
}

pub fn support_violation_is_infinite(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let w = random_state(d, &mut rng);
    let thin = random_state_of_rank(d, d - 1, &mut rng);
    let a = araki_d1(&w, &thin).map_err(|e| e.to_string())?;
    let u = diverge::d1_umegaki(&w, &thin);
    ensure(!a.is_finite() && !u.is_finite(), || format!("araki {a}, umegaki {u}"))
}

pub fn cocycle_chain_rule(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let (f, p, w) = (random_state(d, &mut rng), random_state(d, &mut rng), random_state(d, &mut rng));
    let t: f64 = rng.random_range(-3.0..3.0);
    let fp = connes_cocycle(&f, &p, t).unwrap().matrix;
    let pw = connes_cocycle(&p, &w, t).unwrap().matrix;
    let fw = connes_cocycle(&f, &w, t).unwrap().matrix;
    let err = specmat::max_abs_diff(&(fp * pw), &fw);
    ensure(err <= 1e-9, || format!("chain rule error {err:e}"))
}

pub fn petz_convergence(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let (w, f) = (random_state(d, &mut rng), random_state(d, &mut rng));
    let reference = diverge::d1_umegaki(&w, &f).value();
    let est = petz_limit_d1(&w, &f, &default_t_grid()).map_err(|e| e.to_string())?;
    let err = (est.estimate - reference).abs();
    ensure(err <= 1e-6, || format!("limit error {err:e}"))?;
    match observed_order(&est.samples, reference, 1e-10) {
        Some(order) => ensure(order >= 1.0, || format!("observed order {order}")),
        None => Ok(()),
    }
}

// ---- rules ----

pub fn weak_lueders_properties(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let psi = random_state(d, &mut rng);
    let r = random_resolution(d, &mut rng);
    let out = rules::weak_lueders(&psi, &r).map_err(|e| e.to_string())?;
    ensure((out.trace() - 1.0).abs() <= 1e-12, || "trace changed".into())?;
    ensure(out.spectral().min_value() >= -1e-12, || "not positive".into())?;
    let twice = rules::weak_lueders(&out, &r).map_err(|e| e.to_string())?;
    ensure(specmat::max_abs_diff(twice.matrix(), out.matrix()) <= 1e-12, || "not idempotent".into())?;
    for _ in 0..3 {
        let sigma = random_commutant_state(&r, &mut rng);
        let ip = specmat::hs_inner(&(psi.matrix() - out.matrix()), sigma.matrix()).norm();
        ensure(ip <= 1e-10, || format!("residual not orthogonal: {ip:e}"))?;
    }
    Ok(())
}

pub fn jeffrey_marginals(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let psi = random_state(d, &mut rng);
    let r = random_resolution(d, &mut rng);
    let w = JeffreyWeights::new(random_weights(r.len(), 0.0, &mut rng)).unwrap();
    let out = rules::quantum_jeffrey(&psi, &r, &w).map_err(|e| e.to_string())?;
    for (p, &l) in r.members().iter().zip(w.as_slice()) {
        let m = out.expectation(p.matrix()).re;
        ensure((m - l).abs() <= 1e-12, || format!("marginal {m} vs {l}"))?;
    }
    Ok(())
}

pub fn jeffrey_preserves_conditionals(seed: u64, n: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let rows: Vec<Vec<f64>> = random_weights(n * n, 0.01 / (n * n) as f64, &mut rng)
        .chunks(n)
        .map(<[f64]>::to_vec)
        .collect();
    let table = JointTable::new(&rows).unwrap();
    let f = random_weights(n, 0.0, &mut rng);
    let (_, run) = classical_mre(&table, &ClassicalEvidence::Soft(f.clone()), &SolverConfig::default())
        .map_err(|e| e.to_string())?;
    let joint = run.minimizer.matrix();
    for x in 0..n {
        if f[x] == 0.0 {
            continue;
        }
        let cond = table.conditional_theta(x).unwrap();
        for t in 0..n {
            let new = joint[(x * n + t, x * n + t)].re / f[x];
            ensure((new - cond[t]).abs() <= 1e-12, || format!("p(θ|x) changed at ({x},{t})"))?;
        }
    }
    // and the rule's marginal is the θ-marginal of that joint
    let post = rules::jeffrey_update(&table, &f).map_err(|e| e.to_string())?;
    for t in 0..n {
        let m: f64 = (0..n).map(|x| joint[(x * n + t, x * n + t)].re).sum();
        ensure((m - post[t]).abs() <= 1e-12, || "marginal mismatch".into())?;
    }
    Ok(())
}

pub fn von_neumann_matches_lueders(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let xi = random_pure_vector(d, &mut rng);
    let u = random_unitary(d, &mut rng);
    let rank = rng.random_range(1..=d);
    let p = Projector::from_isometry(&u.columns(0, rank).into_owned()).unwrap();
    let v = rules::strong_von_neumann(&xi, &p).map_err(|e| e.to_string())?;
    let pure = DensityOperator::pure(&xi).unwrap();
    let l = rules::strong_lueders(&pure, &p).map_err(|e| e.to_string())?;
    let err = specmat::max_abs_diff(&specmat::outer(&v), l.matrix());
    ensure(err <= 1e-12, || format!("von Neumann vs Lüders {err:e}"))
}

pub fn weak_lueders_fixes_diagonal(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let rho = diagonal_state(d, &mut rng);
    let parts = rng.random_range(1..=d);
    let r = resolution_from_groups(&specmat::identity(d), &random_partition(d, parts, &mut rng)).unwrap();
    let out = rules::weak_lueders(&rho, &r).map_err(|e| e.to_string())?;
    ensure(out.matrix() == rho.matrix(), || "diagonal state changed".into())
}

// ---- project ----

pub fn objective_monotone(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let psi = random_state(d, &mut rng);
    let r = random_resolution(d, &mut rng);
    let cfg = SolverConfig {
        seed,
        random_start: true,
        ..SolverConfig::default()
    };
    for kind in [DivergenceKind::D0, DivergenceKind::L2HsStates, DivergenceKind::DHalf, DivergenceKind::D1Umegaki] {
        let out = entropic_project(kind, &psi, &ConstraintSet::CommutantQL(r.clone()), &cfg).map_err(|e| e.to_string())?;
        for w in out.history.windows(2) {
            let slack = 1e-12 * (1.0 + w[0].abs());
            ensure(w[1] <= w[0] + slack, || format!("{kind}: objective rose {} → {}", w[0], w[1]))?;
        }
    }
    Ok(())
}

pub fn uniqueness_probe(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let psi = random_state(d, &mut rng);
    let r = random_resolution(d, &mut rng);
    let w = JeffreyWeights::new(random_weights(r.len(), 0.05, &mut rng)).unwrap();
    let sets = [ConstraintSet::CommutantQL(r.clone()), ConstraintSet::TracePinnedQqJ(r, w)];
    for kind in DivergenceKind::ALL.into_iter().filter(|k| k.is_smooth() && *k != DivergenceKind::Wgkl) {
        for k in &sets {
            let run = |s: u64| {
                let cfg = SolverConfig {
                    seed: s,
                    random_start: true,
                    ..SolverConfig::default()
                };
                entropic_project(kind, &psi, k, &cfg).expect("solvable")
            };
            let (a, b) = (run(seed ^ 1), run(seed ^ 2));
            let td = specmat::trace_distance(a.minimizer.matrix(), b.minimizer.matrix());
            ensure(td <= 1e-6, || format!("{kind} on {}: starts disagree by {td:e}", k.name()))?;
        }
    }
    Ok(())
}

pub fn oracle_not_below_solver(seed: u64, d: usize) -> Check {
    let mut rng = rng_from_seed(seed);
    let psi = random_state(d, &mut rng);
    let r = random_resolution(d, &mut rng);
    let u = random_unitary(d, &mut rng);
    let p = Projector::from_isometry(&u.columns(0, rng.random_range(1..=d)).into_owned()).unwrap();
    let cases = [
        (DivergenceKind::D0, ConstraintSet::CommutantQL(r.clone())),
        (DivergenceKind::DHalf, ConstraintSet::CommutantQL(r)),
        (DivergenceKind::D0, ConstraintSet::FaceQsL(p.clone())),
        (DivergenceKind::Bures, ConstraintSet::FaceQsL(p)),
    ];
    for (kind, k) in cases {
        let solver = entropic_project(kind, &psi, &k, &SolverConfig::default()).map_err(|e| e.to_string())?;
        let oracle = sampling_oracle(kind, &psi, &k, 3000, seed).map_err(|e| e.to_string())?;
        let (s, o) = (solver.objective.value(), oracle.objective.value());
        ensure(o >= s - 1e-4, || format!("{kind} on {}: oracle {o} below solver {s}", k.name()))?;
    }
    Ok(())
}

/// Pythagorean residual `D₀(φ,ψ) − D₀(φ,ρ*) − D₀(ρ*,ψ)` over `count` random
/// feasible `φ`, with `ρ*` the solver's projection onto the commutant.
pub fn pythagorean(seed: u64, d: usize, count: usize) -> std::result::Result<f64, String> {
    let mut rng = rng_from_seed(seed);
    let psi = random_state(d, &mut rng);
    let r = random_resolution(d, &mut rng);
    let rho = rules::weak_lueders(&psi, &r).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let phi = random_commutant_state(&r, &mut rng);
        let res = qproj_core::project::triangle_residual(DivergenceKind::D0, &phi, &rho, &psi).map_err(|e| e.to_string())?;
        worst = worst.max(res.abs());
    }
    Ok(worst)
}

/// Two commuting resolutions in a shared random basis.
pub fn commuting_pair(d: usize, rng: &mut SeededRng) -> (OrthogonalResolution, OrthogonalResolution) {
    let u = random_unitary(d, rng);
    let a = resolution_from_groups(&u, &random_partition(d, rng.random_range(1..=d), rng)).unwrap();
    let b = resolution_from_groups(&u, &random_partition(d, rng.random_range(1..=d), rng)).unwrap();
    (a, b)
}
