//! Seeded random states, unitaries and resolutions for tests and harnesses.

use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::specmat::{self, c, identity, CMat, C64};
use crate::states::{resolution_from_groups, DensityOperator, OrthogonalResolution};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from a master seed and a stream path.
pub fn derive_seed(master: u64, stream: &[u64]) -> u64 {
    stream
        .iter()
        .fold(splitmix(master), |acc, &s| splitmix(acc ^ splitmix(s)))
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let qr = ginibre(d, d, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..d {
        let rk = r[(k, k)];
        let n = rk.norm();
        if n > 0.0 {
            let phase = rk / n;
            for i in 0..d {
                q[(i, k)] *= phase;
            }
        }
    }
    q
}

pub fn random_pure_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(d, |_, _| complex_normal(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Hilbert–Schmidt-random state of rank `rank`.
pub fn random_state_of_rank<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityOperator {
    let g = ginibre(d, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::from_psd_unchecked(m.unscale(tr))
}

/// Full-rank state: a Hilbert–Schmidt-random state mixed with `I/d` at weight
/// `floor`, so every eigenvalue is at least `floor/d`.
pub fn random_full_rank_state<R: Rng + ?Sized>(d: usize, floor: f64, rng: &mut R) -> DensityOperator {
    let base = random_state_of_rank(d, d, rng);
    let m = base.matrix().scale(1.0 - floor) + identity(d).scale(floor / d as f64);
    DensityOperator::from_psd_unchecked(m)
}

/// Default eigenvalue floor used for "generic full-rank" trial states.
pub const FULL_RANK_FLOOR: f64 = 0.05;

pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    random_full_rank_state(d, FULL_RANK_FLOOR, rng)
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    DensityOperator::from_psd_unchecked(specmat::outer(&random_pure_vector(d, rng)))
}

/// Flat Dirichlet sample on the `n`-simplex.
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Probability vector with every entry at least `floor`.
pub fn random_weights<R: Rng + ?Sized>(n: usize, floor: f64, rng: &mut R) -> Vec<f64> {
    let free = 1.0 - floor * n as f64;
    assert!(free >= 0.0, "floor too large for {n} weights");
    let mut w: Vec<f64> = random_simplex(n, rng)
        .into_iter()
        .map(|u| floor + free * u)
        .collect();
    // absorb rounding so the weights sum to one as exactly as possible
    let excess: f64 = w.iter().sum::<f64>() - 1.0;
    let imax = (0..n).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap_or(0);
    w[imax] -= excess;
    w
}

/// Random partition of `1..=d` into `parts` non-empty groups.
pub fn random_partition<R: Rng + ?Sized>(d: usize, parts: usize, rng: &mut R) -> Vec<Vec<usize>> {
    assert!(parts >= 1 && parts <= d);
    let mut idx: Vec<usize> = (1..=d).collect();
    idx.shuffle(rng);
    let mut cuts: Vec<usize> = (1..d).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut groups = Vec::with_capacity(parts);
    let mut start = 0;
    for cut in cuts.into_iter().chain(std::iter::once(d)) {
        let mut g = idx[start..cut].to_vec();
        g.sort_unstable();
        groups.push(g);
        start = cut;
    }
    groups
}

/// Orthogonal resolution in a Haar-random basis with between 2 and `d`
/// members (1 when `d = 1`).
pub fn random_resolution<R: Rng + ?Sized>(d: usize, rng: &mut R) -> OrthogonalResolution {
    let parts = if d == 1 { 1 } else { rng.random_range(2..=d) };
    random_resolution_with_parts(d, parts, rng)
}

pub fn random_resolution_with_parts<R: Rng + ?Sized>(d: usize, parts: usize, rng: &mut R) -> OrthogonalResolution {
    let basis = random_unitary(d, rng);
    let groups = random_partition(d, parts, rng);
    resolution_from_groups(&basis, &groups).expect("Haar unitary and a valid partition")
}

/// Random element of the commutant of `r`: the pinching of a full-rank state.
pub fn random_commutant_state<R: Rng + ?Sized>(r: &OrthogonalResolution, rng: &mut R) -> DensityOperator {
    let s = random_state(r.dim(), rng);
    DensityOperator::from_psd_unchecked(r.pinch(s.matrix()))
}
