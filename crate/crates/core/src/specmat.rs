//! Spectral calculus for Hermitian matrices.
//!
//! Every matrix function in the crate is evaluated through a single
//! eigendecomposition ([`eigh`]) followed by an eigenvalue-wise map. Functions
//! of positive semidefinite matrices that are singular at zero (log, negative
//! and imaginary powers) are applied on the support only and vanish on the
//! kernel, which is the finite-dimensional reading of "restricted to supp".

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::{RANK_TOL, TOL_HERM, TOL_PSD};

pub type C64 = Complex64;

/// Dense complex square matrix; the carrier of every operator in the crate.
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Real diagonal matrix.
pub fn diag(values: &[f64]) -> CMat {
    let d = values.len();
    CMat::from_fn(d, d, |i, j| if i == j { c(values[i], 0.0) } else { ZERO })
}

/// Builds a matrix from row-major real entries.
pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let d = rows.len();
    CMat::from_fn(d, rows[0].len(), |i, j| c(rows[i][j], 0.0))
}

pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

/// `|ψ⟩⟨ψ|` for a (not necessarily normalized) column vector.
pub fn outer(v: &DVector<C64>) -> CMat {
    v * v.adjoint()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Largest entrywise modulus of `A - A^†`.
pub fn hermitian_residual(a: &CMat) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(A + A^†) / 2`.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

pub fn is_finite(a: &CMat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Column-stacking vectorization, `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
pub fn vectorize(a: &CMat) -> DVector<C64> {
    DVector::from_column_slice(a.as_slice())
}

pub fn unvectorize(v: &DVector<C64>, d: usize) -> CMat {
    CMat::from_column_slice(d, d, v.as_slice())
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Eigendecomposition `H = U diag(λ) U^†` with ascending real eigenvalues.
#[derive(Debug, Clone)]
pub struct Spectral {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl Spectral {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Eigenvalue threshold separating support from kernel.
    pub fn support_threshold(&self, rank_tol: f64) -> f64 {
        rank_tol * self.max_value().max(0.0)
    }

    pub fn in_support(&self, k: usize, rank_tol: f64) -> bool {
        let lam = self.values[k];
        lam > 0.0 && lam > self.support_threshold(rank_tol)
    }

    pub fn rank(&self, rank_tol: f64) -> usize {
        (0..self.dim()).filter(|&k| self.in_support(k, rank_tol)).count()
    }

    /// `U diag(g(λ)) U^†`.
    pub fn rebuild<F: Fn(f64) -> C64>(&self, g: F) -> CMat {
        let d = self.dim();
        let mut scaled = self.vectors.clone();
        for k in 0..d {
            let w = g(self.values[k]);
            for i in 0..d {
                scaled[(i, k)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// Applies `g` on support eigenvalues and zero on the kernel.
    pub fn rebuild_on_support<F: Fn(f64) -> C64>(&self, g: F, rank_tol: f64) -> CMat {
        let thr = self.support_threshold(rank_tol);
        self.rebuild(|lam| if lam > 0.0 && lam > thr { g(lam) } else { ZERO })
    }

    pub fn reconstruct(&self) -> CMat {
        self.rebuild(|lam| c(lam, 0.0))
    }

    /// Orthogonal projector onto the span of support eigenvectors.
    pub fn support_projector(&self, rank_tol: f64) -> CMat {
        self.rebuild_on_support(|_| ONE, rank_tol)
    }

    /// Isometry whose columns are the support eigenvectors.
    pub fn support_isometry(&self, rank_tol: f64) -> CMat {
        let cols: Vec<usize> = (0..self.dim())
            .filter(|&k| self.in_support(k, rank_tol))
            .collect();
        let mut v = CMat::zeros(self.dim(), cols.len());
        for (out, &k) in cols.iter().enumerate() {
            v.set_column(out, &self.vectors.column(k));
        }
        v
    }
}

/// Hermitian eigendecomposition with deterministic ordering and phases.
///
/// Eigenvalues are ascending; each eigenvector is rotated so that its first
/// component of non-negligible modulus is real and positive.
pub fn eigh(h: &CMat) -> Result<Spectral> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(h.nrows(), h.ncols()));
    }
    let res = hermitian_residual(h);
    if res > TOL_HERM || !res.is_finite() {
        return Err(Error::NonHermitian(res));
    }
    Ok(eigh_unchecked(&hermitian_part(h)))
}

pub(crate) fn eigh_unchecked(h: &CMat) -> Spectral {
    let d = h.nrows();
    if d == 0 {
        return Spectral {
            values: Vec::new(),
            vectors: CMat::zeros(0, 0),
        };
    }
    let se = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));

    let mut values = Vec::with_capacity(d);
    let mut vectors = CMat::zeros(d, d);
    for (out, &k) in order.iter().enumerate() {
        values.push(se.eigenvalues[k]);
        let mut col = se.eigenvectors.column(k).into_owned();
        let nrm = col.norm();
        if nrm > 0.0 {
            col.unscale_mut(nrm);
        }
        if let Some(pivot) = col.iter().find(|z| z.norm() > 1e-8).copied() {
            let phase = pivot.conj() / pivot.norm();
            col *= phase;
        }
        vectors.set_column(out, &col);
    }
    Spectral { values, vectors }
}

/// Scalar functions available through [`fn_on_support`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarFunction {
    Log,
    Sqrt,
    Exp,
    Power(f64),
    /// `λ ↦ λ^{it}`; unitary on the support of a positive operator.
    ImaginaryPower(f64),
}

impl ScalarFunction {
    pub fn eval(self, lam: f64) -> C64 {
        match self {
            ScalarFunction::Log => c(lam.ln(), 0.0),
            ScalarFunction::Sqrt => c(lam.sqrt(), 0.0),
            ScalarFunction::Exp => c(lam.exp(), 0.0),
            ScalarFunction::Power(t) => c(lam.powf(t), 0.0),
            ScalarFunction::ImaginaryPower(t) => C64::from_polar(1.0, t * lam.ln()),
        }
    }
}

fn check_psd(spec: &Spectral) -> Result<()> {
    let min = spec.min_value();
    if min < -TOL_PSD * spec.max_value().abs().max(1.0) {
        return Err(Error::NotPsd(min));
    }
    Ok(())
}

/// Applies `f` to the eigenvalues of a PSD matrix above `rank_tol·λ_max` and
/// zero to the rest.
pub fn fn_on_support(a: &CMat, f: ScalarFunction, rank_tol: f64) -> Result<CMat> {
    let spec = eigh(a)?;
    check_psd(&spec)?;
    Ok(spec.rebuild_on_support(|lam| f.eval(lam), rank_tol))
}

/// Applies a real function to every eigenvalue of a Hermitian matrix.
pub fn map_hermitian<F: Fn(f64) -> f64>(h: &CMat, f: F) -> Result<CMat> {
    let spec = eigh(h)?;
    Ok(spec.rebuild(|lam| c(f(lam), 0.0)))
}

pub fn exp_hermitian(h: &CMat) -> Result<CMat> {
    map_hermitian(h, f64::exp)
}

/// Logarithm on the support; zero on the kernel.
pub fn log_psd(a: &CMat) -> Result<CMat> {
    fn_on_support(a, ScalarFunction::Log, RANK_TOL)
}

pub fn sqrt_psd(a: &CMat) -> Result<CMat> {
    let spec = eigh(a)?;
    check_psd(&spec)?;
    Ok(spec.rebuild(|lam| c(lam.max(0.0).sqrt(), 0.0)))
}

/// Moore–Penrose pseudo-inverse of a PSD matrix.
pub fn pinv_psd(a: &CMat) -> Result<CMat> {
    fn_on_support(a, ScalarFunction::Power(-1.0), RANK_TOL)
}

/// Orthogonal projector onto the range of a PSD matrix.
pub fn support(a: &CMat) -> Result<CMat> {
    let spec = eigh(a)?;
    check_psd(&spec)?;
    Ok(spec.support_projector(RANK_TOL))
}

/// First divided difference of `ln` at `(a, b)`, stable for `a ≈ b`.
pub fn log_divided_difference(a: f64, b: f64) -> f64 {
    if a == b {
        return 1.0 / a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    ((hi - lo) / lo).ln_1p() / (hi - lo)
}

/// Fréchet derivative of a scalar matrix function at `A` in direction `V`,
/// given the divided-difference kernel `dd(λ_i, λ_j)` (with `dd(λ,λ) = f'(λ)`).
///
/// In the eigenbasis of `A`: `(Df)_{ij} = V_{ij} · dd(λ_i, λ_j)`.
pub fn frechet_with<D: Fn(f64, f64) -> f64>(spec: &Spectral, v: &CMat, dd: D) -> CMat {
    let u = &spec.vectors;
    let mut w = u.adjoint() * v * u;
    let d = spec.dim();
    for i in 0..d {
        for j in 0..d {
            w[(i, j)] *= dd(spec.values[i], spec.values[j]);
        }
    }
    u * w * u.adjoint()
}

/// Fréchet derivative of the matrix logarithm at a positive definite `A`.
pub fn frechet_log(a: &CMat, v: &CMat) -> Result<CMat> {
    let spec = eigh(a)?;
    frechet_log_spectral(&spec, v)
}

pub(crate) fn frechet_log_spectral(spec: &Spectral, v: &CMat) -> Result<CMat> {
    let min = spec.min_value();
    if min.is_nan() || min <= spec.support_threshold(RANK_TOL) || min <= 0.0 {
        return Err(Error::SingularInput(min));
    }
    if v.nrows() != spec.dim() {
        return Err(Error::DimensionMismatch(spec.dim(), v.nrows()));
    }
    Ok(frechet_with(spec, v, log_divided_difference))
}

/// Fréchet derivative of the square root at a positive definite `A`.
pub(crate) fn frechet_sqrt_spectral(spec: &Spectral, v: &CMat) -> CMat {
    frechet_with(spec, v, |a, b| 1.0 / (a.max(0.0).sqrt() + b.max(0.0).sqrt()))
}

/// `tr √A` for a positive semidefinite `A`, ignoring eigenvalues below the
/// rank threshold (their square roots would amplify roundoff).
pub fn trace_sqrt_psd(a: &CMat) -> f64 {
    let spec = eigh_unchecked(&hermitian_part(a));
    (0..spec.dim())
        .filter(|&k| spec.in_support(k, RANK_TOL))
        .map(|k| spec.values[k].sqrt())
        .sum()
}

pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

/// `⟨A, B⟩ = tr(A^† B)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hs_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    a.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// `tr √(A^† A)`.
pub fn trace_norm(a: &CMat) -> f64 {
    if hermitian_residual(a) <= 1e-14 * hs_norm(a).max(1.0) {
        eigh_unchecked(&hermitian_part(a))
            .values
            .iter()
            .map(|x| x.abs())
            .sum()
    } else {
        singular_values(a).iter().sum()
    }
}

pub fn operator_norm(a: &CMat) -> f64 {
    singular_values(a).into_iter().fold(0.0, f64::max)
}

/// The standard norms of a single matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub trace_norm: f64,
    pub hs_norm: f64,
    pub operator_norm: f64,
    pub trace: C64,
}

pub fn norms(a: &CMat) -> Norms {
    Norms {
        trace_norm: trace_norm(a),
        hs_norm: hs_norm(a),
        operator_norm: operator_norm(a),
        trace: trace(a),
    }
}

/// Largest entrywise modulus of `A - B`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `½‖A − B‖₁`.
pub fn trace_distance(a: &CMat, b: &CMat) -> f64 {
    0.5 * trace_norm(&(a - b))
}
