//! Distances and divergences between positive operators.
//!
//! Divergences that are infinite on support violations return
//! [`ExtendedReal::Infinite`]; that value is never produced by overflow.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::specmat::{self, c, CMat};
use crate::states::{absolutely_continuous, DensityOperator};
use crate::tol::RANK_TOL;

/// A real number or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// The value as `f64`, with `+∞` mapped to `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtendedReal::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(ExtendedReal::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivergenceKind {
    D0,
    D1Umegaki,
    DHalf,
    Bures,
    L1Jmgk,
    L2HsStates,
    L2HsSqrt,
    Wgkl,
}

impl DivergenceKind {
    pub const ALL: [DivergenceKind; 8] = [
        DivergenceKind::D0,
        DivergenceKind::D1Umegaki,
        DivergenceKind::DHalf,
        DivergenceKind::Bures,
        DivergenceKind::L1Jmgk,
        DivergenceKind::L2HsStates,
        DivergenceKind::L2HsSqrt,
        DivergenceKind::Wgkl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DivergenceKind::D0 => "d0",
            DivergenceKind::D1Umegaki => "d1-umegaki",
            DivergenceKind::DHalf => "d-half",
            DivergenceKind::Bures => "bures",
            DivergenceKind::L1Jmgk => "l1-jmgk",
            DivergenceKind::L2HsStates => "l2-states",
            DivergenceKind::L2HsSqrt => "l2-sqrt",
            DivergenceKind::Wgkl => "wgkl",
        }
    }

    /// Whether the kind has a gradient usable by the projection solver.
    pub fn is_smooth(self) -> bool {
        !matches!(self, DivergenceKind::L1Jmgk)
    }
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DivergenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        DivergenceKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::InvalidInput(format!("unknown divergence kind {s:?}")))
    }
}

/// `Σ λ log λ` over the support.
fn trace_x_log_x(state: &DensityOperator) -> f64 {
    let spec = state.spectral();
    (0..spec.dim())
        .filter(|&k| spec.in_support(k, RANK_TOL))
        .map(|k| spec.values[k] * spec.values[k].ln())
        .sum()
}

/// `tr(A log B)` with the logarithm taken on `supp(B)`.
fn trace_a_log_b(a: &CMat, b: &DensityOperator) -> f64 {
    let log_b = b
        .spectral()
        .rebuild_on_support(|l| c(l.ln(), 0.0), RANK_TOL);
    (a * log_b).trace().re
}

/// Umegaki relative entropy with the trace correction for unnormalized
/// arguments: `tr φ − tr ω + tr ω(log ω − log φ)` if `ω ≪ φ`, else `+∞`.
pub fn d1_umegaki(omega: &DensityOperator, phi: &DensityOperator) -> ExtendedReal {
    if !absolutely_continuous(omega, phi) {
        return ExtendedReal::Infinite;
    }
    let v = phi.trace() - omega.trace() + trace_x_log_x(omega) - trace_a_log_b(omega.matrix(), phi);
    ExtendedReal::Finite(v)
}

/// `D₀(ω, φ) = D₁(φ, ω)`; finite iff `φ ≪ ω`.
pub fn d0(omega: &DensityOperator, phi: &DensityOperator) -> ExtendedReal {
    d1_umegaki(phi, omega)
}

/// `2(tr φ + tr ω) − 4 tr(φ^{1/2} ω^{1/2}) = 2‖φ^{1/2} − ω^{1/2}‖²_HS`.
pub fn d_half(omega: &DensityOperator, phi: &DensityOperator) -> f64 {
    2.0 * (phi.trace() + omega.trace()) - 4.0 * tp_raggio(phi, omega)
}

/// Raggio transition probability `tr(φ^{1/2} ψ^{1/2})`.
pub fn tp_raggio(phi: &DensityOperator, psi: &DensityOperator) -> f64 {
    specmat::hs_inner(&phi.hs_vector().matrix, &psi.hs_vector().matrix).re
}

/// Cantoni–Uhlmann transition probability `(tr √(φ^{1/2} ψ φ^{1/2}))²`.
pub fn tp_cu(phi: &DensityOperator, psi: &DensityOperator) -> f64 {
    let s = phi.hs_vector().matrix;
    let m = specmat::hermitian_part(&(&s * psi.matrix() * &s));
    let root = specmat::trace_sqrt_psd(&m);
    root * root
}

/// `√(tr φ + tr ψ − 2√TP_CU)`.
pub fn bures(phi: &DensityOperator, psi: &DensityOperator) -> f64 {
    (phi.trace() + psi.trace() - 2.0 * tp_cu(phi, psi).sqrt())
        .max(0.0)
        .sqrt()
}

/// `½‖φ − ψ‖₁`.
pub fn l1_jmgk(phi: &DensityOperator, psi: &DensityOperator) -> f64 {
    specmat::trace_distance(phi.matrix(), psi.matrix())
}

/// `‖φ − ψ‖_HS` between the density matrices.
pub fn l2_states(phi: &DensityOperator, psi: &DensityOperator) -> f64 {
    specmat::hs_norm(&(phi.matrix() - psi.matrix()))
}

/// `‖φ^{1/2} − ψ^{1/2}‖_HS`.
pub fn l2_sqrt(phi: &DensityOperator, psi: &DensityOperator) -> f64 {
    specmat::hs_norm(&(phi.hs_vector().matrix - psi.hs_vector().matrix))
}

/// Kullback–Leibler divergence of finite measures,
/// `Σ q − Σ p + Σ p log(p/q)`, infinite unless `p ≪ q`.
pub fn wgkl_distribution(p: &[f64], q: &[f64]) -> ExtendedReal {
    let scale = q.iter().chain(p.iter()).fold(0.0_f64, |m, x| m.max(x.abs()));
    let thr = RANK_TOL * scale;
    let mut acc = q.iter().sum::<f64>() - p.iter().sum::<f64>();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > thr {
            if qi <= thr {
                return ExtendedReal::Infinite;
            }
            acc += pi * (pi / qi).ln();
        }
    }
    ExtendedReal::Finite(acc)
}

/// WGKL divergence of the diagonals (computational basis) of two operators.
pub fn wgkl(omega: &DensityOperator, phi: &DensityOperator) -> ExtendedReal {
    let p: Vec<f64> = omega.matrix().diagonal().iter().map(|z| z.re).collect();
    let q: Vec<f64> = phi.matrix().diagonal().iter().map(|z| z.re).collect();
    wgkl_distribution(&p, &q)
}

/// Evaluates `kind` at `(first, second)`.
pub fn evaluate(kind: DivergenceKind, first: &DensityOperator, second: &DensityOperator) -> ExtendedReal {
    use DivergenceKind::*;
    match kind {
        D0 => d0(first, second),
        D1Umegaki => d1_umegaki(first, second),
        DHalf => ExtendedReal::Finite(d_half(first, second)),
        Bures => ExtendedReal::Finite(bures(first, second)),
        L1Jmgk => ExtendedReal::Finite(l1_jmgk(first, second)),
        L2HsStates => ExtendedReal::Finite(l2_states(first, second)),
        L2HsSqrt => ExtendedReal::Finite(l2_sqrt(first, second)),
        Wgkl => wgkl(first, second),
    }
}
