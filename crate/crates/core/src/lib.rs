//! Quantum probability updates as entropic projections.
//!
//! Density operators, orthogonal resolutions and the constraint sets they
//! generate ([`states`]); matrix functions and Fréchet derivatives
//! ([`specmat`]); divergences ([`diverge`]) and their modular-theoretic forms
//! ([`modular`]); closed-form update rules ([`rules`]); and a numerical
//! projection solver with a verification harness ([`project`]).

pub mod diverge;
pub mod error;
pub mod json;
pub mod modular;
pub mod project;
pub mod random;
pub mod rules;
pub mod specmat;
pub mod states;
pub mod tol;

pub use diverge::{DivergenceKind, ExtendedReal};
pub use error::{Error, Result};
pub use project::{
    entropic_project, sampling_oracle, verify, HarnessReport, ProjectionResult, SolverConfig, TheoremId, TrialRow,
};
pub use rules::{ClassicalEvidence, JointTable};
pub use nalgebra::DVector;
pub use specmat::{CMat, C64};
pub use states::{ConstraintSet, DensityOperator, JeffreyWeights, OrthogonalResolution, Projector};
