//! JSON encodings for matrices, states and resolutions.
//!
//! ```json
//! {"dim": 2, "re": [[0.5, 0.5], [0.5, 0.5]], "im": [[0, 0], [0, 0]]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specmat::{c, CMat};
use crate::states::{resolution_from_groups, validate_state, DensityOperator, OrthogonalResolution, Projector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let d = m.nrows();
        let re = (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect();
        MatrixJson {
            dim: d,
            re,
            im: Some(im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let d = self.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if d == 0 || !shape_ok(&self.re) || self.im.as_ref().is_some_and(|im| !shape_ok(im)) {
            return Err(Error::InvalidInput(format!("matrix entries do not match dim {d}")));
        }
        Ok(CMat::from_fn(d, d, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            c(self.re[i][j], im)
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub matrix: MatrixJson,
    #[serde(default = "default_true")]
    pub normalized: bool,
}

fn default_true() -> bool {
    true
}

impl StateJson {
    pub fn from_state(s: &DensityOperator) -> Self {
        StateJson {
            matrix: MatrixJson::from_matrix(s.matrix()),
            normalized: s.is_normalized(),
        }
    }

    pub fn to_state(&self) -> Result<DensityOperator> {
        validate_state(&self.matrix.to_matrix()?, self.normalized)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResolutionJson {
    Projectors { projectors: Vec<MatrixJson> },
    /// 1-indexed groups of basis columns.
    Groups { basis: MatrixJson, groups: Vec<Vec<usize>> },
}

impl ResolutionJson {
    pub fn from_resolution(r: &OrthogonalResolution) -> Self {
        ResolutionJson::Projectors {
            projectors: r.members().iter().map(|p| MatrixJson::from_matrix(p.matrix())).collect(),
        }
    }

    pub fn to_resolution(&self) -> Result<OrthogonalResolution> {
        match self {
            ResolutionJson::Projectors { projectors } => {
                let members = projectors
                    .iter()
                    .map(|m| Projector::new(m.to_matrix()?))
                    .collect::<Result<Vec<_>>>()?;
                OrthogonalResolution::new(members)
            }
            ResolutionJson::Groups { basis, groups } => resolution_from_groups(&basis.to_matrix()?, groups),
        }
    }
}
