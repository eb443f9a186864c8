//! Comparison of discrete spectral data with the continuous spectrum of a
//! model manifold, plus the bound formulas and the P1 finite-element oracle.

mod bounds;
mod compare;
mod minmax;
mod oracle;
mod residual;

use thiserror::Error;

pub use bounds::{cheng_bound, theorem1_admissible_mesh, theorem1_mesh_certified, AdmissibilityInput};
pub use compare::{compare_spectra, loglog_slope, ClusterMatch, ComparisonReport, EigenPair, MeshSummary};
pub use minmax::{minmax_compare, prolongation, MinMaxReport};
pub use oracle::{p1_oracle, p1_oracle_with};
pub use residual::{projection_residual, restrict, EigenfunctionId, ResidualReport};

use crate::manifolds::ManifoldError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("{needed} discrete eigenvalues are needed, only {available} available")]
    InsufficientEigenvalues { needed: usize, available: usize },
    #[error("projection target {0:?} is empty")]
    EmptyCluster(std::ops::Range<usize>),
    #[error("spectral result carries no eigenvectors")]
    MissingEigenvectors,
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the map does not preserve positive definiteness of the mass form")]
    DegenerateMap,
    #[error("simplex {0:?} is degenerate in the given coordinates")]
    DegenerateSimplex(Vec<usize>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}
