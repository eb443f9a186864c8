use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::assembly::FormPair;
use crate::eig::SpectralResult;
use crate::manifolds::VertexedMesh;

/// Selects member `member` of analytic eigenvalue cluster `cluster`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenfunctionId {
    pub cluster: usize,
    pub member: usize,
}

impl fmt::Display for EigenfunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}m{}", self.cluster, self.member)
    }
}

/// Samples an analytic eigenfunction at the mesh vertices.
pub fn restrict(mesh: &VertexedMesh, f: EigenfunctionId) -> Result<Vec<f64>, AnalysisError> {
    mesh.positions
        .iter()
        .map(|p| {
            mesh.manifold
                .eigenfunction(f.cluster, f.member, p)
                .map_err(AnalysisError::from)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub id: String,
    /// `‖v − Pv‖² / ‖v‖²` in the discrete mass norm.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Discrete eigenvector indices spanning the projection target.
    pub target: Range<usize>,
    /// Smallest discrete gap separating the target from its neighbours.
    pub eta: Option<f64>,
    pub per_function: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn max_ratio(&self) -> f64 {
        self.per_function.iter().map(|e| e.ratio).fold(0.0, f64::max)
    }
}

/// Mass-orthogonal projection of each vector onto the span of the discrete
/// eigenvectors `target`, reporting the relative squared residual.
pub fn projection_residual(
    fp: &FormPair,
    spectral: &SpectralResult,
    vectors: &[(String, Vec<f64>)],
    target: Range<usize>,
) -> Result<ResidualReport, AnalysisError> {
    if target.is_empty() {
        return Err(AnalysisError::EmptyCluster(target));
    }
    if spectral.eigenvectors.len() < target.end {
        return if spectral.eigenvectors.is_empty() {
            Err(AnalysisError::MissingEigenvectors)
        } else {
            Err(AnalysisError::InsufficientEigenvalues {
                needed: target.end,
                available: spectral.eigenvectors.len(),
            })
        };
    }
    let n = fp.num_vertices();
    let basis = &spectral.eigenvectors[target.clone()];
    let basis_m: Vec<Vec<f64>> = basis.iter().map(|f| fp.mass.mul_vec(f)).collect();

    let mut per_function = Vec::with_capacity(vectors.len());
    for (id, v) in vectors {
        if v.len() != n {
            return Err(AnalysisError::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let mut r = v.clone();
        for (f, mf) in basis.iter().zip(&basis_m) {
            let c: f64 = v.iter().zip(mf).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(f).for_each(|(ri, fi)| *ri -= c * fi);
        }
        per_function.push(ResidualEntry {
            id: id.clone(),
            ratio: fp.mass.quadratic(&r) / fp.mass.quadratic(v),
        });
    }

    let eigs = &spectral.eigenvalues;
    let below = (target.start > 0).then(|| eigs[target.start] - eigs[target.start - 1]);
    let above = (target.end < eigs.len()).then(|| eigs[target.end] - eigs[target.end - 1]);
    let eta = match (below, above) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Ok(ResidualReport {
        target,
        eta,
        per_function,
    })
}
