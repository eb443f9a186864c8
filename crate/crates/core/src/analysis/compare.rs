use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::eig::cluster_eigenvalues;
use crate::manifolds::AnalyticCluster;
use crate::metric::MeshStats;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub index: usize,
    pub lambda_t: f64,
    pub lambda_m: f64,
    /// Relative error, or absolute error where `lambda_m = 0`.
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterMatch {
    pub analytic_index: usize,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    /// Positions the cluster occupies in the ordered analytic spectrum.
    pub expected: Range<usize>,
    /// Discrete cluster matched in ascending order, if there is one.
    pub discrete: Option<Range<usize>>,
    pub multiplicity_agrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshSummary {
    pub mesh: f64,
    pub thinness: f64,
    pub num_vertices: usize,
}

impl From<&MeshStats> for MeshSummary {
    fn from(s: &MeshStats) -> Self {
        Self {
            mesh: s.mesh,
            thinness: s.thinness,
            num_vertices: s.num_vertices,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rel_gap: f64,
    pub pairs: Vec<EigenPair>,
    pub cluster_match: Vec<ClusterMatch>,
    pub mesh: Option<MeshSummary>,
}

impl ComparisonReport {
    /// Largest relative error over pairs with a nonzero analytic eigenvalue.
    pub fn max_relative_error(&self) -> f64 {
        self.pairs
            .iter()
            .filter(|p| p.lambda_m != 0.0)
            .map(|p| p.rel_err)
            .fold(0.0, f64::max)
    }

    pub fn multiplicities_agree(&self) -> bool {
        self.cluster_match.iter().all(|c| c.multiplicity_agrees)
    }

    pub fn with_mesh(mut self, stats: &MeshStats) -> Self {
        self.mesh = Some(stats.into());
        self
    }

    /// One row per eigenvalue pair, header `index,lambda_T,lambda_M,rel_err`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,lambda_T,lambda_M,rel_err\n");
        for p in &self.pairs {
            out.push_str(&format!("{},{:e},{:e},{:e}\n", p.index, p.lambda_t, p.lambda_m, p.rel_err));
        }
        out
    }
}

/// Matches the ascending discrete spectrum against analytic clusters, index
/// by index and cluster by cluster (the k-th discrete cluster against the
/// k-th analytic one).
pub fn compare_spectra(
    eigenvalues: &[f64],
    analytic: &[AnalyticCluster],
    rel_gap: f64,
) -> Result<ComparisonReport, AnalysisError> {
    let needed: usize = analytic.iter().map(|c| c.multiplicity).sum();
    if eigenvalues.len() < needed {
        return Err(AnalysisError::InsufficientEigenvalues {
            needed,
            available: eigenvalues.len(),
        });
    }
    let discrete = cluster_eigenvalues(eigenvalues, rel_gap);

    let mut pairs = Vec::with_capacity(needed);
    let mut cluster_match = Vec::with_capacity(analytic.len());
    let mut start = 0;
    for (ci, cluster) in analytic.iter().enumerate() {
        let expected = start..start + cluster.multiplicity;
        for index in expected.clone() {
            let (lambda_t, lambda_m) = (eigenvalues[index], cluster.eigenvalue);
            let diff = (lambda_t - lambda_m).abs();
            let rel_err = if lambda_m != 0.0 { diff / lambda_m.abs() } else { diff };
            pairs.push(EigenPair {
                index,
                lambda_t,
                lambda_m,
                rel_err,
            });
        }
        let matched = discrete.get(ci).cloned();
        cluster_match.push(ClusterMatch {
            analytic_index: ci,
            eigenvalue: cluster.eigenvalue,
            multiplicity: cluster.multiplicity,
            multiplicity_agrees: matched.as_ref() == Some(&expected),
            expected,
            discrete: matched,
        });
        start += cluster.multiplicity;
    }
    Ok(ComparisonReport {
        rel_gap,
        pairs,
        cluster_match,
        mesh: None,
    })
}

/// Least-squares slope of `ln(error)` against `ln(h)`.
pub fn loglog_slope(h: &[f64], error: &[f64]) -> f64 {
    assert_eq!(h.len(), error.len());
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = error.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
