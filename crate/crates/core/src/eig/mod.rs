//! Generalized symmetric eigenproblem `Q v = λ M v`.
//!
//! Two solvers share one result type: [`solve_dense`] reduces to a standard
//! symmetric problem through the Cholesky factor of `M`; [`solve_iterative`]
//! runs shift-invert subspace iteration on a sparse factorization and only
//! returns the lowest eigenpairs.

pub(crate) mod dense;
mod envelope;
mod iterative;

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assembly::FormPair;

pub use dense::solve_dense;
pub use envelope::EnvelopeCholesky;
pub use iterative::{solve_iterative, solve_iterative_with, IterativeOptions};

/// Problems larger than this are not handed to the dense solver.
pub const DENSE_THRESHOLD: usize = 3000;

/// Default relative gap for [`cluster_eigenvalues`].
pub const DEFAULT_REL_GAP: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("mass matrix is not positive definite")]
    MassNotPositiveDefinite,
    #[error("Q - {shift} M is not positive definite; the shift must lie below the spectrum")]
    ShiftNotBelowSpectrum { shift: f64 },
    #[error("no convergence after {max_iterations} iterations (worst relative residual {worst_residual:e})")]
    ConvergenceFailure {
        max_iterations: usize,
        worst_residual: f64,
    },
    #[error("{n} unknowns exceed the dense solver threshold {threshold}")]
    DenseTooLarge { n: usize, threshold: usize },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    Dense,
    ShiftInvertSubspace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverInfo {
    pub method: SolverMethod,
    pub iterations: usize,
    pub shift: f64,
    /// Relative residual of each returned pair, see [`relative_residual`].
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Ascending eigenvalues with `M`-orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` belongs to `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub clusters: Vec<Range<usize>>,
    pub solver_info: SolverInfo,
}

impl SpectralResult {
    pub(crate) fn new(
        fp: &FormPair,
        eigenvalues: Vec<f64>,
        mut eigenvectors: Vec<Vec<f64>>,
        method: SolverMethod,
        iterations: usize,
        shift: f64,
    ) -> Self {
        eigenvectors.iter_mut().for_each(|v| normalize_sign(v));
        let residuals: Vec<f64> = eigenvalues
            .iter()
            .zip(&eigenvectors)
            .map(|(&l, v)| relative_residual(fp, l, v))
            .collect();
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        Self {
            clusters: cluster_eigenvalues(&eigenvalues, DEFAULT_REL_GAP),
            eigenvalues,
            eigenvectors,
            solver_info: SolverInfo {
                method,
                iterations,
                shift,
                residuals,
                max_residual,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// `‖Qv − λMv‖₂ / ((‖Q‖ + |λ|‖M‖) ‖v‖₂)` with infinity norms for the matrices.
pub fn relative_residual(fp: &FormPair, lambda: f64, v: &[f64]) -> f64 {
    let qv = fp.stiffness.mul_vec(v);
    let mv = fp.mass.mul_vec(v);
    let r = qv
        .iter()
        .zip(&mv)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = (fp.stiffness.norm_inf() + lambda.abs() * fp.mass.norm_inf()) * vn;
    if scale > 0.0 {
        r / scale
    } else {
        r
    }
}

/// Flips `v` so that its first entry of largest magnitude is positive.
pub fn normalize_sign(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Splits an ascending list into maximal runs where consecutive values satisfy
/// `λ_{i+1} − λ_i ≤ rel_gap · max(λ_{i+1}, floor)`, with `floor = |λ_1| / 100`.
pub fn cluster_eigenvalues(eigenvalues: &[f64], rel_gap: f64) -> Vec<Range<usize>> {
    let floor = eigenvalues.get(1).map_or(0.0, |l| l.abs() / 100.0);
    cluster_eigenvalues_with_floor(eigenvalues, rel_gap, floor)
}

pub fn cluster_eigenvalues_with_floor(
    eigenvalues: &[f64],
    rel_gap: f64,
    floor: f64,
) -> Vec<Range<usize>> {
    let mut clusters = Vec::new();
    if eigenvalues.is_empty() {
        return clusters;
    }
    let mut start = 0;
    for i in 0..eigenvalues.len() - 1 {
        let (a, b) = (eigenvalues[i], eigenvalues[i + 1]);
        if b - a > rel_gap * b.max(floor) {
            clusters.push(start..i + 1);
            start = i + 1;
        }
    }
    clusters.push(start..eigenvalues.len());
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_by_relative_gap() {
        let c = cluster_eigenvalues(&[0.0, 1.99, 2.00, 2.01, 5.9], 0.05);
        assert_eq!(c, vec![0..1, 1..4, 4..5]);
    }

    #[test]
    fn equal_values_form_one_cluster() {
        assert_eq!(cluster_eigenvalues(&[3.0; 5], 0.05), vec![0..5]);
        assert_eq!(cluster_eigenvalues(&[0.0; 3], 0.05), vec![0..3]);
        assert!(cluster_eigenvalues(&[], 0.05).is_empty());
    }

    #[test]
    fn geometric_sequence_is_all_singletons() {
        let values: Vec<f64> = (0..10).map(|k| 2f64.powi(k)).collect();
        let c = cluster_eigenvalues(&values, 0.05);
        assert_eq!(c.len(), 10);
        assert!(c.iter().all(|r| r.len() == 1));
    }

    #[test]
    fn zero_stays_alone_next_to_small_values() {
        let c = cluster_eigenvalues(&[-1e-14, 1e-3, 1.01e-3], 0.05);
        assert_eq!(c, vec![0..1, 1..3]);
    }

    #[test]
    fn sign_convention() {
        let mut v = vec![0.1, -0.5, 0.5, 0.2];
        normalize_sign(&mut v);
        assert_eq!(v, vec![-0.1, 0.5, -0.5, -0.2]);
    }
}
