//! Spectral comparison through a linear map between two discrete spaces.
//!
//! If `Φ: E₁ → E₂` satisfies `|Φx|₂² ≥ α |x|₁²` and `q₂(Φx) ≤ β q₁(x)`, then
//! `λ_k(q₂) ≤ (β/α) λ_k(q₁)` for every `k`. [`minmax_compare`] computes the
//! sharpest `α`, `β` for a given map and checks the conclusion numerically.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::assembly::FormPair;
use crate::eig::dense::dense_generalized;
use crate::manifolds::{ModelManifold, VertexedMesh};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: usize,
    pub lambda_target: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxReport {
    pub alpha: f64,
    pub beta: f64,
    pub certificates: Vec<Certificate>,
}

impl MinMaxReport {
    pub fn violations(&self) -> usize {
        self.certificates.iter().filter(|c| !c.holds).count()
    }
}

/// `phi` is `N₂ × N₁` and maps vertex functions of the first form pair to
/// those of the second. `β` is taken over the complement of `ker Q₁`; if `Φ`
/// does not send that kernel into `ker Q₂`, `β` is infinite.
pub fn minmax_compare(
    source: &FormPair,
    target: &FormPair,
    phi: &DMatrix<f64>,
) -> Result<MinMaxReport, AnalysisError> {
    let (n1, n2) = (source.num_vertices(), target.num_vertices());
    if phi.nrows() != n2 || phi.ncols() != n1 {
        return Err(AnalysisError::DimensionMismatch {
            expected: n2 * n1,
            found: phi.nrows() * phi.ncols(),
        });
    }
    let m1 = source.mass.to_dense();
    let q1 = source.stiffness.to_dense();
    let m2 = target.mass.to_dense();
    let q2 = target.stiffness.to_dense();

    let pulled_mass = phi.transpose() * &m2 * phi;
    let (mass_ratios, _) =
        dense_generalized(&pulled_mass, &m1).ok_or(AnalysisError::DegenerateMap)?;
    let alpha = mass_ratios[0];
    if !(alpha > 1e-12 * mass_ratios[mass_ratios.len() - 1]) {
        return Err(AnalysisError::DegenerateMap);
    }

    let pulled_stiffness = phi.transpose() * &q2 * phi;
    let beta = stiffness_ratio(&q1, &pulled_stiffness);

    let (lambda1, _) = dense_generalized(&q1, &m1).ok_or(AnalysisError::DegenerateMap)?;
    let (lambda2, _) = dense_generalized(&q2, &m2).ok_or(AnalysisError::DegenerateMap)?;
    let scale = lambda1.get(1).copied().unwrap_or(1.0).abs();
    let certificates = lambda1
        .iter()
        .zip(&lambda2)
        .enumerate()
        .map(|(k, (&l1, &l2))| {
            let bound = if beta.is_infinite() {
                f64::INFINITY
            } else {
                beta / alpha * l1
            };
            let tol = 1e-8 * bound.abs().min(f64::MAX) + 1e-10 * scale;
            Certificate {
                k,
                lambda_target: l2,
                bound,
                holds: l2 <= bound + tol,
            }
        })
        .collect();
    Ok(MinMaxReport {
        alpha,
        beta,
        certificates,
    })
}

fn stiffness_ratio(q1: &DMatrix<f64>, pulled: &DMatrix<f64>) -> f64 {
    let eig = SymmetricEigen::new(q1.clone());
    let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (kernel, range): (Vec<usize>, Vec<usize>) =
        (0..q1.nrows()).partition(|&i| eig.eigenvalues[i].abs() <= 1e-10 * top);

    let pulled_top = pulled.abs().max();
    for &i in &kernel {
        let k = eig.eigenvectors.column(i);
        if (pulled * k).norm() > 1e-10 * pulled_top.max(top) {
            return f64::INFINITY;
        }
    }
    if range.is_empty() {
        return 0.0;
    }
    let z = DMatrix::from_fn(q1.nrows(), range.len(), |r, c| eig.eigenvectors[(r, range[c])]);
    let a = z.transpose() * pulled * &z;
    let b = z.transpose() * q1 * &z;
    let (ratios, _) = dense_generalized(&a, &b).expect("Q₁ is definite off its kernel");
    ratios[ratios.len() - 1]
}

/// Interpolation matrix from the P1 space of `coarse` to the vertices of
/// `fine`, for flat tori: row `i` holds the barycentric coordinates of fine
/// vertex `i` in the coarse triangle containing it.
pub fn prolongation(coarse: &VertexedMesh, fine: &VertexedMesh) -> Result<DMatrix<f64>, AnalysisError> {
    let ModelManifold::FlatTorus { periods: [a, b] } = coarse.manifold else {
        return Err(AnalysisError::Unsupported(
            "prolongation is only defined between flat torus meshes".into(),
        ));
    };
    let mut phi = DMatrix::zeros(fine.num_vertices(), coarse.num_vertices());
    for (i, p) in fine.positions.iter().enumerate() {
        let mut found = false;
        for s in coarse.complex().simplices() {
            let pts = coarse.flat_chart(s).expect("flat torus");
            let px = p[0] + a * ((pts[0][0] - p[0]) / a).round();
            let py = p[1] + b * ((pts[0][1] - p[1]) / b).round();
            let (e1, e2) = (
                [pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]],
                [pts[2][0] - pts[0][0], pts[2][1] - pts[0][1]],
            );
            let (dx, dy) = (px - pts[0][0], py - pts[0][1]);
            let det = e1[0] * e2[1] - e1[1] * e2[0];
            let l1 = (dx * e2[1] - dy * e2[0]) / det;
            let l2 = (e1[0] * dy - e1[1] * dx) / det;
            let l0 = 1.0 - l1 - l2;
            if l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12 {
                for (v, w) in s.iter().zip([l0, l1, l2]) {
                    phi[(i, *v)] = w.max(0.0);
                }
                found = true;
                break;
            }
        }
        if !found {
            return Err(AnalysisError::Unsupported(format!(
                "fine vertex {i} lies in no coarse triangle"
            )));
        }
    }
    Ok(phi)
}
