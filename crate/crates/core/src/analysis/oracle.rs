//! Coordinate-based P1 finite elements, independent of the edge-length route.
//!
//! Mass uses the exact simplex quadrature `2V/((n+1)(n+2))` on the diagonal and
//! `V/((n+1)(n+2))` off it; stiffness uses `V ∇φ_k · ∇φ_l` with the barycentric
//! gradients read off the inverse of the edge-vector matrix.

use nalgebra::DMatrix;

use super::AnalysisError;
use crate::complex::SimplicialComplex;
use crate::sparse::CsrMatrix;

/// P1 matrices of `complex` with vertex coordinates in ℝⁿ.
pub fn p1_oracle(
    coordinates: &[Vec<f64>],
    complex: &SimplicialComplex,
) -> Result<(CsrMatrix, CsrMatrix), AnalysisError> {
    p1_oracle_with(complex, |s| s.iter().map(|&v| coordinates[v].clone()).collect())
}

/// Same, with per-simplex coordinates (e.g. unwrapped across a periodic
/// boundary). `chart(simplex)` returns one point per vertex of the simplex.
pub fn p1_oracle_with(
    complex: &SimplicialComplex,
    mut chart: impl FnMut(&[usize]) -> Vec<Vec<f64>>,
) -> Result<(CsrMatrix, CsrMatrix), AnalysisError> {
    let n = complex.dimension();
    let mut mass = Vec::new();
    let mut stiffness = Vec::new();
    for s in complex.simplices() {
        let pts = chart(s);
        if let Some(p) = pts.iter().find(|p| p.len() != n) {
            return Err(AnalysisError::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        // columns are edge vectors from the first vertex
        let jac = DMatrix::from_fn(n, n, |r, c| pts[c + 1][r] - pts[0][r]);
        let det = jac.determinant();
        let volume = det.abs() / (1..=n).map(|k| k as f64).product::<f64>();
        let inv = jac
            .try_inverse()
            .filter(|_| det != 0.0)
            .ok_or_else(|| AnalysisError::DegenerateSimplex(s.clone()))?;

        // ∇φ_k for k ≥ 1 is row k-1 of the inverse; ∇φ_0 = −Σ ∇φ_k
        let mut grads = DMatrix::zeros(n + 1, n);
        for k in 0..n {
            for d in 0..n {
                grads[(k + 1, d)] = inv[(k, d)];
                grads[(0, d)] -= inv[(k, d)];
            }
        }
        let quad = volume / ((n + 1) * (n + 2)) as f64;
        for (a, &i) in s.iter().enumerate() {
            for (b, &j) in s.iter().enumerate() {
                mass.push((i, j, if a == b { 2.0 * quad } else { quad }));
                let dot: f64 = (0..n).map(|d| grads[(a, d)] * grads[(b, d)]).sum();
                stiffness.push((i, j, volume * dot));
            }
        }
    }
    let nv = complex.num_vertices();
    Ok((
        CsrMatrix::from_triplets(nv, &mass),
        CsrMatrix::from_triplets(nv, &stiffness),
    ))
}
