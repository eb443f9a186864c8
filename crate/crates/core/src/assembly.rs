//! Discrete L² (mass) and Dirichlet (stiffness) forms.
//!
//! For a vertex function `y`, with `G_σ` the Gram matrix of σ at its lowest
//! vertex and `v_σ = sqrt(det G_σ)`:
//!
//! ```text
//! |y|²  = 2/(n+2)! Σ_{i≤j} y_i y_j Σ_{σ ∋ i,j} v_σ
//! q(y)  = 1/n!     Σ_σ v_σ Σ_{k,l≥1} (G_σ⁻¹)_{kl} (y_k − y_0)(y_l − y_0)
//! ```
//!
//! The stored mass matrix is the symmetric matrix of the first form, so its
//! off-diagonal entries carry half the pair coefficient. On a flat complex
//! these are exactly the P1 finite-element mass and stiffness matrices.

use nalgebra::DMatrix;

use crate::metric::{factorial, MeshStats, MetricComplex, MetricError};
use crate::sparse::CsrMatrix;

/// Mass and stiffness matrices of one metric complex.
#[derive(Debug, Clone, PartialEq)]
pub struct FormPair {
    pub mass: CsrMatrix,
    pub stiffness: CsrMatrix,
    pub stats: MeshStats,
}

impl FormPair {
    /// Pairs externally built matrices (e.g. from coordinates) with statistics.
    pub fn from_matrices(mass: CsrMatrix, stiffness: CsrMatrix, stats: MeshStats) -> Self {
        Self {
            mass,
            stiffness,
            stats,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.mass.nrows()
    }
}

/// Per-simplex mass matrix: `2c` on the diagonal, `c` off it, with
/// `c = v_σ / (n+2)!`.
fn local_mass(n: usize, volume_factor: f64) -> DMatrix<f64> {
    let c = volume_factor / factorial(n + 2);
    DMatrix::from_fn(n + 1, n + 1, |k, l| if k == l { 2.0 * c } else { c })
}

/// Per-simplex stiffness matrix `v_σ/n! · Eᵀ G⁻¹ E` with `E = [−1 | I]`.
fn local_stiffness(
    mc: &MetricComplex,
    simplex: &[usize],
    volume_factor: f64,
) -> Result<DMatrix<f64>, MetricError> {
    let n = simplex.len() - 1;
    let gram = mc.gram_matrix(simplex, 0)?;
    let inv = gram
        .cholesky()
        .map(|c| c.inverse())
        .ok_or_else(|| MetricError::SingularGram {
            simplex: simplex.to_vec(),
        })?;
    let scale = volume_factor / factorial(n);
    let mut k = DMatrix::zeros(n + 1, n + 1);
    for a in 0..n {
        for b in 0..n {
            k[(a + 1, b + 1)] = scale * inv[(a.min(b), a.max(b))];
        }
    }
    for a in 1..=n {
        let row: f64 = (1..=n).map(|b| k[(a, b)]).sum();
        k[(a, 0)] = -row;
        k[(0, a)] = -row;
    }
    k[(0, 0)] = (1..=n).map(|a| -k[(a, 0)]).sum();
    Ok(k)
}

fn scatter(simplex: &[usize], local: &DMatrix<f64>, out: &mut Vec<(usize, usize, f64)>) {
    for (a, &i) in simplex.iter().enumerate() {
        for (b, &j) in simplex.iter().enumerate() {
            out.push((i, j, local[(a, b)]));
        }
    }
}

fn volume_factors(mc: &MetricComplex) -> Result<Vec<f64>, MetricError> {
    mc.complex()
        .simplices()
        .iter()
        .map(|s| mc.simplex_volume_factor(s))
        .collect()
}

pub fn assemble_mass(mc: &MetricComplex) -> Result<CsrMatrix, MetricError> {
    let n = mc.dimension();
    let mut triplets = Vec::new();
    for (s, vf) in mc.complex().simplices().iter().zip(volume_factors(mc)?) {
        scatter(s, &local_mass(n, vf), &mut triplets);
    }
    Ok(CsrMatrix::from_triplets(mc.num_vertices(), &triplets))
}

pub fn assemble_stiffness(mc: &MetricComplex) -> Result<CsrMatrix, MetricError> {
    let mut triplets = Vec::new();
    for (s, vf) in mc.complex().simplices().iter().zip(volume_factors(mc)?) {
        scatter(s, &local_stiffness(mc, s, vf)?, &mut triplets);
    }
    Ok(CsrMatrix::from_triplets(mc.num_vertices(), &triplets))
}

/// Both forms plus the mesh statistics at assembly time. Contributions are
/// accumulated in lexicographic simplex order, so output is reproducible.
pub fn assemble(mc: &MetricComplex) -> Result<FormPair, MetricError> {
    let stats = mc.mesh_stats()?;
    Ok(FormPair {
        mass: assemble_mass(mc)?,
        stiffness: assemble_stiffness(mc)?,
        stats,
    })
}
