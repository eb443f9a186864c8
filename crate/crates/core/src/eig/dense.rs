use nalgebra::{DMatrix, SymmetricEigen};

use super::{SolverError, SolverMethod, SpectralResult, DENSE_THRESHOLD};
use crate::assembly::FormPair;

/// Lowest `num_eigs` eigenpairs (all of them if `num_eigs >= N`) through
/// `M = LLᵀ` and the symmetric eigenproblem of `L⁻¹ Q L⁻ᵀ`.
pub fn solve_dense(fp: &FormPair, num_eigs: usize) -> Result<SpectralResult, SolverError> {
    let n = fp.num_vertices();
    if n > DENSE_THRESHOLD {
        return Err(SolverError::DenseTooLarge {
            n,
            threshold: DENSE_THRESHOLD,
        });
    }
    let (values, vectors) = dense_generalized(&fp.stiffness.to_dense(), &fp.mass.to_dense())
        .ok_or(SolverError::MassNotPositiveDefinite)?;
    let k = num_eigs.min(n);
    let eigenvectors = (0..k).map(|i| vectors.column(i).iter().copied().collect()).collect();
    Ok(SpectralResult::new(
        fp,
        values[..k].to_vec(),
        eigenvectors,
        SolverMethod::Dense,
        1,
        0.0,
    ))
}

/// Full generalized eigendecomposition of a symmetric pencil `(a, b)` with
/// `b` positive definite. Eigenvalues ascending, eigenvectors `b`-orthonormal
/// in the matching columns. `None` if `b` is not positive definite.
pub(crate) fn dense_generalized(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
) -> Option<(Vec<f64>, DMatrix<f64>)> {
    let l = b.clone().cholesky()?.unpack();
    let x = l.solve_lower_triangular(a)?;
    let c = l.solve_lower_triangular(&x.transpose())?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let w = DMatrix::from_fn(a.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    let v = l.transpose().solve_upper_triangular(&w)?;
    Some((values, v))
}
