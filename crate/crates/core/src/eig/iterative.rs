use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::envelope::EnvelopeCholesky;
use super::{solve_dense, SolverError, SolverMethod, SpectralResult, DENSE_THRESHOLD};
use crate::assembly::FormPair;

#[derive(Debug, Clone, PartialEq)]
pub struct IterativeOptions {
    /// Target relative residual for every returned pair.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Guard vectors carried beyond the requested count; `None` picks
    /// `max(num_eigs, 10)`.
    pub guard: Option<usize>,
    pub seed: u64,
}

impl Default for IterativeOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 1000,
            guard: None,
            seed: 0x5eed,
        }
    }
}

/// Lowest `num_eigs` eigenpairs by shift-invert subspace iteration.
///
/// A shift of zero is replaced by `-1e-8 · tr(Q) / tr(M)`, which makes
/// `Q − σM` positive definite on closed meshes.
pub fn solve_iterative(
    fp: &FormPair,
    num_eigs: usize,
    shift: f64,
) -> Result<SpectralResult, SolverError> {
    solve_iterative_with(fp, num_eigs, shift, &IterativeOptions::default())
}

pub fn solve_iterative_with(
    fp: &FormPair,
    num_eigs: usize,
    shift: f64,
    opts: &IterativeOptions,
) -> Result<SpectralResult, SolverError> {
    let n = fp.num_vertices();
    if num_eigs == 0 {
        return Err(SolverError::InvalidRequest("num_eigs must be positive".into()));
    }
    let block = num_eigs + opts.guard.unwrap_or(num_eigs.max(10));
    if block >= n {
        if n <= DENSE_THRESHOLD {
            return solve_dense(fp, num_eigs);
        }
        return Err(SolverError::InvalidRequest(format!(
            "{num_eigs} eigenpairs plus guard vectors exceed the problem size {n}"
        )));
    }

    EnvelopeCholesky::factor(&fp.mass).ok_or(SolverError::MassNotPositiveDefinite)?;
    let sigma = if shift == 0.0 {
        -1e-8 * fp.stiffness.trace() / fp.mass.trace()
    } else {
        shift
    };
    let shifted = fp.stiffness.add_scaled(-sigma, &fp.mass);
    let factor = EnvelopeCholesky::factor(&shifted)
        .ok_or(SolverError::ShiftNotBelowSpectrum { shift: sigma })?;

    let q_norm = fp.stiffness.norm_inf();
    let m_norm = fp.mass.norm_inf();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis = DMatrix::from_fn(n, block, |_, _| rng.gen_range(-1.0..1.0));
    let mut worst = f64::INFINITY;

    for iteration in 1..=opts.max_iterations {
        let mb = fp.mass.mul_dense(&basis);
        let mut w = DMatrix::zeros(n, block);
        for c in 0..block {
            let x = factor.solve(mb.column(c).as_slice());
            w.column_mut(c).copy_from_slice(&x);
        }
        let mw = m_orthonormalize(&mut w, fp, &mut rng);
        let qw = fp.stiffness.mul_dense(&w);
        let h = w.transpose() * &qw;
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let y = DMatrix::from_fn(block, block, |r, c| eig.eigenvectors[(r, order[c])]);
        let theta: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

        basis = &w * &y;
        let qv = &qw * &y;
        let mv = mw * &y;
        worst = (0..num_eigs)
            .map(|i| {
                let r = (qv.column(i) - mv.column(i) * theta[i]).norm();
                let scale = (q_norm + theta[i].abs() * m_norm) * basis.column(i).norm();
                r / scale
            })
            .fold(0.0, f64::max);
        if worst <= opts.tolerance {
            let vectors = (0..num_eigs)
                .map(|i| basis.column(i).iter().copied().collect())
                .collect();
            return Ok(SpectralResult::new(
                fp,
                theta[..num_eigs].to_vec(),
                vectors,
                SolverMethod::ShiftInvertSubspace,
                iteration,
                sigma,
            ));
        }
    }
    Err(SolverError::ConvergenceFailure {
        max_iterations: opts.max_iterations,
        worst_residual: worst,
    })
}

/// Modified Gram–Schmidt in the `M` inner product, applied twice. Columns
/// that collapse are replaced by fresh random vectors. Returns `M · w`.
fn m_orthonormalize(w: &mut DMatrix<f64>, fp: &FormPair, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let n = w.nrows();
    for c in 0..w.ncols() {
        let norm = w.column(c).norm();
        if norm > 0.0 {
            w.column_mut(c).unscale_mut(norm);
        }
    }
    let mut mw = fp.mass.mul_dense(w);
    for j in 0..w.ncols() {
        let mut attempts = 0;
        loop {
            let before = w.column(j).dot(&mw.column(j));
            for _ in 0..2 {
                for i in 0..j {
                    let c = w.column(j).dot(&mw.column(i));
                    let (wi, mwi) = (w.column(i).clone_owned(), mw.column(i).clone_owned());
                    w.column_mut(j).axpy(-c, &wi, 1.0);
                    mw.column_mut(j).axpy(-c, &mwi, 1.0);
                }
            }
            let norm2 = w.column(j).dot(&mw.column(j));
            if norm2 > 1e-20 * before || attempts > 5 {
                let norm = norm2.max(f64::MIN_POSITIVE).sqrt();
                w.column_mut(j).unscale_mut(norm);
                mw.column_mut(j).unscale_mut(norm);
                break;
            }
            attempts += 1;
            for r in 0..n {
                w[(r, j)] = rng.gen_range(-1.0..1.0);
            }
            let fresh = fp.mass.mul_vec(w.column(j).as_slice());
            mw.column_mut(j).copy_from_slice(&fresh);
        }
    }
    mw
}
