mod common;

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use trispec::complex::SimplicialComplex;
use trispec::eig::{solve_iterative_with, IterativeOptions, SolverError, SolverMethod};
use trispec::manifolds::{generate_sphere_mesh, generate_torus_mesh};
use trispec::{assemble, solve_dense, solve_iterative, FormPair, MetricComplex, SpectralResult};

use common::{metric_from_coords, random_planar, rng};

/// Cyclic Jacobi rotations on a dense symmetric matrix; eigenvalues ascending.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    d.sort_by(f64::total_cmp);
    d
}

/// Generalized eigenvalues via a hand-written Cholesky `M = LLᵀ` and Jacobi on
/// `L⁻¹ Q L⁻ᵀ`.
fn reference_spectrum(fp: &FormPair) -> Vec<f64> {
    let m = fp.mass.to_dense();
    let q = fp.stiffness.to_dense();
    let n = m.nrows();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][i] = (m[(i, i)] - s).sqrt();
            } else {
                l[i][j] = (m[(i, j)] - s) / l[j][j];
            }
        }
    }
    // X = L⁻¹ Q, then C = L⁻¹ Xᵀ = L⁻¹ Q L⁻ᵀ
    let forward = |b: Vec<f64>| {
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[i] = (b[i] - (0..i).map(|k| l[i][k] * x[k]).sum::<f64>()) / l[i][i];
        }
        x
    };
    let x: Vec<Vec<f64>> = (0..n).map(|c| forward((0..n).map(|r| q[(r, c)]).collect())).collect();
    // x[c] is column c of L⁻¹Q, so column c of (L⁻¹Q)ᵀ is row c of it
    let cmat: Vec<Vec<f64>> = (0..n)
        .map(|c| forward((0..n).map(|j| x[j][c]).collect()))
        .collect();
    let sym: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (cmat[i][j] + cmat[j][i])).collect())
        .collect();
    jacobi_eigenvalues(sym)
}

fn assert_contracts(fp: &FormPair, r: &SpectralResult) {
    assert!(r.solver_info.max_residual < 1e-9, "{}", r.solver_info.max_residual);
    for (i, vi) in r.eigenvectors.iter().enumerate() {
        for (j, vj) in r.eigenvectors.iter().enumerate() {
            let g = fp.mass.bilinear(vi, vj);
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((g - e).abs() < 1e-9, "({i}, {j}): {g}");
        }
        let first_max = vi
            .iter()
            .copied()
            .reduce(|a, b| if b.abs() > a.abs() { b } else { a })
            .unwrap();
        assert!(first_max > 0.0);
    }
    assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn tetrahedron_surface_has_triple_eigenvalue_16() {
    let c = SimplicialComplex::new(2, 4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
    let fp = assemble(&MetricComplex::from_fn(c, |_, _| 1.0)).unwrap();
    let r = solve_dense(&fp, 4).unwrap();
    assert!(r.eigenvalues[0].abs() < 1e-12);
    for l in &r.eigenvalues[1..] {
        assert!((l - 16.0).abs() < 1e-12, "{l}");
    }
    assert_eq!(r.clusters, vec![0..1, 1..4]);
    assert_contracts(&fp, &r);
}

#[test]
fn uniform_circle_matches_closed_form() {
    let n = 24;
    let h = 0.3;
    let c = SimplicialComplex::new(1, n, (0..n).map(|i| vec![i, (i + 1) % n])).unwrap();
    let fp = assemble(&MetricComplex::from_fn(c, |_, _| h)).unwrap();
    let r = solve_dense(&fp, n).unwrap();
    let mut expected: Vec<f64> = (0..n)
        .map(|k| {
            let cs = (TAU * k as f64 / n as f64).cos();
            6.0 * (1.0 - cs) / (h * h * (2.0 + cs))
        })
        .collect();
    expected.sort_by(f64::total_cmp);
    for (a, b) in r.eigenvalues.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-10 * b.max(1.0), "{a} vs {b}");
    }
    // continuum limit: λ_1 ≈ (2π/L)²
    let l = n as f64 * h;
    assert!((r.eigenvalues[1] / (TAU / l).powi(2) - 1.0).abs() < 0.01);
}

#[test]
fn dense_agrees_with_independent_jacobi() {
    let mut meshes = vec![assemble(&generate_torus_mesh([1.0, 1.7], 5, 6).unwrap().metric).unwrap()];
    for seed in 0..3 {
        let (coords, complex) = random_planar(&mut rng(seed), 5, 4);
        meshes.push(assemble(&metric_from_coords(&coords, complex)).unwrap());
    }
    for fp in &meshes {
        let n = fp.num_vertices();
        let r = solve_dense(fp, n).unwrap();
        let reference = reference_spectrum(fp);
        let top = reference[n - 1];
        for (a, b) in r.eigenvalues.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-10 * top, "{a} vs {b}");
        }
        assert_contracts(fp, &r);
    }
}

#[test]
fn iterative_agrees_with_dense() {
    for fp in [
        assemble(&generate_sphere_mesh(1.0, 2).metric).unwrap(),
        assemble(&generate_torus_mesh([TAU, 3.0], 14, 12).unwrap().metric).unwrap(),
    ] {
        let k = 12;
        let d = solve_dense(&fp, k).unwrap();
        let it = solve_iterative(&fp, k, 0.0).unwrap();
        assert_eq!(it.solver_info.method, SolverMethod::ShiftInvertSubspace);
        assert_contracts(&fp, &it);
        for (a, b) in it.eigenvalues.iter().zip(&d.eigenvalues) {
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{a} vs {b}");
        }
        // each iterative vector lies in the span of its dense cluster
        for cluster in &d.clusters {
            if cluster.end > k || cluster.end == k && k < fp.num_vertices() {
                continue;
            }
            for v in &it.eigenvectors[cluster.clone()] {
                let mv = fp.mass.mul_vec(v);
                let captured: f64 = d.eigenvectors[cluster.clone()]
                    .iter()
                    .map(|f| f.iter().zip(&mv).map(|(a, b)| a * b).sum::<f64>().powi(2))
                    .sum();
                assert!((captured - 1.0).abs() < 1e-8, "{captured}");
            }
        }
    }
}

#[test]
fn iterative_with_guard_and_seed_is_deterministic() {
    let fp = assemble(&generate_sphere_mesh(1.0, 2).metric).unwrap();
    let opts = IterativeOptions {
        guard: Some(6),
        seed: 7,
        ..IterativeOptions::default()
    };
    let a = solve_iterative_with(&fp, 9, 0.0, &opts).unwrap();
    let b = solve_iterative_with(&fp, 9, 0.0, &opts).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.clusters, vec![0..1, 1..4, 4..9]);
}

#[test]
fn shift_inside_spectrum_is_rejected() {
    let fp = assemble(&generate_sphere_mesh(1.0, 2).metric).unwrap();
    assert!(matches!(
        solve_iterative(&fp, 4, 3.0),
        Err(SolverError::ShiftNotBelowSpectrum { .. })
    ));
}

#[test]
fn indefinite_mass_is_rejected() {
    let fp = assemble(&generate_torus_mesh([1.0, 1.0], 4, 4).unwrap().metric).unwrap();
    let broken = FormPair::from_matrices(fp.mass.scaled(-1.0), fp.stiffness.clone(), fp.stats);
    assert_eq!(solve_dense(&broken, 3).unwrap_err(), SolverError::MassNotPositiveDefinite);
    let big = FormPair::from_matrices(
        trispec::CsrMatrix::from_dense(&DMatrix::identity(3001, 3001)),
        trispec::CsrMatrix::from_dense(&DMatrix::identity(3001, 3001)),
        fp.stats,
    );
    assert!(matches!(solve_dense(&big, 1), Err(SolverError::DenseTooLarge { .. })));
}

#[test]
fn sphere_first_nonzero_eigenvalue_approaches_two() {
    let fp = assemble(&generate_sphere_mesh(1.0, 3).metric).unwrap();
    let r = solve_iterative(&fp, 4, 0.0).unwrap();
    assert!((r.eigenvalues[1] / 2.0 - 1.0).abs() < 0.01);
    assert!((PI * 4.0 - fp.mass.quadratic(&vec![1.0; fp.num_vertices()])).abs() < 0.05);
}
