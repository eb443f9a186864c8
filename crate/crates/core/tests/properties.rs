mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use trispec::analysis::p1_oracle;
use trispec::complex::SimplicialComplex;
use trispec::io::{parse_mesh, LoadedMesh, MeshFile};
use trispec::{assemble, solve_dense, MetricComplex};

use common::{dist, metric_from_coords, permutation, random_planar, rel_matrix_gap, rng};

fn simplex_coords(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), n + 1)
}

fn coordinate_volume(pts: &[Vec<f64>]) -> f64 {
    let n = pts.len() - 1;
    let j = DMatrix::from_fn(n, n, |r, c| pts[c + 1][r] - pts[0][r]);
    j.determinant().abs() / (1..=n).product::<usize>() as f64
}

/// Volume from squared distances via the bordered Cayley–Menger determinant.
fn cayley_menger_volume(pts: &[Vec<f64>]) -> f64 {
    let n = pts.len() - 1;
    let cm = DMatrix::from_fn(n + 2, n + 2, |r, c| match (r, c) {
        (0, 0) => 0.0,
        (0, _) | (_, 0) => 1.0,
        _ => dist(&pts[r - 1], &pts[c - 1]).powi(2),
    });
    let fact = (1..=n).product::<usize>() as f64;
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let v2 = sign * cm.determinant() / (2f64.powi(n as i32) * fact * fact);
    v2.max(0.0).sqrt()
}

fn single_simplex(pts: &[Vec<f64>]) -> MetricComplex {
    let n = pts.len() - 1;
    let c = SimplicialComplex::new(n, n + 1, vec![(0..=n).collect()]).unwrap();
    metric_from_coords(pts, c)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn gram_matches_coordinate_gram(n in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let pts: Vec<Vec<f64>> = (0..=n)
            .map(|_| (0..n).map(|_| rand::Rng::gen_range(&mut r, -1.0..1.0)).collect())
            .collect();
        let mc = single_simplex(&pts);
        let simplex: Vec<usize> = (0..=n).collect();
        for base in 0..=n {
            let g = mc.gram_matrix(&simplex, base).unwrap();
            let others: Vec<usize> = (0..=n).filter(|&v| v != base).collect();
            for (l, &a) in others.iter().enumerate() {
                for (m, &b) in others.iter().enumerate() {
                    let dot: f64 = (0..n)
                        .map(|d| (pts[a][d] - pts[base][d]) * (pts[b][d] - pts[base][d]))
                        .sum();
                    prop_assert!((g[(l, m)] - dot).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn volume_agrees_with_coordinates_and_cayley_menger(pts in (1usize..4).prop_flat_map(simplex_coords)) {
        let n = pts.len() - 1;
        let v = coordinate_volume(&pts);
        prop_assume!(v > 1e-3);
        let mc = single_simplex(&pts);
        let fact = (1..=n).product::<usize>() as f64;
        let from_lengths = mc.simplex_volume_factor(&(0..=n).collect::<Vec<_>>()).unwrap() / fact;
        prop_assert!((from_lengths - v).abs() < 1e-10 * v.max(1.0));
        prop_assert!((cayley_menger_volume(&pts) - v).abs() < 1e-9 * v.max(1.0));
    }

    #[test]
    fn gram_determinant_is_base_independent(pts in (1usize..4).prop_flat_map(simplex_coords)) {
        let n = pts.len() - 1;
        prop_assume!(coordinate_volume(&pts) > 1e-3);
        let mc = single_simplex(&pts);
        let s: Vec<usize> = (0..=n).collect();
        let g0 = mc.gram_matrix(&s, 0).unwrap();
        let d0 = g0.determinant();
        // rounding in a determinant is relative to the Hadamard bound
        let hadamard: f64 = g0.diagonal().iter().product();
        for base in 1..=n {
            let d = mc.gram_matrix(&s, base).unwrap().determinant();
            prop_assert!((d - d0).abs() < 1e-12 * hadamard.max(d0));
        }
    }

    #[test]
    fn forms_match_coordinate_oracle(seed in any::<u64>(), nx in 2usize..6, ny in 2usize..6) {
        let (coords, complex) = random_planar(&mut rng(seed), nx, ny);
        let (m, q) = p1_oracle(&coords, &complex).unwrap();
        let fp = assemble(&metric_from_coords(&coords, complex)).unwrap();
        prop_assert!(rel_matrix_gap(&fp.mass, &m) < 1e-10);
        prop_assert!(rel_matrix_gap(&fp.stiffness, &q) < 1e-10);
    }

    #[test]
    fn structural_invariants(seed in any::<u64>(), nx in 2usize..6, ny in 2usize..6) {
        let (coords, complex) = random_planar(&mut rng(seed), nx, ny);
        let fp = assemble(&metric_from_coords(&coords, complex)).unwrap();
        let nv = fp.num_vertices();
        let scale = fp.stiffness.max_abs();
        prop_assert!(fp.stiffness.mul_vec(&vec![1.0; nv]).iter().all(|v| v.abs() < 1e-12 * scale));
        prop_assert!(fp.mass.is_symmetric(0.0));
        prop_assert!(fp.stiffness.is_symmetric(0.0));
        prop_assert!(fp.mass.to_dense().cholesky().is_some());
        let q_min = fp.stiffness.to_dense().symmetric_eigenvalues().min();
        prop_assert!(q_min > -1e-12 * scale);
    }

    #[test]
    fn scale_laws(seed in any::<u64>(), c in 0.1f64..10.0) {
        let (coords, complex) = random_planar(&mut rng(seed), 4, 3);
        let mc = metric_from_coords(&coords, complex);
        let a = assemble(&mc).unwrap();
        let b = assemble(&mc.scaled(c).unwrap()).unwrap();
        // n = 2: mass scales by c², stiffness is scale invariant
        prop_assert!(rel_matrix_gap(&b.mass, &a.mass.scaled(c * c)) < 1e-10);
        prop_assert!(rel_matrix_gap(&b.stiffness, &a.stiffness) < 1e-10);
        let (ea, eb) = (solve_dense(&a, 6).unwrap(), solve_dense(&b, 6).unwrap());
        for (x, y) in ea.eigenvalues.iter().zip(&eb.eigenvalues).skip(1) {
            prop_assert!((y * c * c - x).abs() < 1e-10 * x);
        }
    }

    #[test]
    fn permutation_equivariance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (coords, complex) = random_planar(&mut r, 4, 4);
        let mc = metric_from_coords(&coords, complex);
        let perm = permutation(&mut r, mc.num_vertices());
        let a = assemble(&mc).unwrap();
        let b = assemble(&mc.relabeled(&perm)).unwrap();
        prop_assert!(rel_matrix_gap(&b.mass, &a.mass.permuted(&perm)) < 1e-10);
        prop_assert!(rel_matrix_gap(&b.stiffness, &a.stiffness.permuted(&perm)) < 1e-10);
        let (ea, eb) = (solve_dense(&a, 8).unwrap(), solve_dense(&b, 8).unwrap());
        for (x, y) in ea.eigenvalues.iter().zip(&eb.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-10 * x.abs().max(1.0));
        }
    }

    #[test]
    fn mesh_json_round_trip(seed in any::<u64>(), nx in 2usize..5) {
        let (coords, complex) = random_planar(&mut rng(seed), nx, 3);
        let mc = metric_from_coords(&coords, complex);
        let file = MeshFile::from_metric(&mc);
        let text = file.to_json();
        prop_assert_eq!(&serde_json::from_str::<MeshFile>(&text).unwrap(), &file);
        let LoadedMesh::Metric(back) = parse_mesh(&text).unwrap() else {
            panic!("no positions were written");
        };
        prop_assert_eq!(back, mc);
    }
}
