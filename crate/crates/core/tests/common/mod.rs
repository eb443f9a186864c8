#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trispec::complex::SimplicialComplex;
use trispec::MetricComplex;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dist(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// A planar triangulation of a jittered `nx × ny` point grid, each square cut
/// along a randomly chosen diagonal.
pub fn random_planar(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> (Vec<Vec<f64>>, SimplicialComplex) {
    let mut coords = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let jitter = |r: &mut ChaCha8Rng| r.gen_range(-0.25..0.25);
            coords.push(vec![i as f64 + jitter(rng), j as f64 + jitter(rng)]);
        }
    }
    let id = |i: usize, j: usize| j * nx + i;
    let mut tris = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            if rng.gen_bool(0.5) {
                tris.push(vec![a, b, d]);
                tris.push(vec![a, d, c]);
            } else {
                tris.push(vec![a, b, c]);
                tris.push(vec![b, d, c]);
            }
        }
    }
    let complex = SimplicialComplex::new(2, nx * ny, tris).unwrap();
    (coords, complex)
}

pub fn metric_from_coords(coords: &[Vec<f64>], complex: SimplicialComplex) -> MetricComplex {
    MetricComplex::from_fn(complex, |i, j| dist(&coords[i], &coords[j]))
}

/// A random permutation of `0..n` as `perm[old] = new`.
pub fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Largest entrywise relative gap `|a − b| / max(|b_ij|, 1e-6 · max|b|)`.
/// The floor keeps entries that vanish in exact arithmetic from dominating.
pub fn rel_matrix_gap(a: &trispec::CsrMatrix, b: &trispec::CsrMatrix) -> f64 {
    let (da, db) = (a.to_dense(), b.to_dense());
    let floor = 1e-6 * db.abs().max();
    da.iter()
        .zip(db.iter())
        .map(|(x, y)| (x - y).abs() / y.abs().max(floor))
        .fold(0.0, f64::max)
}
