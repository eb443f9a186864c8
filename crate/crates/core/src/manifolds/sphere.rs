use std::collections::HashMap;
use std::f64::consts::PI;

use super::{ModelManifold, VertexedMesh};
use crate::complex::SimplicialComplex;

/// Unit icosahedron: 12 vertices `(0, ±1, ±φ)` and cyclic permutations,
/// normalized, and the 20 triangles of mutually adjacent vertices.
pub fn icosahedron() -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices = Vec::with_capacity(12);
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            vertices.push([0.0, s1, s2 * phi]);
            vertices.push([s1, s2 * phi, 0.0]);
            vertices.push([s2 * phi, 0.0, s1]);
        }
    }
    for v in vertices.iter_mut() {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    // adjacent vertices have dot product 1/√5, all others are at most 0
    let adjacent = |i: usize, j: usize| {
        let (a, b) = (vertices[i], vertices[j]);
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] > 0.4
    };
    let mut faces = Vec::with_capacity(20);
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                if adjacent(i, j) && adjacent(j, k) && adjacent(i, k) {
                    faces.push([i, j, k]);
                }
            }
        }
    }
    (vertices, faces)
}

/// Icosahedral geodesic sphere: the icosahedron subdivided `level` times by
/// edge midpoints pushed radially onto the sphere. `10·4^level + 2` vertices.
pub fn generate_sphere_mesh(radius: f64, level: u32) -> VertexedMesh {
    let (mut vertices, mut faces) = icosahedron();
    for _ in 0..level {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<[f64; 3]>| {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                let m = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
                let norm = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                vertices.push([m[0] / norm, m[1] / norm, m[2] / norm]);
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * faces.len());
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    let complex = SimplicialComplex::new(2, vertices.len(), faces.iter().map(|f| f.to_vec()))
        .expect("subdivided icosahedron is a valid complex");
    let positions = vertices
        .iter()
        .map(|v| v.iter().map(|x| x * radius).collect())
        .collect();
    VertexedMesh::new(ModelManifold::Sphere { radius }, complex, positions)
}

/// Real spherical harmonic `Y_l^m` on the unit sphere, evaluated at the
/// direction of `point` (any nonzero length). `m > 0` uses `cos(mφ)`,
/// `m < 0` uses `sin(|m|φ)`; the family is orthonormal in `L²(S²)`.
pub fn real_spherical_harmonic(l: usize, m: i64, point: &[f64]) -> f64 {
    let norm = (point[0].powi(2) + point[1].powi(2) + point[2].powi(2)).sqrt();
    let (x, y, z) = (point[0] / norm, point[1] / norm, point[2] / norm);
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "|m| = {am} exceeds l = {l}");

    // P_l^|m|(z) = sin^|m|(θ) · poly(z); sin^|m|(θ)·(cos, sin)(|m|φ) = (Re, Im)(x + iy)^|m|
    let mut q_prev = (1..=am).map(|k| (2 * k - 1) as f64).product::<f64>();
    let mut poly = q_prev;
    if l > am {
        let mut q = (2 * am + 1) as f64 * z * q_prev;
        for ll in am + 2..=l {
            let next = ((2 * ll - 1) as f64 * z * q - (ll + am - 1) as f64 * q_prev)
                / (ll - am) as f64;
            q_prev = q;
            q = next;
        }
        poly = q;
    }
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..am {
        (re, im) = (re * x - im * y, re * y + im * x);
    }
    let ratio: f64 = (l - am + 1..=l + am).map(|k| 1.0 / k as f64).product();
    let mut n = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    if am > 0 {
        n *= 2f64.sqrt();
    }
    let angular = match m.signum() {
        1 => re,
        -1 => im,
        _ => 1.0,
    };
    n * poly * angular
}
