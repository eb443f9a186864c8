use std::f64::consts::PI;

use super::{ManifoldError, ModelManifold, VertexedMesh};
use crate::complex::SimplicialComplex;

/// Frequencies `(j, k) ≥ 0` of the flat-torus eigenfunctions built from
/// `u = 2πjx/a` and `v = 2πky/b`.
///
/// The real basis attached to a mode is, in member order:
/// - `(0, 0)`: the constant `1/√(ab)`;
/// - `(j, 0)`: `√(2/ab)·cos u`, `√(2/ab)·sin u`;
/// - `(0, k)`: `√(2/ab)·cos v`, `√(2/ab)·sin v`;
/// - otherwise `2/√(ab)` times `cos u cos v`, `cos u sin v`, `sin u cos v`,
///   `sin u sin v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TorusMode {
    pub j: u64,
    pub k: u64,
}

impl TorusMode {
    pub fn multiplicity(&self) -> usize {
        match (self.j, self.k) {
            (0, 0) => 1,
            (_, 0) | (0, _) => 2,
            _ => 4,
        }
    }

    pub fn eigenvalue(&self, [a, b]: [f64; 2]) -> f64 {
        (2.0 * PI * self.j as f64 / a).powi(2) + (2.0 * PI * self.k as f64 / b).powi(2)
    }

    pub(crate) fn evaluate(&self, [a, b]: [f64; 2], member: usize, p: &[f64]) -> f64 {
        let u = 2.0 * PI * self.j as f64 * p[0] / a;
        let v = 2.0 * PI * self.k as f64 * p[1] / b;
        let area = a * b;
        match (self.j, self.k) {
            (0, 0) => 1.0 / area.sqrt(),
            (_, 0) => (2.0 / area).sqrt() * if member == 0 { u.cos() } else { u.sin() },
            (0, _) => (2.0 / area).sqrt() * if member == 0 { v.cos() } else { v.sin() },
            _ => {
                let fu = if member < 2 { u.cos() } else { u.sin() };
                let fv = if member.is_multiple_of(2) { v.cos() } else { v.sin() };
                2.0 / area.sqrt() * fu * fv
            }
        }
    }
}

/// The first `count` distinct eigenvalues of the torus with periods
/// `(a, b)`, each with the modes realizing it (sorted). Values that agree to
/// a relative `1e-12` are merged.
pub fn torus_modes(periods: [f64; 2], count: usize) -> Vec<(f64, Vec<TorusMode>)> {
    let [a, b] = periods;
    let step = (2.0 * PI / a).min(2.0 * PI / b).powi(2);
    let mut bound = step * (count.max(1) as f64);
    loop {
        // every mode with eigenvalue ≤ bound
        let jmax = (bound.sqrt() * a / (2.0 * PI)).floor() as u64;
        let kmax = (bound.sqrt() * b / (2.0 * PI)).floor() as u64;
        let mut modes: Vec<(f64, TorusMode)> = (0..=jmax)
            .flat_map(|j| (0..=kmax).map(move |k| TorusMode { j, k }))
            .map(|m| (m.eigenvalue(periods), m))
            .filter(|(v, _)| *v <= bound)
            .collect();
        modes.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

        let mut clusters: Vec<(f64, Vec<TorusMode>)> = Vec::new();
        for (v, m) in modes {
            match clusters.last_mut() {
                Some((value, members)) if (v - *value).abs() <= 1e-12 * v.abs().max(1e-300) => {
                    members.push(m)
                }
                _ => clusters.push((v, vec![m])),
            }
        }
        // the last cluster may be incomplete only if it sits at the bound
        if clusters.len() > count {
            clusters.truncate(count);
            for (_, members) in clusters.iter_mut() {
                members.sort();
            }
            return clusters;
        }
        bound *= 2.0;
    }
}

/// `m × k` grid on `[0,a) × [0,b)`, each cell cut along its lower-left to
/// upper-right diagonal. Vertex `(i, j)` has index `j·m + i`.
pub fn generate_torus_mesh(
    periods: [f64; 2],
    m: usize,
    k: usize,
) -> Result<VertexedMesh, ManifoldError> {
    if m < 3 || k < 3 {
        return Err(ManifoldError::GridTooCoarse { m, k });
    }
    let manifold = ModelManifold::FlatTorus { periods };
    manifold.validate()?;
    let [a, b] = periods;
    let index = |i: usize, j: usize| (j % k) * m + (i % m);
    let mut positions = Vec::with_capacity(m * k);
    for j in 0..k {
        for i in 0..m {
            positions.push(vec![a * i as f64 / m as f64, b * j as f64 / k as f64]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * m * k);
    for j in 0..k {
        for i in 0..m {
            let v00 = index(i, j);
            let v10 = index(i + 1, j);
            let v01 = index(i, j + 1);
            let v11 = index(i + 1, j + 1);
            triangles.push(vec![v00, v10, v11]);
            triangles.push(vec![v00, v11, v01]);
        }
    }
    let complex = SimplicialComplex::new(2, m * k, triangles)?;
    Ok(VertexedMesh::new(manifold, complex, positions))
}
