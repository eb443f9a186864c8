//! Shared fixtures for the benchmarks.

use trispec::manifolds::{generate_sphere_mesh, generate_torus_mesh};
use trispec::{assemble, FormPair, VertexedMesh};

pub fn torus(grid: usize) -> VertexedMesh {
    let tau = std::f64::consts::TAU;
    generate_torus_mesh([tau, tau], grid, grid).expect("grid is at least 3")
}

pub fn sphere(level: u32) -> VertexedMesh {
    generate_sphere_mesh(1.0, level)
}

pub fn forms(mesh: &VertexedMesh) -> FormPair {
    assemble(&mesh.metric).expect("generated meshes are nondegenerate")
}
