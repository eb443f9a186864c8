//! Spectra of discrete Laplace operators built from the edge lengths of
//! geodesic triangulations.
//!
//! The pipeline is: a [`SimplicialComplex`] plus edge lengths
//! ([`MetricComplex`]) is assembled into a mass/stiffness [`FormPair`], whose
//! generalized eigenproblem `Q v = λ M v` is solved by [`eig`]. The
//! [`manifolds`] module supplies model surfaces with known spectra and
//! triangulations of them; [`analysis`] compares the two.

pub mod analysis;
pub mod assembly;
pub mod complex;
pub mod eig;
pub mod io;
pub mod manifolds;
pub mod metric;
pub mod sparse;

pub use assembly::{assemble, assemble_mass, assemble_stiffness, FormPair};
pub use complex::{check_closed_pseudomanifold, enumerate_faces, FaceIndex, SimplicialComplex};
pub use eig::{cluster_eigenvalues, solve_dense, solve_iterative, SpectralResult};
pub use manifolds::{ModelManifold, VertexedMesh};
pub use metric::{mesh_stats, validate_metric, MeshStats, MetricComplex};
pub use sparse::CsrMatrix;
