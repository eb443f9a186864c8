//! File formats: mesh JSON, spectrum JSON, matrix exports and report output.
//!
//! All JSON is written by `serde_json` with a fixed field order and the
//! shortest round-trip representation of every float, so output is
//! byte-identical for identical input.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::eig::{cluster_eigenvalues, SolverInfo, SpectralResult, DEFAULT_REL_GAP};
use crate::manifolds::{ModelManifold, VertexedMesh};
use crate::metric::{validate_metric, MeshStats, MetricComplex, MetricError, DEGENERACY_TOL};
use crate::sparse::{CsrMatrix, Triplet};

pub const FORMAT_VERSION: &str = "1";

/// Largest accepted relative gap between a stored edge length and the
/// geodesic distance of its endpoints in a positioned mesh.
pub const POSITION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation failed: {message}")]
    Validation { message: String, details: Value },
}

impl IoError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Io { .. } => "io_error",
            Self::Parse { .. } => "parse_error",
            Self::Validation { .. } => "validation_error",
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self::Validation {
            message: message.into(),
            details: Value::Null,
        }
    }
}

fn parse_error(e: serde_json::Error) -> IoError {
    IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeLength {
    pub i: usize,
    pub j: usize,
    pub length: f64,
}

/// On-disk mesh. `positions` and `manifold` together make a [`VertexedMesh`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    pub format_version: String,
    pub dimension: usize,
    pub num_vertices: usize,
    pub top_simplices: Vec<Vec<usize>>,
    pub edge_lengths: Vec<EdgeLength>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<ModelManifold>,
}

impl MeshFile {
    pub fn from_metric(mc: &MetricComplex) -> Self {
        let c = mc.complex();
        Self {
            format_version: FORMAT_VERSION.into(),
            dimension: c.dimension(),
            num_vertices: c.num_vertices(),
            top_simplices: c.simplices().to_vec(),
            edge_lengths: mc
                .edge_lengths()
                .map(|(i, j, length)| EdgeLength { i, j, length })
                .collect(),
            positions: None,
            manifold: None,
        }
    }

    pub fn from_vertexed(mesh: &VertexedMesh) -> Self {
        Self {
            positions: Some(mesh.positions.clone()),
            manifold: Some(mesh.manifold),
            ..Self::from_metric(&mesh.metric)
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Result of [`load_mesh`].
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedMesh {
    Vertexed(VertexedMesh),
    Metric(MetricComplex),
}

impl LoadedMesh {
    pub fn metric(&self) -> &MetricComplex {
        match self {
            Self::Vertexed(m) => &m.metric,
            Self::Metric(m) => m,
        }
    }

    pub fn vertexed(&self) -> Option<&VertexedMesh> {
        match self {
            Self::Vertexed(m) => Some(m),
            Self::Metric(_) => None,
        }
    }
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<LoadedMesh, IoError> {
    parse_mesh(&read_text(path)?)
}

/// Parses and fully validates a mesh document.
pub fn parse_mesh(text: &str) -> Result<LoadedMesh, IoError> {
    let file: MeshFile = serde_json::from_str(text).map_err(parse_error)?;
    validate_mesh_file(file)
}

fn validate_mesh_file(file: MeshFile) -> Result<LoadedMesh, IoError> {
    if file.format_version != FORMAT_VERSION {
        return Err(IoError::validation(format!(
            "unsupported format_version {:?}",
            file.format_version
        )));
    }
    let complex = SimplicialComplex::new(file.dimension, file.num_vertices, file.top_simplices)
        .map_err(|e| IoError::validation(e.to_string()))?;

    let mut seen = std::collections::HashSet::new();
    for e in &file.edge_lengths {
        if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
            return Err(IoError::validation(format!("edge ({}, {}) listed twice", e.i, e.j)));
        }
    }
    let mc = MetricComplex::new(
        complex,
        file.edge_lengths.iter().map(|e| (e.i, e.j, e.length)),
    )
    .map_err(|e: MetricError| IoError::validation(e.to_string()))?;

    let report = validate_metric(&mc, DEGENERACY_TOL);
    if !report.is_valid() {
        return Err(IoError::Validation {
            message: format!("{} metric issue(s)", report.issues.len()),
            details: serde_json::to_value(&report).expect("report serializes"),
        });
    }

    match (file.positions, file.manifold) {
        (Some(positions), Some(manifold)) => {
            manifold
                .validate()
                .map_err(|e| IoError::validation(e.to_string()))?;
            if positions.len() != mc.num_vertices() {
                return Err(IoError::validation(format!(
                    "{} positions for {} vertices",
                    positions.len(),
                    mc.num_vertices()
                )));
            }
            if let Some(p) = positions.iter().find(|p| p.len() != manifold.point_dimension()) {
                return Err(IoError::validation(format!(
                    "position has {} coordinates, expected {}",
                    p.len(),
                    manifold.point_dimension()
                )));
            }
            let mesh = VertexedMesh {
                manifold,
                metric: mc,
                positions,
            };
            let deviation = mesh.max_edge_length_deviation();
            if deviation > POSITION_TOLERANCE {
                return Err(IoError::validation(format!(
                    "edge lengths deviate from geodesic distances by up to {deviation:e}"
                )));
            }
            Ok(LoadedMesh::Vertexed(mesh))
        }
        _ => Ok(LoadedMesh::Metric(mc)),
    }
}

pub fn save_mesh(path: impl AsRef<Path>, mesh: &MeshFile) -> Result<(), IoError> {
    write_text(path, &mesh.to_json())
}

/// Serialized eigen-decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub format_version: String,
    pub num_vertices: usize,
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<std::ops::Range<usize>>,
    pub solver: SolverInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

impl SpectrumFile {
    pub fn from_result(
        result: &SpectralResult,
        num_vertices: usize,
        mesh: Option<MeshStats>,
        with_vectors: bool,
    ) -> Self {
        Self {
            format_version: FORMAT_VERSION.into(),
            num_vertices,
            eigenvalues: result.eigenvalues.clone(),
            clusters: result.clusters.clone(),
            solver: result.solver_info.clone(),
            mesh,
            eigenvectors: with_vectors.then(|| result.eigenvectors.clone()),
        }
    }

    /// Rebuilds a [`SpectralResult`], recomputing clusters with the default gap.
    pub fn into_result(self) -> SpectralResult {
        SpectralResult {
            clusters: cluster_eigenvalues(&self.eigenvalues, DEFAULT_REL_GAP),
            eigenvalues: self.eigenvalues,
            eigenvectors: self.eigenvectors.unwrap_or_default(),
            solver_info: self.solver,
        }
    }
}

pub fn load_spectrum(path: impl AsRef<Path>) -> Result<SpectrumFile, IoError> {
    let file: SpectrumFile = serde_json::from_str(&read_text(path)?).map_err(parse_error)?;
    if file.format_version != FORMAT_VERSION {
        return Err(IoError::validation(format!(
            "unsupported format_version {:?}",
            file.format_version
        )));
    }
    if let Some(v) = file.eigenvectors.as_ref() {
        if v.len() != file.eigenvalues.len() || v.iter().any(|x| x.len() != file.num_vertices) {
            return Err(IoError::validation("eigenvector array has the wrong shape"));
        }
    }
    Ok(file)
}

#[derive(Serialize)]
struct TripletFile<'a> {
    n: usize,
    entries: &'a [Triplet],
}

/// Coordinate-triplet JSON: `{"n": N, "entries": [{"row", "col", "value"}]}`.
pub fn matrix_to_triplet_json(m: &CsrMatrix) -> String {
    let entries: Vec<Triplet> = m.triplets().collect();
    to_json(&TripletFile {
        n: m.nrows(),
        entries: &entries,
    })
}

pub fn matrix_to_matrix_market(m: &CsrMatrix) -> String {
    let mut buf = Vec::new();
    m.write_matrix_market(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize + ?Sized>(path: impl AsRef<Path>, value: &T) -> Result<(), IoError> {
    write_text(path, &to_json(value))
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String, IoError> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|e| IoError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<(), IoError> {
    let path = path.as_ref();
    fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| IoError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
}
