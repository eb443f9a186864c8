//! Edge-length geometry of a simplicial complex.
//!
//! Everything here is computed from edge lengths alone. The Gram matrix of a
//! simplex at a base vertex is reconstructed with the law of cosines, so a
//! simplex is usable exactly when some Euclidean simplex has those lengths.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::SimplicialComplex;

/// Relative cutoff for degenerate simplices: `det < DEGENERACY_TOL * m_T^(2n)`.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("pair ({i}, {j}) is not an edge of the complex")]
    NotAnEdge { i: usize, j: usize },
    #[error("edge ({i}, {j}) given twice with different lengths {first} and {second}")]
    AsymmetricLength {
        i: usize,
        j: usize,
        first: f64,
        second: f64,
    },
    #[error("no length for edge ({i}, {j})")]
    MissingEdgeLength { i: usize, j: usize },
    #[error("edge ({i}, {j}) has nonpositive length {length}")]
    NonPositiveLength { i: usize, j: usize, length: f64 },
    #[error("simplex {simplex:?} cannot be realized in Euclidean space (Gram determinant {det:e})")]
    NonRealizableSimplex { simplex: Vec<usize>, det: f64 },
    #[error("Gram matrix of simplex {simplex:?} is singular")]
    SingularGram { simplex: Vec<usize> },
    #[error("scale factor must be positive, got {0}")]
    InvalidScale(f64),
}

/// A simplicial complex with a length on each edge.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricComplex {
    complex: SimplicialComplex,
    edge_index: HashMap<(usize, usize), usize>,
    lengths: Vec<Option<f64>>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl MetricComplex {
    /// Attaches lengths to the edges of `complex`. Pairs may be given in either
    /// orientation; giving the same edge twice with different values is an
    /// error. Missing and nonpositive lengths are accepted here and reported
    /// by [`validate_metric`].
    pub fn new(
        complex: SimplicialComplex,
        lengths: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, MetricError> {
        let edge_index: HashMap<(usize, usize), usize> = complex
            .edges()
            .iter()
            .enumerate()
            .map(|(k, e)| ((e[0], e[1]), k))
            .collect();
        let mut values = vec![None; edge_index.len()];
        for (i, j, len) in lengths {
            let k = *edge_index
                .get(&key(i, j))
                .ok_or(MetricError::NotAnEdge { i, j })?;
            match values[k] {
                Some(prev) if prev != len => {
                    return Err(MetricError::AsymmetricLength {
                        i,
                        j,
                        first: prev,
                        second: len,
                    })
                }
                _ => values[k] = Some(len),
            }
        }
        Ok(Self {
            complex,
            edge_index,
            lengths: values,
        })
    }

    /// Lengths from a function of the two (ordered, `i < j`) endpoints.
    pub fn from_fn(complex: SimplicialComplex, mut length: impl FnMut(usize, usize) -> f64) -> Self {
        let lengths: Vec<Option<f64>> = complex
            .edges()
            .iter()
            .map(|e| Some(length(e[0], e[1])))
            .collect();
        let edge_index = complex
            .edges()
            .iter()
            .enumerate()
            .map(|(k, e)| ((e[0], e[1]), k))
            .collect();
        Self {
            complex,
            edge_index,
            lengths,
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn dimension(&self) -> usize {
        self.complex.dimension()
    }

    pub fn num_vertices(&self) -> usize {
        self.complex.num_vertices()
    }

    pub fn edge_length(&self, i: usize, j: usize) -> Option<f64> {
        self.edge_index
            .get(&key(i, j))
            .and_then(|&k| self.lengths[k])
    }

    fn length_checked(&self, i: usize, j: usize) -> Result<f64, MetricError> {
        let (i, j) = key(i, j);
        self.edge_length(i, j)
            .ok_or(MetricError::MissingEdgeLength { i, j })
    }

    /// `(i, j, length)` for every edge that has a length, in edge order.
    pub fn edge_lengths(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.complex
            .edges()
            .iter()
            .zip(&self.lengths)
            .filter_map(|(e, l)| l.map(|l| (e[0], e[1], l)))
    }

    /// Maximal edge length.
    pub fn mesh(&self) -> f64 {
        self.edge_lengths().map(|(_, _, l)| l).fold(0.0, f64::max)
    }

    /// All edge lengths multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, MetricError> {
        if !(factor > 0.0) {
            return Err(MetricError::InvalidScale(factor));
        }
        Ok(Self {
            complex: self.complex.clone(),
            edge_index: self.edge_index.clone(),
            lengths: self.lengths.iter().map(|l| l.map(|l| l * factor)).collect(),
        })
    }

    /// Relabels vertices by `v -> perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let complex = self
            .complex
            .relabeled(perm)
            .expect("a permutation preserves validity");
        let lengths: Vec<_> = self
            .edge_lengths()
            .map(|(i, j, l)| (perm[i], perm[j], l))
            .collect();
        Self::new(complex, lengths).expect("a permutation preserves edges")
    }

    /// Law-of-cosines Gram matrix of `simplex` at the vertex in position
    /// `base` of the (sorted) simplex. Rows and columns follow the remaining
    /// vertices in increasing order; entry `(l, m)` is
    /// `(d(b,l)^2 + d(b,m)^2 - d(l,m)^2) / 2`.
    pub fn gram_matrix(&self, simplex: &[usize], base: usize) -> Result<DMatrix<f64>, MetricError> {
        let b = simplex[base];
        let others: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != base)
            .map(|(_, &v)| v)
            .collect();
        let n = others.len();
        let to_base: Vec<f64> = others
            .iter()
            .map(|&v| self.length_checked(b, v).map(|d| d * d))
            .collect::<Result<_, _>>()?;
        let mut g = DMatrix::zeros(n, n);
        for l in 0..n {
            g[(l, l)] = to_base[l];
            for m in (l + 1)..n {
                let d = self.length_checked(others[l], others[m])?;
                let v = 0.5 * (to_base[l] + to_base[m] - d * d);
                g[(l, m)] = v;
                g[(m, l)] = v;
            }
        }
        Ok(g)
    }

    fn degeneracy_threshold(&self) -> f64 {
        DEGENERACY_TOL * self.mesh().powi(2 * self.dimension() as i32)
    }

    /// `sqrt(det G)` at the lowest vertex of the simplex; the Euclidean
    /// volume of the simplex is this divided by `n!`. Determinants within the
    /// degeneracy tolerance below zero are clamped to zero.
    pub fn simplex_volume_factor(&self, simplex: &[usize]) -> Result<f64, MetricError> {
        let det = self.gram_matrix(simplex, 0)?.determinant();
        if det < -self.degeneracy_threshold() {
            return Err(MetricError::NonRealizableSimplex {
                simplex: simplex.to_vec(),
                det,
            });
        }
        Ok(det.max(0.0).sqrt())
    }

    /// Sum of Euclidean volumes of the top simplices.
    pub fn total_volume(&self) -> Result<f64, MetricError> {
        let nfact = factorial(self.dimension());
        self.complex
            .simplices()
            .iter()
            .map(|s| self.simplex_volume_factor(s).map(|v| v / nfact))
            .sum()
    }

    pub fn mesh_stats(&self) -> Result<MeshStats, MetricError> {
        mesh_stats(self)
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Size and shape-quality summary of a metric complex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    /// Maximal edge length `m_T`.
    pub mesh: f64,
    pub min_edge: f64,
    /// `max(shape_term, edge_ratio)`.
    pub thinness: f64,
    /// Minimum over top simplices and base vertices of the Gram determinant.
    pub min_gram_det: f64,
    /// `max m_T * det(G)^(-1/(2n))` over simplices and base vertices.
    pub shape_term: f64,
    /// Longest over shortest edge.
    pub edge_ratio: f64,
    pub num_vertices: usize,
    pub num_simplices: usize,
}

pub fn mesh_stats(mc: &MetricComplex) -> Result<MeshStats, MetricError> {
    let n = mc.dimension();
    let mut mesh = 0.0f64;
    let mut min_edge = f64::INFINITY;
    for e in mc.complex.edges() {
        let l = mc.length_checked(e[0], e[1])?;
        mesh = mesh.max(l);
        min_edge = min_edge.min(l);
    }
    let threshold = mc.degeneracy_threshold();
    let mut min_gram_det = f64::INFINITY;
    for s in mc.complex.simplices() {
        for base in 0..=n {
            let det = mc.gram_matrix(s, base)?.determinant();
            if det < -threshold {
                return Err(MetricError::NonRealizableSimplex {
                    simplex: s.clone(),
                    det,
                });
            }
            min_gram_det = min_gram_det.min(det);
        }
    }
    let shape_term = if min_gram_det > 0.0 {
        mesh * min_gram_det.powf(-1.0 / (2.0 * n as f64))
    } else {
        f64::INFINITY
    };
    let edge_ratio = mesh / min_edge;
    Ok(MeshStats {
        mesh,
        min_edge,
        thinness: shape_term.max(edge_ratio),
        min_gram_det,
        shape_term,
        edge_ratio,
        num_vertices: mc.num_vertices(),
        num_simplices: mc.complex.simplices().len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricIssue {
    MissingEdge { i: usize, j: usize },
    NonPositiveLength { i: usize, j: usize, length: f64 },
    DegenerateSimplex {
        simplex: Vec<usize>,
        base: usize,
        det: f64,
        threshold: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub tolerance: f64,
    pub issues: Vec<MetricIssue>,
}

impl MetricReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Reports missing or nonpositive lengths and every (simplex, base) pair with
/// `det G < tolerance * m_T^(2n)`. Triangle-inequality violations show up as
/// negative determinants.
pub fn validate_metric(mc: &MetricComplex, tolerance: f64) -> MetricReport {
    let mut issues = Vec::new();
    for (e, l) in mc.complex.edges().iter().zip(&mc.lengths) {
        match *l {
            None => issues.push(MetricIssue::MissingEdge { i: e[0], j: e[1] }),
            Some(length) if !(length > 0.0) => issues.push(MetricIssue::NonPositiveLength {
                i: e[0],
                j: e[1],
                length,
            }),
            _ => {}
        }
    }
    if issues.is_empty() {
        let n = mc.dimension();
        let threshold = tolerance * mc.mesh().powi(2 * n as i32);
        for s in mc.complex.simplices() {
            for base in 0..=n {
                let det = mc
                    .gram_matrix(s, base)
                    .expect("all lengths present")
                    .determinant();
                if !(det >= threshold) {
                    issues.push(MetricIssue::DegenerateSimplex {
                        simplex: s.clone(),
                        base,
                        det,
                        threshold,
                    });
                }
            }
        }
    }
    MetricReport { tolerance, issues }
}
